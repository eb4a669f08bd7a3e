#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "interlace/catalog.hpp"
#include "interlace/io.hpp"

namespace interlace::cli {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kUsageError = 2;
constexpr int kNumericalFailure = 3;

struct CatalogOptions {
  std::string preset;
  bool as_json = false;
};

struct SolveOptions {
  std::string preset;
  std::string spec_file;
  std::map<std::string, std::string> params;
  std::string method;  // "", "transfer", "shooting"
  std::string phase = "peak";
  std::optional<double> window_lo, window_hi, x_trunc;
  std::optional<double> grid_min, grid_max;  // shooting truncation window
  std::optional<int> grid_points;            // output grid size
  std::optional<int> scan_points;
  double tol_reality = 1e-6;
  double tol_residual = 1e-4;
  int threads = 0;
  bool allow_empty = false;
  bool json_only = false, csv_only = false;
  std::string out_dir;
};

struct AnalyzeOptions {
  std::string result_file;
  std::string phase;  // empty keeps the stored phase
  double merge_tol = 0.0;
  bool json_only = false, csv_only = false;
  std::string out_dir;
};

struct DarbouxOptions {
  double c0 = 2.0, c1 = 0.0, lambda = 1.7;
  std::string form = "quadratic";
  int levels = 5;
  double grid_min = -10.0, grid_max = 10.0;
  int grid_points = 20001;
  bool json_only = false, csv_only = false;
  std::string out_dir;
};

struct ReproduceOptions {
  std::string table = "all";  // "1".."5" or "all"
  std::string data_file;
  int threads = 0;
};

int cmd_catalog(const CatalogOptions&, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions&, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions&, std::ostream& out, std::ostream& err);
int cmd_darboux(const DarbouxOptions&, std::ostream& out, std::ostream& err);
int cmd_reproduce(const ReproduceOptions&, std::ostream& out, std::ostream& err);

// $INTERLACE_OUT when set, "." otherwise.
std::string default_out_dir();

// Compiled-in fallback location of the reference tables.
std::string default_data_file();

}  // namespace interlace::cli
