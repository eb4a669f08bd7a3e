#pragma once

#include <optional>
#include <string>
#include <vector>

#include "interlace/grid.hpp"
#include "interlace/potentials.hpp"
#include "interlace/solver.hpp"

namespace interlace {

// Sign-change zeros of uniformly sampled data, refined by bisection on the
// local interpolant (cubic Hermite when derivative samples are supplied,
// linear otherwise). Tangential zeros are ignored. Zeros closer than 2h to a
// grid end are returned separately.
struct ZeroScan {
  std::vector<double> zeros;
  std::vector<double> boundary_zeros;
};

// `envelope`, when given, suppresses spurious crossings of roundoff size: a
// bracket is ignored unless one endpoint exceeds 1e-12 of the local envelope.
ZeroScan find_zeros(const Grid& grid, const std::vector<double>& samples,
                    const std::vector<double>* dsamples = nullptr, double refine_tol = 1e-10,
                    const std::vector<double>* envelope = nullptr);

enum class FirstKind { LambdaFirst, MuFirst };

struct ZeroReport {
  std::vector<double> lambdas;  // zeros of Re psi
  std::vector<double> mus;      // zeros of Im psi
  int n_r = 0;
  int n_i = 0;
  bool interlaced = false;
  FirstKind first_kind = FirstKind::LambdaFirst;
  PhaseSpec phase;
  std::vector<std::pair<double, double>> violations;  // offending adjacent pairs
};

ZeroReport zero_report(const WaveFunction& wf, double merge_tol = 0.0, double refine_tol = 1e-10);

// True iff the two sorted lists strictly alternate and no pair coincides
// within merge_tol; violations lists each offending adjacent pair.
std::pair<bool, std::vector<std::pair<double, double>>> interlacing_check(
    const std::vector<double>& lambdas, const std::vector<double>& mus, double merge_tol);

inline bool count_law_check(int n_r, int n_i) { return std::abs(n_r - n_i) <= 1; }

struct WronskianDiagnostics {
  std::vector<double> w;          // W[psi_R, psi_I] = psi_R' psi_I - psi_R psi_I'
  double extremum_x = 0.0;        // location of max |W|
  bool constant_sign = false;     // one sign wherever |W| > 1e-5 max|W|
  int sign = 0;
  double identity_residual = 0.0; // max |W' + |psi|^2 V_I| over smooth interior
  double min_abs_w = 0.0;         // min |W| over the density core (rho >= 1e-4 peak)
  double max_abs_w = 0.0;
};

WronskianDiagnostics wronskian_diagnostics(const WaveFunction& wf, const PotentialSpec& spec);

struct DensityProfile {
  std::vector<double> rho;
  std::vector<double> maxima_x, maxima_value;
  std::vector<double> minima_x, minima_value;
  double min_rho = 0.0;  // over the grid interior
};

DensityProfile density_profile(const WaveFunction& wf);

// sup-norm of -psi'' + (V - E) psi over interior nodes (5-point stencil),
// normalized by max |psi|; degenerate zero input returns 0.
double residual_oracle(const PotentialSpec& spec, const WaveFunction& wf, double energy);

}  // namespace interlace
