#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "interlace/commands.hpp"

using namespace interlace;

int main(int argc, char** argv) {
  CLI::App app{"bound states, Darboux partners, and zero interlacing for complex 1-D potentials"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads for mesh/energy scans (0 = all cores)");

  // catalog ------------------------------------------------------------
  cli::CatalogOptions cat;
  auto* c_cat = app.add_subcommand("catalog", "list potential families and presets");
  c_cat->add_option("--preset", cat.preset, "show a single preset");
  c_cat->add_flag("--json", cat.as_json, "machine-readable output");

  // solve --------------------------------------------------------------
  cli::SolveOptions sol;
  std::vector<std::string> param_kv;
  double kappa_opt = 0;
  auto* c_sol = app.add_subcommand("solve", "find bound states of a potential");
  c_sol->add_option("--preset", sol.preset, "start from a named preset");
  c_sol->add_option("--spec", sol.spec_file, "potential spec JSON file");
  c_sol->add_option("--param", param_kv, "override a parameter, key=value (repeatable)");
  c_sol->add_option("--kappa", kappa_opt, "shortcut for --param kappa=...");
  c_sol->add_option("--method", sol.method, "transfer | shooting");
  c_sol->add_option("--phase", sol.phase, "peak | symmetry | raw:theta (default peak)");
  double wlo = 0, whi = 0, xtr = 0, gmin = 0, gmax = 0;
  int gpts = 0;
  auto* owlo = c_sol->add_option("--window-lo", wlo, "energy window lower edge (shooting)");
  auto* owhi = c_sol->add_option("--window-hi", whi, "energy window upper edge (shooting)");
  auto* oxtr = c_sol->add_option("--x-trunc", xtr, "initial truncation half-width (shooting)");
  auto* ogmin = c_sol->add_option("--grid-min", gmin, "truncation window lower edge (shooting)");
  auto* ogmax = c_sol->add_option("--grid-max", gmax, "truncation window upper edge (shooting)");
  auto* ogpts = c_sol->add_option("--grid-points", gpts, "output grid size per state");
  int scan = 0;
  auto* oscan = c_sol->add_option("--scan-points", scan, "energy scan resolution (shooting)");
  c_sol->add_option("--tol-reality", sol.tol_reality, "max |Im E| accepted as real");
  c_sol->add_option("--tol-residual", sol.tol_residual, "max eigenstate residual");
  c_sol->add_flag("--allow-empty", sol.allow_empty, "exit 0 even when no state is found");
  c_sol->add_flag("--json", sol.json_only, "write only JSON output");
  c_sol->add_flag("--csv", sol.csv_only, "write only CSV output");
  c_sol->add_option("--out", sol.out_dir, "output directory (default $INTERLACE_OUT or .)");

  // analyze ------------------------------------------------------------
  cli::AnalyzeOptions ana;
  auto* c_ana = app.add_subcommand("analyze", "zeros, interlacing, Wronskian, density reports");
  c_ana->add_option("result", ana.result_file, "result.json produced by solve or darboux")
      ->required();
  c_ana->add_option("--phase", ana.phase, "re-fix the phase before analysis");
  c_ana->add_option("--merge-tol", ana.merge_tol, "coincidence tolerance for zeros");
  c_ana->add_flag("--json", ana.json_only, "write only JSON output");
  c_ana->add_flag("--csv", ana.csv_only, "write only CSV output");
  c_ana->add_option("--out", ana.out_dir, "output directory");

  // darboux ------------------------------------------------------------
  cli::DarbouxOptions dbx;
  auto* c_dbx = app.add_subcommand("darboux", "generate a complex oscillator partner family");
  c_dbx->add_option("--c0", dbx.c0, "alpha coefficient c0")->required();
  c_dbx->add_option("--c1", dbx.c1, "alpha coefficient c1");
  c_dbx->add_option("--lambda", dbx.lambda, "imaginary deformation strength")->required();
  c_dbx->add_option("--form", dbx.form, "radicand constant form: quadratic | linear");
  c_dbx->add_option("--levels", dbx.levels, "number of partner states above the missing one");
  c_dbx->add_option("--grid-min", dbx.grid_min, "grid lower edge");
  c_dbx->add_option("--grid-max", dbx.grid_max, "grid upper edge");
  c_dbx->add_option("--grid-points", dbx.grid_points, "grid size");
  c_dbx->add_flag("--json", dbx.json_only, "write only JSON output");
  c_dbx->add_flag("--csv", dbx.csv_only, "write only CSV output");
  c_dbx->add_option("--out", dbx.out_dir, "output directory");

  // reproduce ----------------------------------------------------------
  cli::ReproduceOptions rep;
  auto* c_rep = app.add_subcommand("reproduce", "compare against the reference zero tables");
  c_rep->add_option("table", rep.table, "table id 1..5 or 'all' (default all)");
  c_rep->add_option("--data", rep.data_file, "reference tables JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : cli::kUsageError;
  }

  sol.threads = threads;
  rep.threads = threads;
  for (const auto& kv : param_kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::cerr << "solve: --param expects key=value, got " << kv << "\n";
      return cli::kUsageError;
    }
    sol.params[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (c_sol->count("--kappa")) sol.params["kappa"] = std::to_string(kappa_opt);
  if (owlo->count()) sol.window_lo = wlo;
  if (owhi->count()) sol.window_hi = whi;
  if (oxtr->count()) sol.x_trunc = xtr;
  if (ogmin->count()) sol.grid_min = gmin;
  if (ogmax->count()) sol.grid_max = gmax;
  if (ogpts->count()) sol.grid_points = gpts;
  if (oscan->count()) sol.scan_points = scan;

  if (c_cat->parsed()) return cli::cmd_catalog(cat, std::cout, std::cerr);
  if (c_sol->parsed()) return cli::cmd_solve(sol, std::cout, std::cerr);
  if (c_ana->parsed()) return cli::cmd_analyze(ana, std::cout, std::cerr);
  if (c_dbx->parsed()) return cli::cmd_darboux(dbx, std::cout, std::cerr);
  if (c_rep->parsed()) return cli::cmd_reproduce(rep, std::cout, std::cerr);
  return cli::kUsageError;
}
