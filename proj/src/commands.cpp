#include "interlace/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "interlace/analysis.hpp"
#include "interlace/darboux.hpp"

namespace interlace::cli {

namespace fs = std::filesystem;

std::string default_out_dir() {
  const char* env = std::getenv("INTERLACE_OUT");
  return env && *env ? env : ".";
}

std::string default_data_file() {
  const char* env = std::getenv("INTERLACE_DATA");
  if (env && *env) return env;
#ifdef INTERLACE_DATA_FILE
  return INTERLACE_DATA_FILE;
#else
  return "data/reference_tables.json";
#endif
}

namespace {

void ensure_dir(const std::string& dir) {
  if (!dir.empty() && dir != ".") fs::create_directories(dir);
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// Applies --param style overrides by round-tripping the spec through JSON.
PotentialSpec apply_overrides(const PotentialSpec& spec,
                              const std::map<std::string, std::string>& params) {
  if (params.empty()) return spec;
  json j = potential_to_json(spec);
  for (const auto& [key, value] : params) {
    auto comma = value.find(',');
    if (comma != std::string::npos) {
      j["params"][key] = json::array({std::strtod(value.c_str(), nullptr),
                                      std::strtod(value.c_str() + comma + 1, nullptr)});
    } else if (key == "coefficient_form") {
      j["params"][key] = value;
    } else {
      char* end = nullptr;
      double v = std::strtod(value.c_str(), &end);
      if (end == value.c_str())
        throw std::invalid_argument("cannot parse parameter " + key + "=" + value);
      j["params"][key] = v;
    }
  }
  return potential_from_json(j);
}

bool is_short_range(const PotentialSpec& spec) {
  return std::holds_alternative<SquareWell>(spec) || std::holds_alternative<SinusoidalWell>(spec);
}

struct ResolvedSolve {
  PotentialSpec spec;
  SolveMethod method = SolveMethod::Shooting;
  KRegion k_region;
  EnergyWindow window;
  double x_trunc = 10.0;
  int scan_points = 240;
};

ResolvedSolve resolve_solve(const SolveOptions& opt) {
  ResolvedSolve r;
  bool have = false;
  if (!opt.preset.empty()) {
    auto p = find_preset(opt.preset);
    if (!p) throw std::invalid_argument("unknown preset: " + opt.preset);
    r.spec = p->spec;
    r.method = p->method;
    r.k_region = p->k_region;
    r.window = p->window;
    r.x_trunc = p->x_trunc;
    r.scan_points = p->scan_points;
    have = true;
  }
  if (!opt.spec_file.empty()) {
    r.spec = potential_from_json(json::parse(read_text_file(opt.spec_file)));
    have = true;
  }
  if (!have) throw std::invalid_argument("solve: provide --preset or --spec");
  r.spec = apply_overrides(r.spec, opt.params);
  if (!opt.method.empty()) {
    if (opt.method == "transfer") r.method = SolveMethod::Transfer;
    else if (opt.method == "shooting") r.method = SolveMethod::Shooting;
    else throw std::invalid_argument("unknown method: " + opt.method);
  }
  if (r.method == SolveMethod::Transfer && !is_short_range(r.spec))
    throw std::invalid_argument("transfer method requires a short-range potential (square_well or "
                                "sinusoidal_well)");
  if (opt.window_lo) r.window.lo = *opt.window_lo;
  if (opt.window_hi) r.window.hi = *opt.window_hi;
  if (opt.x_trunc) r.x_trunc = *opt.x_trunc;
  if (opt.grid_min || opt.grid_max) {
    double lo = opt.grid_min.value_or(-r.x_trunc);
    double hi = opt.grid_max.value_or(r.x_trunc);
    r.x_trunc = std::max(std::abs(lo), std::abs(hi));
  }
  if (opt.scan_points) r.scan_points = *opt.scan_points;
  return r;
}

void write_result_files(const BoundStateResult& result, const PotentialSpec& spec,
                        const std::string& dir, bool json_only, bool csv_only,
                        std::ostream& out) {
  ensure_dir(dir);
  if (!csv_only) {
    std::string path = join(dir, "result.json");
    write_text_file(path, dump_json(result_to_json(result, spec)));
    out << "wrote " << path << "\n";
  }
  if (!json_only) {
    for (size_t i = 0; i < result.states.size(); ++i) {
      std::string path = join(dir, "state_" + std::to_string(i) + ".csv");
      write_text_file(path, state_csv(result.states[i]));
      out << "wrote " << path << "\n";
    }
  }
}

}  // namespace

int cmd_catalog(const CatalogOptions& opt, std::ostream& out, std::ostream& err) {
  try {
    if (!opt.preset.empty()) {
      auto p = find_preset(opt.preset);
      if (!p) {
        err << "unknown preset: " << opt.preset << "\n";
        return kUsageError;
      }
      if (opt.as_json) {
        json j{{"name", p->name},
               {"description", p->description},
               {"potential", potential_to_json(p->spec)}};
        out << dump_json(j);
      } else {
        out << p->name << ": " << p->description << "\n"
            << dump_json(potential_to_json(p->spec));
      }
      return kOk;
    }
    if (opt.as_json) {
      json fams = json::array();
      for (const auto& f : catalog_families()) {
        json params = json::array();
        for (const auto& s : f.params) params.push_back(s);
        fams.push_back(json{{"family", f.name}, {"params", params}});
      }
      json presets = json::array();
      for (const auto& p : catalog_presets())
        presets.push_back(json{{"name", p.name},
                               {"description", p.description},
                               {"potential", potential_to_json(p.spec)}});
      out << dump_json(json{{"families", fams}, {"presets", presets}});
      return kOk;
    }
    out << "families (" << catalog_families().size() << "):\n";
    for (const auto& f : catalog_families()) {
      out << "  " << f.name << " (";
      for (size_t i = 0; i < f.params.size(); ++i) out << (i ? ", " : "") << f.params[i];
      out << ")\n";
    }
    out << "presets:\n";
    for (const auto& p : catalog_presets())
      out << "  " << p.name << " - " << p.description << "\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "catalog: " << e.what() << "\n";
    return kUsageError;
  }
}

int cmd_solve(const SolveOptions& opt, std::ostream& out, std::ostream& err) {
  ResolvedSolve rs;
  try {
    rs = resolve_solve(opt);
    if (opt.tol_reality <= 0 || opt.tol_residual <= 0)
      throw std::invalid_argument("tolerances must be positive");
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    SolverOptions so;
    so.reality_tol = opt.tol_reality;
    so.residual_tol = opt.tol_residual;
    so.threads = opt.threads;
    if (opt.grid_points) so.output_points = *opt.grid_points;
    BoundStateResult result =
        rs.method == SolveMethod::Transfer
            ? find_bound_states_shortrange(rs.spec, rs.k_region, so)
            : find_bound_states_confining(rs.spec, rs.window, rs.x_trunc, rs.scan_points, so);
    PhaseSpec phase = phase_from_string(opt.phase);
    for (auto& wf : result.states) wf = fix_phase(wf, phase);

    out << family_name(rs.spec) << ": " << result.energies.size() << " bound state(s)\n";
    for (size_t i = 0; i < result.energies.size(); ++i)
      out << "  E_" << i << " = " << std::setprecision(12) << result.energies[i]
          << "  (residual " << std::setprecision(3) << result.residuals[i] << ")\n";
    for (const auto& w : result.warnings)
      out << "  warning: E = " << w.energy << ": " << w.message << "\n";

    std::string dir = opt.out_dir.empty() ? default_out_dir() : opt.out_dir;
    write_result_files(result, rs.spec, dir, opt.json_only, opt.csv_only, out);
    if (result.states.empty() && !opt.allow_empty) {
      err << "solve: no bound states found (pass --allow-empty to accept)\n";
      return kNumericalFailure;
    }
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "solve: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "solve: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_analyze(const AnalyzeOptions& opt, std::ostream& out, std::ostream& err) {
  json doc;
  PotentialSpec spec;
  BoundStateResult result;
  try {
    doc = json::parse(read_text_file(opt.result_file));
    result = result_from_json(doc, &spec);
  } catch (const std::exception& e) {
    err << "analyze: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    json states = json::array();
    std::string dir = opt.out_dir.empty() ? default_out_dir() : opt.out_dir;
    ensure_dir(dir);
    for (size_t i = 0; i < result.states.size(); ++i) {
      WaveFunction wf = result.states[i];
      if (!opt.phase.empty()) wf = fix_phase(wf, phase_from_string(opt.phase));
      ZeroReport zr = zero_report(wf, opt.merge_tol);
      WronskianDiagnostics wd = wronskian_diagnostics(wf, spec);
      DensityProfile dp = density_profile(wf);
      double res = residual_oracle(spec, wf, wf.energy);

      json lam = json::array(), mu = json::array(), maxx = json::array();
      for (double z : zr.lambdas) lam.push_back(quantize12(z));
      for (double z : zr.mus) mu.push_back(quantize12(z));
      for (double z : dp.maxima_x) maxx.push_back(quantize12(z));
      states.push_back(json{
          {"index", i},
          {"energy", quantize12(wf.energy)},
          {"phase", phase_name(wf.phase)},
          {"n_r", zr.n_r},
          {"n_i", zr.n_i},
          {"lambdas", lam},
          {"mus", mu},
          {"interlaced", zr.interlaced},
          {"first_kind", zr.first_kind == FirstKind::LambdaFirst ? "lambda" : "mu"},
          {"count_law_ok", count_law_check(zr.n_r, zr.n_i)},
          {"wronskian",
           json{{"identity_residual", quantize12(wd.identity_residual)},
                {"constant_sign", wd.constant_sign},
                {"sign", wd.sign},
                {"extremum_x", quantize12(wd.extremum_x)},
                {"min_abs", quantize12(wd.min_abs_w)},
                {"max_abs", quantize12(wd.max_abs_w)}}},
          {"density",
           json{{"n_maxima", dp.maxima_x.size()},
                {"maxima_x", maxx},
                {"min_rho", quantize12(dp.min_rho)}}},
          {"residual", quantize12(res)}});
      if (!opt.json_only) {
        std::string path = join(dir, "analysis_state_" + std::to_string(i) + ".csv");
        write_text_file(path, report_csv(wf));
      }
    }
    json report{{"schema", "v1"},
                {"source", opt.result_file},
                {"potential", potential_to_json(spec)},
                {"states", states}};
    if (!opt.csv_only) {
      std::string path = join(dir, "report.json");
      write_text_file(path, dump_json(report));
      out << "wrote " << path << "\n";
    }
    for (const auto& s : states)
      out << "state " << s.at("index") << ": E = " << s.at("energy").get<double>() << "  (n_R, n_I) = ("
          << s.at("n_r") << ", " << s.at("n_i") << ")  interlaced = "
          << (s.at("interlaced").get<bool>() ? "yes" : "no") << "\n";
    return kOk;
  } catch (const std::invalid_argument& e) {
    err << "analyze: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "analyze: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

int cmd_darboux(const DarbouxOptions& opt, std::ostream& out, std::ostream& err) {
  ErmakovAlpha alpha;
  CoefficientForm form;
  try {
    if (opt.form == "quadratic") form = CoefficientForm::Quadratic;
    else if (opt.form == "linear") form = CoefficientForm::Linear;
    else throw std::invalid_argument("coefficient form must be quadratic or linear");
    if (opt.levels < 0 || opt.levels > 29)
      throw std::invalid_argument("levels must be in [0, 29]");
    Grid grid(opt.grid_min, opt.grid_max, opt.grid_points);
    alpha = ermakov_alpha(OscillatorSeed{}, opt.lambda, opt.c0, opt.c1, grid, form);
  } catch (const std::exception& e) {
    err << "darboux: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    Superpotential beta = superpotential(alpha);
    PotentialSpec v = darboux_potential(alpha);

    BoundStateResult result;
    result.method = SolveMethod::Analytic;
    result.states.push_back(missing_state(beta));
    for (int n = 0; n < opt.levels; ++n)
      result.states.push_back(partner_state(seed_oscillator_state(n, alpha.grid), beta));
    for (auto& wf : result.states) {
      result.energies.push_back(wf.energy);
      result.residuals.push_back(residual_oracle(v, wf, wf.energy));
    }

    std::string dir = opt.out_dir.empty() ? default_out_dir() : opt.out_dir;
    ensure_dir(dir);
    json manifest{{"schema", "v1"},
                  {"c0", quantize12(opt.c0)},
                  {"c1", quantize12(opt.c1)},
                  {"lambda", quantize12(opt.lambda)},
                  {"coefficient_form", opt.form},
                  {"factorization_energy", quantize12(alpha.e0)},
                  {"ermakov_constant", quantize12(alpha.pinney)},
                  {"lambda_superpotential", quantize12(alpha.lambda_s)},
                  {"levels", opt.levels},
                  {"grid", grid_to_json(alpha.grid)}};
    write_text_file(join(dir, "manifest.json"), dump_json(manifest));
    out << "wrote " << join(dir, "manifest.json") << "\n";
    if (!opt.csv_only) {
      write_text_file(join(dir, "potential.json"), dump_json(potential_to_json(v)));
      out << "wrote " << join(dir, "potential.json") << "\n";
    }
    write_result_files(result, v, dir, opt.json_only, opt.csv_only, out);
    for (size_t i = 0; i < result.states.size(); ++i)
      out << "  E_" << i << " = " << std::setprecision(12) << result.energies[i] << "  (residual "
          << std::setprecision(3) << result.residuals[i] << ")\n";
    return kOk;
  } catch (const std::exception& e) {
    err << "darboux: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

// ---------------------------------------------------------------------------
// reproduce
// ---------------------------------------------------------------------------

namespace {

struct RowExpectation {
  std::string label;
  std::vector<double> lambdas, mus;
  std::optional<double> energy;
};

struct CaseExpectation {
  json config;
  std::vector<RowExpectation> rows;
};

struct TableExpectation {
  int id = 0;
  std::string name;
  std::string pipeline;  // transfer | analytic | darboux
  std::vector<CaseExpectation> cases;
};

std::vector<TableExpectation> load_expectations(const std::string& path, double* zero_tol,
                                                double* energy_tol) {
  json doc = json::parse(read_text_file(path));
  if (doc.at("schema") != "v1") throw std::invalid_argument("unsupported reference-table schema");
  *zero_tol = doc.at("zero_tolerance").get<double>();
  *energy_tol = doc.at("energy_tolerance").get<double>();
  std::vector<TableExpectation> tables;
  for (const auto& tj : doc.at("tables")) {
    TableExpectation t;
    t.id = tj.at("id").get<int>();
    t.name = tj.at("name").get<std::string>();
    t.pipeline = tj.at("pipeline").get<std::string>();
    for (const auto& cj : tj.at("cases")) {
      CaseExpectation c;
      c.config = cj;
      for (const auto& rj : cj.at("rows")) {
        RowExpectation r;
        r.label = rj.at("label").get<std::string>();
        for (const auto& v : rj.at("lambdas")) r.lambdas.push_back(v.get<double>());
        for (const auto& v : rj.at("mus")) r.mus.push_back(v.get<double>());
        if (rj.contains("energy")) r.energy = rj.at("energy").get<double>();
        c.rows.push_back(std::move(r));
      }
      t.cases.push_back(std::move(c));
    }
    tables.push_back(std::move(t));
  }
  return tables;
}

// The reference rows fix one ad-hoc global phase per state. Align that
// nuisance parameter by scanning theta for matching zero counts and minimal
// deviation, then compare every zero.
struct AlignOutcome {
  bool counts_ok = false;
  double theta = 0.0;
  double max_dev = std::numeric_limits<double>::infinity();
  ZeroReport report;
};

AlignOutcome align_phase(const WaveFunction& wf, const RowExpectation& row) {
  AlignOutcome best;
  auto eval = [&](double th) {
    WaveFunction r = fix_phase(wf, {PhaseRule::Raw, th});
    ZeroReport zr = zero_report(r);
    if (zr.lambdas.size() != row.lambdas.size() || zr.mus.size() != row.mus.size()) return;
    double dev = 0.0;
    for (size_t i = 0; i < row.lambdas.size(); ++i)
      dev = std::max(dev, std::abs(zr.lambdas[i] - row.lambdas[i]));
    for (size_t i = 0; i < row.mus.size(); ++i)
      dev = std::max(dev, std::abs(zr.mus[i] - row.mus[i]));
    if (!best.counts_ok || dev < best.max_dev) {
      best.counts_ok = true;
      best.theta = th;
      best.max_dev = dev;
      best.report = std::move(zr);
    }
  };
  const double pi = 3.14159265358979323846;
  const int coarse = 720;
  for (int i = 0; i < coarse; ++i) eval(pi * i / coarse);
  if (best.counts_ok) {
    double width = pi / coarse;
    for (int level = 0; level < 3; ++level) {
      double center = best.theta;
      for (int i = -20; i <= 20; ++i) eval(center + width * i / 20.0);
      width /= 20.0;
    }
  }
  return best;
}

struct CompareStats {
  int rows_total = 0, rows_passed = 0;
  int zeros_total = 0, zeros_passed = 0;
  bool ok() const { return rows_passed == rows_total; }
};

void compare_rows(const std::vector<WaveFunction>& states, const CaseExpectation& c,
                  double zero_tol, double energy_tol, std::ostream& out, CompareStats& stats) {
  for (size_t i = 0; i < c.rows.size(); ++i) {
    const RowExpectation& row = c.rows[i];
    ++stats.rows_total;
    stats.zeros_total += static_cast<int>(row.lambdas.size() + row.mus.size());
    if (i >= states.size()) {
      out << "    " << row.label << ": MISSING state\n";
      continue;
    }
    const WaveFunction& wf = states[i];
    bool row_ok = true;
    std::ostringstream detail;
    if (row.energy) {
      double de = std::abs(wf.energy - *row.energy);
      if (de > energy_tol) {
        row_ok = false;
        detail << "  energy " << wf.energy << " vs " << *row.energy << " (|dE|=" << de << ")";
      }
    }
    AlignOutcome al = align_phase(wf, row);
    if (!al.counts_ok) {
      ZeroReport zr = zero_report(wf);
      out << "    " << row.label << ": FAIL  counts (" << zr.n_r << ", " << zr.n_i
          << ") never match expected (" << row.lambdas.size() << ", " << row.mus.size()
          << ") at any phase" << detail.str() << "\n";
      continue;
    }
    int zeros_ok = 0;
    std::ostringstream devs;
    for (size_t j = 0; j < row.lambdas.size(); ++j) {
      double d = std::abs(al.report.lambdas[j] - row.lambdas[j]);
      if (d <= zero_tol) ++zeros_ok;
      else {
        row_ok = false;
        devs << "  lambda_" << j + 1 << " " << al.report.lambdas[j] << " vs " << row.lambdas[j];
      }
    }
    for (size_t j = 0; j < row.mus.size(); ++j) {
      double d = std::abs(al.report.mus[j] - row.mus[j]);
      if (d <= zero_tol) ++zeros_ok;
      else {
        row_ok = false;
        devs << "  mu_" << j + 1 << " " << al.report.mus[j] << " vs " << row.mus[j];
      }
    }
    stats.zeros_passed += zeros_ok;
    if (row_ok) ++stats.rows_passed;
    out << "    " << row.label << ": " << (row_ok ? "pass" : "FAIL") << "  E = " << std::fixed
        << std::setprecision(6) << wf.energy << std::defaultfloat << "  (n_R, n_I) = ("
        << al.report.n_r << ", " << al.report.n_i << ")  phase = " << std::setprecision(4)
        << al.theta << "  max|dz| = " << std::scientific << std::setprecision(2) << al.max_dev
        << std::defaultfloat << detail.str() << devs.str() << "\n";
  }
}

bool reproduce_table(const TableExpectation& t, double zero_tol, double energy_tol, int threads,
                     std::ostream& out) {
  out << "table " << t.id << " (" << t.name << ")\n";
  CompareStats stats;
  SolverOptions so;
  so.threads = threads;
  for (const auto& c : t.cases) {
    PotentialSpec spec = potential_from_json(c.config.at("potential"));
    std::vector<WaveFunction> states;
    if (t.pipeline == "transfer") {
      KRegion reg;
      const json& kr = c.config.at("k_region");
      reg.re_min = kr.at("re_min").get<double>();
      reg.re_max = kr.at("re_max").get<double>();
      reg.im_min = kr.at("im_min").get<double>();
      reg.im_max = kr.at("im_max").get<double>();
      reg.n_re = kr.at("n_re").get<int>();
      reg.n_im = kr.at("n_im").get<int>();
      states = find_bound_states_shortrange(spec, reg, so).states;
    } else if (t.pipeline == "analytic") {
      Grid grid = grid_from_json(c.config.at("grid"));
      states = levai_analytic_states(std::get<Levai>(spec), grid,
                                     static_cast<int>(c.rows.size())).states;
    } else if (t.pipeline == "darboux") {
      const json& ct = c.config.at("construction");
      CoefficientForm form = ct.value("coefficient_form", "quadratic") == std::string("linear")
                                 ? CoefficientForm::Linear
                                 : CoefficientForm::Quadratic;
      Grid grid = grid_from_json(ct.at("grid"));
      ErmakovAlpha alpha = ermakov_alpha(OscillatorSeed{}, ct.at("lambda").get<double>(),
                                         ct.at("c0").get<double>(), ct.at("c1").get<double>(),
                                         grid, form);
      Superpotential beta = superpotential(alpha);
      states.push_back(missing_state(beta));
      for (size_t n = 0; n + 1 < c.rows.size(); ++n)
        states.push_back(partner_state(seed_oscillator_state(static_cast<int>(n), grid), beta));
    } else {
      throw std::invalid_argument("unknown pipeline: " + t.pipeline);
    }
    if (c.config.contains("case_label"))
      out << "  case " << c.config.at("case_label").get<std::string>() << " ("
          << states.size() << " state(s) found)\n";
    compare_rows(states, c, zero_tol, energy_tol, out, stats);
  }
  out << "table " << t.id << ": " << (stats.ok() ? "PASS" : "FAIL") << " (" << stats.rows_passed
      << "/" << stats.rows_total << " rows, " << stats.zeros_passed << "/" << stats.zeros_total
      << " zeros within tolerance)\n";
  return stats.ok();
}

}  // namespace

int cmd_reproduce(const ReproduceOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<TableExpectation> tables;
  double zero_tol = 5e-3, energy_tol = 1e-3;
  try {
    std::string path = opt.data_file.empty() ? default_data_file() : opt.data_file;
    tables = load_expectations(path, &zero_tol, &energy_tol);
  } catch (const std::exception& e) {
    err << "reproduce: " << e.what() << "\n";
    return kUsageError;
  }
  try {
    bool all = opt.table == "all";
    int wanted = all ? -1 : std::atoi(opt.table.c_str());
    if (!all && (wanted < 1 || wanted > static_cast<int>(tables.size()))) {
      err << "reproduce: table id must be 1.." << tables.size() << " or 'all'\n";
      return kUsageError;
    }
    bool ok = true;
    int run = 0;
    for (const auto& t : tables) {
      if (!all && t.id != wanted) continue;
      ++run;
      ok &= reproduce_table(t, zero_tol, energy_tol, opt.threads, out);
    }
    if (run == 0) {
      err << "reproduce: no matching table\n";
      return kUsageError;
    }
    out << (ok ? "reproduce: all comparisons passed\n" : "reproduce: mismatches found\n");
    return ok ? kOk : kMismatch;
  } catch (const std::exception& e) {
    err << "reproduce: " << e.what() << "\n";
    return kNumericalFailure;
  }
}

}  // namespace interlace::cli
