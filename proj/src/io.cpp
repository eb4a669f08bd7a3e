#include "interlace/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace interlace {

double quantize12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return std::strtod(buf, nullptr);
}

namespace {

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

json num(double v) { return json(quantize12(v)); }

json num_array(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::vector<double> doubles_from(const json& j) {
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

json complex_param(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

cplx complex_from(const json& j) {
  if (j.is_array()) return {j.at(0).get<double>(), j.at(1).get<double>()};
  return {j.get<double>(), 0.0};
}

}  // namespace

json grid_to_json(const Grid& g) {
  return json{{"x_min", num(g.x_min)}, {"x_max", num(g.x_max)}, {"n_points", g.n_points}};
}

Grid grid_from_json(const json& j) {
  return Grid(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
              j.at("n_points").get<int>());
}

json potential_to_json(const PotentialSpec& spec) {
  json p = json::object();
  std::visit(
      [&p](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, PoschlTeller>) {
          p["kappa"] = num(v.kappa);
        } else if constexpr (std::is_same_v<T, SinusoidalWell>) {
          p["w0"] = num(v.w0);
          p["v0"] = num(v.v0);
        } else if constexpr (std::is_same_v<T, CubicOscillator>) {
        } else if constexpr (std::is_same_v<T, Levai>) {
          p["nu"] = complex_param(v.nu);
          p["mu"] = complex_param(v.mu);
          p["epsilon"] = num(v.epsilon);
          p["kappa"] = num(v.kappa);
        } else if constexpr (std::is_same_v<T, SquareWell>) {
          p["a"] = num(v.a);
          p["b"] = num(v.b);
          p["v0"] = num(v.v0);
          p["vi1"] = num(v.vi1);
          p["vi2"] = num(v.vi2);
        } else if constexpr (std::is_same_v<T, DarbouxOscillator>) {
          p["c0"] = num(v.c0);
          p["c1"] = num(v.c1);
          p["lambda"] = num(v.lambda);
          p["coefficient_form"] =
              v.form == CoefficientForm::Quadratic ? "quadratic" : "linear";
        } else {  // Sampled
          p["grid"] = grid_to_json(v.grid);
          json re = json::array(), im = json::array();
          for (cplx z : v.values) {
            re.push_back(num(z.real()));
            im.push_back(num(z.imag()));
          }
          p["re"] = re;
          p["im"] = im;
        }
      },
      spec);
  return json{{"family", family_name(spec)}, {"params", p}};
}

PotentialSpec potential_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  const json& p = j.at("params");
  if (family == "poschl_teller") return PoschlTeller(p.at("kappa").get<double>());
  if (family == "sinusoidal_well")
    return SinusoidalWell(p.at("w0").get<double>(), p.at("v0").get<double>());
  if (family == "cubic_oscillator") return CubicOscillator{};
  if (family == "levai")
    return Levai{complex_from(p.at("nu")), complex_from(p.at("mu")),
                 p.at("epsilon").get<double>(), p.at("kappa").get<double>()};
  if (family == "square_well")
    return SquareWell(p.at("a").get<double>(), p.at("b").get<double>(), p.at("v0").get<double>(),
                      p.at("vi1").get<double>(), p.at("vi2").get<double>());
  if (family == "darboux_oscillator") {
    CoefficientForm form = CoefficientForm::Quadratic;
    if (p.contains("coefficient_form") && p.at("coefficient_form") == "linear")
      form = CoefficientForm::Linear;
    return DarbouxOscillator(p.at("c0").get<double>(), p.at("c1").get<double>(),
                             p.at("lambda").get<double>(), form);
  }
  if (family == "sampled") {
    Sampled s;
    s.grid = grid_from_json(p.at("grid"));
    auto re = doubles_from(p.at("re"));
    auto im = doubles_from(p.at("im"));
    if (re.size() != im.size() || static_cast<int>(re.size()) != s.grid.n_points)
      throw std::invalid_argument("sampled potential: sample count does not match grid");
    s.values.resize(re.size());
    for (size_t i = 0; i < re.size(); ++i) s.values[i] = {re[i], im[i]};
    return s;
  }
  throw std::invalid_argument("unknown potential family: " + family);
}

std::string phase_name(const PhaseSpec& p) {
  switch (p.rule) {
    case PhaseRule::PeakPositive: return "peak";
    case PhaseRule::SymmetryAdapted: return "symmetry";
    case PhaseRule::Raw: return "raw:" + fmt12(p.theta);
  }
  return "raw:0";
}

PhaseSpec phase_from_string(const std::string& s) {
  if (s == "peak") return {PhaseRule::PeakPositive, 0.0};
  if (s == "symmetry") return {PhaseRule::SymmetryAdapted, 0.0};
  if (s.rfind("raw", 0) == 0) {
    double theta = 0.0;
    if (s.size() > 4 && s[3] == ':') theta = std::strtod(s.c_str() + 4, nullptr);
    return {PhaseRule::Raw, theta};
  }
  throw std::invalid_argument("unknown phase rule: " + s + " (expected peak|symmetry|raw:theta)");
}

namespace {

const char* method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::Transfer: return "transfer";
    case SolveMethod::Shooting: return "shooting";
    case SolveMethod::Analytic: return "analytic";
  }
  return "shooting";
}

SolveMethod method_from(const std::string& s) {
  if (s == "transfer") return SolveMethod::Transfer;
  if (s == "analytic") return SolveMethod::Analytic;
  return SolveMethod::Shooting;
}

}  // namespace

json result_to_json(const BoundStateResult& result, const PotentialSpec& spec) {
  json states = json::array();
  for (const auto& wf : result.states) {
    json re = json::array(), im = json::array(), dre = json::array(), dim = json::array();
    for (cplx z : wf.psi) {
      re.push_back(num(z.real()));
      im.push_back(num(z.imag()));
    }
    for (cplx z : wf.dpsi) {
      dre.push_back(num(z.real()));
      dim.push_back(num(z.imag()));
    }
    states.push_back(json{{"grid", grid_to_json(wf.grid)},
                          {"energy", num(wf.energy)},
                          {"normalized", wf.normalized},
                          {"phase", phase_name(wf.phase)},
                          {"psi_re", re},
                          {"psi_im", im},
                          {"dpsi_re", dre},
                          {"dpsi_im", dim}});
  }
  json warnings = json::array();
  for (const auto& w : result.warnings)
    warnings.push_back(json{{"energy", num(w.energy)}, {"message", w.message}});
  return json{{"schema", "v1"},
              {"potential", potential_to_json(spec)},
              {"method", method_name(result.method)},
              {"energies", num_array(result.energies)},
              {"residuals", num_array(result.residuals)},
              {"states", states},
              {"warnings", warnings}};
}

BoundStateResult result_from_json(const json& j, PotentialSpec* spec_out) {
  if (j.at("schema") != "v1") throw std::invalid_argument("unsupported result schema");
  if (spec_out) *spec_out = potential_from_json(j.at("potential"));
  BoundStateResult out;
  out.method = method_from(j.at("method").get<std::string>());
  out.energies = doubles_from(j.at("energies"));
  out.residuals = doubles_from(j.at("residuals"));
  if (j.contains("warnings"))
    for (const auto& w : j.at("warnings"))
      out.warnings.push_back(
          {w.at("energy").get<double>(), w.at("message").get<std::string>()});
  for (const auto& s : j.at("states")) {
    WaveFunction wf;
    wf.grid = grid_from_json(s.at("grid"));
    wf.energy = s.at("energy").get<double>();
    wf.normalized = s.at("normalized").get<bool>();
    wf.phase = phase_from_string(s.at("phase").get<std::string>());
    auto re = doubles_from(s.at("psi_re"));
    auto im = doubles_from(s.at("psi_im"));
    auto dre = doubles_from(s.at("dpsi_re"));
    auto dim = doubles_from(s.at("dpsi_im"));
    wf.psi.resize(re.size());
    wf.dpsi.resize(re.size());
    for (size_t i = 0; i < re.size(); ++i) {
      wf.psi[i] = {re[i], im[i]};
      wf.dpsi[i] = {dre[i], dim[i]};
    }
    out.states.push_back(std::move(wf));
  }
  return out;
}

std::string state_csv(const WaveFunction& wf) {
  std::ostringstream os;
  os << "x,psi_re,psi_im,rho\n";
  for (int i = 0; i < wf.grid.n_points; ++i) {
    os << fmt12(wf.grid.x(i)) << ',' << fmt12(wf.psi[i].real()) << ',' << fmt12(wf.psi[i].imag())
       << ',' << fmt12(std::norm(wf.psi[i])) << '\n';
  }
  return os.str();
}

std::string report_csv(const WaveFunction& wf) {
  std::ostringstream os;
  os << "x,psi_re,psi_im,rho,wronskian\n";
  for (int i = 0; i < wf.grid.n_points; ++i) {
    double w =
        wf.dpsi[i].real() * wf.psi[i].imag() - wf.psi[i].real() * wf.dpsi[i].imag();
    os << fmt12(wf.grid.x(i)) << ',' << fmt12(wf.psi[i].real()) << ',' << fmt12(wf.psi[i].imag())
       << ',' << fmt12(std::norm(wf.psi[i])) << ',' << fmt12(w) << '\n';
  }
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

}  // namespace interlace
