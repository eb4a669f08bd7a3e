#include "interlace/catalog.hpp"

#include <map>

namespace interlace {

namespace {

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  Preset pt;
  pt.name = "poschl-teller";
  pt.description = "complex Poschl-Teller well, kappa = 2 (single bound state)";
  pt.spec = PoschlTeller(2.0);
  pt.method = SolveMethod::Shooting;
  pt.window = {-3.0, -0.05};
  pt.x_trunc = 10.0;
  pt.scan_points = 200;
  out.push_back(pt);

  Preset sw;
  sw.name = "sinusoidal-well";
  sw.description = "sinusoidal complex well, w0 = 30, v0 = 0.49 (four bound states)";
  sw.spec = SinusoidalWell(30.0, 0.49);
  sw.method = SolveMethod::Transfer;
  sw.k_region = {-0.4, 0.4, 0.05, 5.55, 25, 91};
  out.push_back(sw);

  Preset cu;
  cu.name = "cubic-oscillator";
  cu.description = "oscillator with imaginary cubic term x^2 + 2 i x^3";
  cu.spec = CubicOscillator{};
  cu.method = SolveMethod::Shooting;
  cu.window = {0.5, 8.0};
  cu.x_trunc = 10.0;
  cu.scan_points = 200;
  out.push_back(cu);

  Preset lv;
  lv.name = "levai";
  lv.description = "Levai potential, nu = -7+i, mu = -3-i, eps = 0.1 (five bound states)";
  lv.spec = Levai{};
  lv.method = SolveMethod::Shooting;
  lv.window = {-24.9, -0.05};
  lv.x_trunc = 30.0;
  lv.scan_points = 320;
  out.push_back(lv);

  const double bs[3] = {4.2762, 4.4691, 8.9158};
  for (int i = 0; i < 3; ++i) {
    Preset q;
    q.name = "square-well-" + std::to_string(i + 1);
    q.description = "complex square well, a = 3, b = " + std::to_string(bs[i]);
    q.spec = SquareWell(3.0, bs[i], -1.0, -0.2, 0.1);
    q.method = SolveMethod::Transfer;
    q.k_region = {-0.3, 0.3, 0.02, 1.05, 21, 61};
    out.push_back(q);
  }

  Preset dp;
  dp.name = "darboux-pt";
  dp.description = "complex oscillator partner, c0 = 2, c1 = 0, lambda = 1.7";
  dp.spec = DarbouxOscillator(2.0, 0.0, 1.7);
  dp.method = SolveMethod::Shooting;
  dp.window = {-1.9, 8.0};
  dp.x_trunc = 10.0;
  dp.scan_points = 240;
  out.push_back(dp);

  Preset ds;
  ds.name = "darboux-skew";
  ds.description = "complex oscillator partner, c0 = 1.2, c1 = 1, lambda = 0.02";
  ds.spec = DarbouxOscillator(1.2, 1.0, 0.02);
  ds.method = SolveMethod::Shooting;
  ds.window = {-1.9, 8.0};
  ds.x_trunc = 10.0;
  ds.scan_points = 240;
  out.push_back(ds);

  return out;
}

const std::map<std::string, std::string>& aliases() {
  static const std::map<std::string, std::string> m = {
      {"sinusoidal-paper", "sinusoidal-well"},
      {"fig5-upper", "square-well-1"},
      {"fig5-middle", "square-well-2"},
      {"fig5-lower", "square-well-3"},
  };
  return m;
}

}  // namespace

const std::vector<Preset>& catalog_presets() {
  static const std::vector<Preset> presets = build_presets();
  return presets;
}

std::optional<Preset> find_preset(const std::string& name) {
  std::string wanted = name;
  auto it = aliases().find(name);
  if (it != aliases().end()) wanted = it->second;
  for (const auto& p : catalog_presets())
    if (p.name == wanted) return p;
  return std::nullopt;
}

const std::vector<FamilyInfo>& catalog_families() {
  static const std::vector<FamilyInfo> fams = {
      {"poschl_teller", {"kappa"}},
      {"sinusoidal_well", {"w0", "v0"}},
      {"cubic_oscillator", {}},
      {"levai", {"nu", "mu", "epsilon", "kappa"}},
      {"square_well", {"a", "b", "v0", "vi1", "vi2"}},
      {"darboux_oscillator", {"c0", "c1", "lambda", "coefficient_form"}},
  };
  return fams;
}

}  // namespace interlace
