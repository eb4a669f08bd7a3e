#pragma once

#include <optional>
#include <string>
#include <vector>

#include "interlace/potentials.hpp"
#include "interlace/solver.hpp"

namespace interlace {

// Bundled parameter sets with solver defaults; names are stable CLI surface.
struct Preset {
  std::string name;
  std::string description;
  PotentialSpec spec;
  SolveMethod method = SolveMethod::Shooting;
  KRegion k_region;
  EnergyWindow window;
  double x_trunc = 10.0;
  int scan_points = 240;
};

const std::vector<Preset>& catalog_presets();

// Resolves a preset by name, accepting legacy aliases.
std::optional<Preset> find_preset(const std::string& name);

// The six named potential families with their parameter names.
struct FamilyInfo {
  std::string name;
  std::vector<std::string> params;
};
const std::vector<FamilyInfo>& catalog_families();

}  // namespace interlace
