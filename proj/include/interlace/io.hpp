#pragma once

#include <string>

#include <json.hpp>

#include "interlace/analysis.hpp"
#include "interlace/potentials.hpp"
#include "interlace/solver.hpp"

namespace interlace {

using json = nlohmann::ordered_json;

// All emitted numbers are quantized to 12 significant digits so identical
// inputs produce byte-identical files and parsing restores the stored value
// exactly.
double quantize12(double v);

json grid_to_json(const Grid& g);
Grid grid_from_json(const json& j);

// {"family": ..., "params": {...}}; field names are part of the file contract.
json potential_to_json(const PotentialSpec& spec);
PotentialSpec potential_from_json(const json& j);

json result_to_json(const BoundStateResult& result, const PotentialSpec& spec);
BoundStateResult result_from_json(const json& j, PotentialSpec* spec_out = nullptr);

std::string phase_name(const PhaseSpec& p);
PhaseSpec phase_from_string(const std::string& s);

// CSV: '.' decimal, ',' separator, header row, 12 significant digits.
std::string state_csv(const WaveFunction& wf);
std::string report_csv(const WaveFunction& wf);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::string dump_json(const json& j);

}  // namespace interlace
