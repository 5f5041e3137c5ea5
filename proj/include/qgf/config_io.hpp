#pragma once

// Coupling config files (JSON):
//
//   { "n": 4, "r": 2,
//     "S": [[[re, im], ...], ...],          r rows of r entries
//     "T": [[[re, im], ...], ...],          r rows of n-r entries
//     "lines": [{"role": "input"}, {"role": "output"},
//               {"role": "controller", "V": 1.0}, {"role": "drain"}],
//     "permutation": [0, 1, 2, 3],          optional
//     "design": {...} }                     optional, carried through untouched
//
// Entries may also be plain numbers (real). "lines" is listed in file order;
// without "permutation" file order is ST order. With it, file line i sits at
// ST coordinate permutation[i].

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "qgf/coupling.hpp"

namespace qgf {

struct CouplingConfig {
  STCoupling coupling;
  LineConfig lines;  // ST order
  std::optional<nlohmann::json> design;
};

// Structural problems throw Error(ParseError). Shape and Hermiticity are left
// for validate_st so that they are reported with their own codes.
CouplingConfig parse_config(std::string_view text);
CouplingConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const CouplingConfig& config);
std::string dump_config(const CouplingConfig& config);
void save_config(const std::filesystem::path& path, const CouplingConfig& config);

}  // namespace qgf
