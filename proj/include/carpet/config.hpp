#ifndef CARPET_CONFIG_HPP
#define CARPET_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "carpet/conformal_ifs.hpp"
#include "json.hpp"

namespace carpet {

/// Carpet description as read from JSON:
///   {"x_maps": [MapSpec...], "y_maps": [MapSpec...], "cells": [[i, j]...],
///    "distortion_override": real (optional), "seed": integer (optional)}
/// MapSpec is {"kind": "affine", "slope": s, "offset": o} or
/// {"kind": "moebius", "a": a, "b": b, "c": c, "d": d}.
struct CarpetConfig {
  std::vector<IntervalMap> x_maps;
  std::vector<IntervalMap> y_maps;
  std::vector<CellIndex> cells;
  std::optional<double> distortion_override;
  std::optional<std::uint64_t> seed;

  bool operator==(const CarpetConfig&) const = default;

  /// Builds the carpet and runs the contraction and coordinate OSC checks.
  CarpetSystem system() const;
};

/// {"maps": [MapSpec...], "seed": integer (optional)}
struct ParabolicConfig {
  std::vector<IntervalMap> maps;
  std::optional<std::uint64_t> seed;

  bool operator==(const ParabolicConfig&) const = default;
};

nlohmann::json map_to_json(const IntervalMap& m);
IntervalMap map_from_json(const nlohmann::json& j, const std::string& where);

/// JSON syntax errors raise InputError with the byte offset; unknown keys,
/// type errors and bad indices raise InputError naming the location;
/// contraction and OSC failures raise ValidationError.
CarpetConfig parse_config(std::string_view bytes);
ParabolicConfig parse_parabolic_config(std::string_view bytes);

nlohmann::json config_to_json(const CarpetConfig& cfg);
nlohmann::json config_to_json(const ParabolicConfig& cfg);

/// Compact JSON with 17 significant digits; parse_config inverts it.
std::string serialize_config(const CarpetConfig& cfg);
std::string serialize_config(const ParabolicConfig& cfg);

/// Reads a whole file; InputError if it cannot be opened.
std::string read_file(const std::string& path);

}  // namespace carpet

#endif  // CARPET_CONFIG_HPP
