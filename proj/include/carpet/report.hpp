#ifndef CARPET_REPORT_HPP
#define CARPET_REPORT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "carpet/dimension.hpp"
#include "carpet/parabolic.hpp"
#include "carpet/subsystem.hpp"
#include "json.hpp"

namespace carpet {

inline constexpr const char* kVersion = "0.1.0";

/// Output document of every command. All keys are always present; sections a
/// command does not produce are null.
struct ReportDoc {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  nlohmann::json validation;
  nlohmann::json dimension;
  nlohmann::json subsystem;
  nlohmann::json parabolic;
  nlohmann::json boxcount;
  nlohmann::json render;
  nlohmann::json timings;  // the only nondeterministic field

  nlohmann::json to_json() const;
};

nlohmann::json to_json(const DimensionReport& r);
nlohmann::json to_json(const SubsystemReport& r);
nlohmann::json to_json(const VerifyResult& v);
nlohmann::json to_json(const BoxCountResult& b);
nlohmann::json to_json(const ParabolicReport& r);
nlohmann::json to_json(const SubsystemWord& w);
nlohmann::json to_json(const DimInterval& d);

/// Serializes with every float printed to 17 significant digits; indent < 0
/// gives the compact form.
std::string dump_json(const nlohmann::json& j, int indent = 2);

}  // namespace carpet

#endif  // CARPET_REPORT_HPP
