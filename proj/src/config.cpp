#include "carpet/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "carpet/error.hpp"
#include "carpet/report.hpp"

namespace carpet {
namespace {

using nlohmann::json;

json parse_bytes(std::string_view bytes) {
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::parse_error& e) {
    throw InputError("JSON parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

void require_object(const json& j, const std::string& where, const std::set<std::string>& allowed,
                    const std::set<std::string>& required) {
  if (!j.is_object()) throw InputError(where + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) throw InputError(where + ": unknown key '" + key + "'");
  }
  for (const std::string& key : required) {
    if (!j.contains(key)) throw InputError(where + ": missing key '" + key + "'");
  }
}

double number_at(const json& j, const std::string& key, const std::string& where) {
  const json& v = j.at(key);
  if (!v.is_number()) throw InputError(where + "." + key + ": expected a number");
  return v.get<double>();
}

long long integer_of(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw InputError(where + ": expected an integer");
  return v.get<long long>();
}

std::vector<IntervalMap> maps_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a nonempty array of maps");
  std::vector<IntervalMap> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(map_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::optional<std::uint64_t> seed_from_json(const json& j) {
  if (!j.contains("seed")) return std::nullopt;
  const json& s = j.at("seed");
  if (!s.is_number_integer() || (s.is_number_integer() && !s.is_number_unsigned() && s.get<long long>() < 0)) {
    throw InputError("seed: expected a nonnegative integer");
  }
  return s.get<std::uint64_t>();
}

json maps_to_json(const std::vector<IntervalMap>& maps) {
  json arr = json::array();
  for (const IntervalMap& m : maps) arr.push_back(map_to_json(m));
  return arr;
}

}  // namespace

json map_to_json(const IntervalMap& m) {
  if (m.is_affine()) return {{"kind", "affine"}, {"slope", m.slope()}, {"offset", m.offset()}};
  const Eigen::Matrix2d& c = m.matrix();
  return {{"kind", "moebius"}, {"a", c(0, 0)}, {"b", c(0, 1)}, {"c", c(1, 0)}, {"d", c(1, 1)}};
}

IntervalMap map_from_json(const json& j, const std::string& where) {
  if (!j.is_object() || !j.contains("kind")) throw InputError(where + ": expected a map object with a 'kind'");
  const json& kind = j.at("kind");
  try {
    if (kind == "affine") {
      require_object(j, where, {"kind", "slope", "offset"}, {"slope", "offset"});
      return IntervalMap::affine(number_at(j, "slope", where), number_at(j, "offset", where));
    }
    if (kind == "moebius") {
      require_object(j, where, {"kind", "a", "b", "c", "d"}, {"a", "b", "c", "d"});
      return IntervalMap::moebius(number_at(j, "a", where), number_at(j, "b", where), number_at(j, "c", where),
                                  number_at(j, "d", where));
    }
  } catch (const InputError& e) {
    const std::string msg = e.what();
    if (msg.rfind(where, 0) == 0) throw;
    throw InputError(where + ": " + msg);
  }
  throw InputError(where + ".kind: expected \"affine\" or \"moebius\"");
}

CarpetSystem CarpetConfig::system() const {
  CarpetSystem sys(CoordinateIFS(x_maps), CoordinateIFS(y_maps), cells, distortion_override);
  sys.validate();
  return sys;
}

CarpetConfig parse_config(std::string_view bytes) {
  const json j = parse_bytes(bytes);
  require_object(j, "config", {"x_maps", "y_maps", "cells", "distortion_override", "seed"},
                 {"x_maps", "y_maps", "cells"});
  CarpetConfig cfg;
  cfg.x_maps = maps_from_json(j.at("x_maps"), "x_maps");
  cfg.y_maps = maps_from_json(j.at("y_maps"), "y_maps");
  const json& cells = j.at("cells");
  if (!cells.is_array() || cells.empty()) throw InputError("cells: expected a nonempty array of [i, j] pairs");
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const std::string where = "cells[" + std::to_string(k) + "]";
    const json& c = cells[k];
    if (!c.is_array() || c.size() != 2) throw InputError(where + ": expected a pair [i, j]");
    const long long i = integer_of(c[0], where + "[0]");
    const long long jj = integer_of(c[1], where + "[1]");
    if (i < 0 || i >= static_cast<long long>(cfg.x_maps.size())) {
      throw InputError(where + ": x index " + std::to_string(i) + " out of range for " +
                       std::to_string(cfg.x_maps.size()) + " x maps");
    }
    if (jj < 0 || jj >= static_cast<long long>(cfg.y_maps.size())) {
      throw InputError(where + ": y index " + std::to_string(jj) + " out of range for " +
                       std::to_string(cfg.y_maps.size()) + " y maps");
    }
    cfg.cells.emplace_back(static_cast<int>(i), static_cast<int>(jj));
  }
  if (j.contains("distortion_override")) {
    cfg.distortion_override = number_at(j, "distortion_override", "config");
  }
  cfg.seed = seed_from_json(j);
  (void)cfg.system();
  return cfg;
}

ParabolicConfig parse_parabolic_config(std::string_view bytes) {
  const json j = parse_bytes(bytes);
  require_object(j, "config", {"maps", "seed"}, {"maps"});
  ParabolicConfig cfg;
  cfg.maps = maps_from_json(j.at("maps"), "maps");
  cfg.seed = seed_from_json(j);
  return cfg;
}

json config_to_json(const CarpetConfig& cfg) {
  json j;
  j["x_maps"] = maps_to_json(cfg.x_maps);
  j["y_maps"] = maps_to_json(cfg.y_maps);
  j["cells"] = json::array();
  for (const auto& [i, jj] : cfg.cells) j["cells"].push_back({i, jj});
  if (cfg.distortion_override) j["distortion_override"] = *cfg.distortion_override;
  if (cfg.seed) j["seed"] = *cfg.seed;
  return j;
}

json config_to_json(const ParabolicConfig& cfg) {
  json j;
  j["maps"] = maps_to_json(cfg.maps);
  if (cfg.seed) j["seed"] = *cfg.seed;
  return j;
}

std::string serialize_config(const CarpetConfig& cfg) { return dump_json(config_to_json(cfg), -1); }
std::string serialize_config(const ParabolicConfig& cfg) { return dump_json(config_to_json(cfg), -1); }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace carpet
