#include "carpet/report.hpp"

#include <cmath>
#include <sstream>

#include "carpet/digest.hpp"

namespace carpet {
namespace {

using nlohmann::json;

json vec(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

json enclosure(const NormEnclosure& e) { return json::array({e.lo, e.hi}); }

json certificate(const MaximizeCertificate& c) {
  return {{"iterations_used", c.iterations_used}, {"spread", c.spread}, {"warning", c.warning}, {"seed", c.seed}};
}

void dump_float(std::ostream& os, double v) {
  if (!std::isfinite(v)) {
    os << "null";
    return;
  }
  const std::string s = format_double(v);
  os << s;
  if (s.find_first_of(".e") == std::string::npos) os << ".0";
}

void dump(std::ostream& os, const json& j, int indent, int depth) {
  const bool pretty = indent >= 0;
  const std::string pad = pretty ? std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close_pad = pretty ? std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* nl = pretty ? "\n" : "";
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << '{' << nl;
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) os << ',' << nl;
        first = false;
        os << pad << json(key).dump() << (pretty ? ": " : ":");
        dump(os, value, indent, depth + 1);
      }
      os << nl << close_pad << '}';
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        os << "[]";
        return;
      }
      os << '[' << nl;
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) os << ',' << nl;
        os << pad;
        dump(os, j[i], indent, depth + 1);
      }
      os << nl << close_pad << ']';
      return;
    }
    case json::value_t::number_float:
      dump_float(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace

std::string dump_json(const json& j, int indent) {
  std::ostringstream os;
  dump(os, j, indent, 0);
  return os.str();
}

json ReportDoc::to_json() const {
  return {{"command", command},       {"config_digest", config_digest}, {"seed", seed},
          {"version", kVersion},      {"validation", validation},       {"dimension", dimension},
          {"subsystem", subsystem},   {"parabolic", parabolic},         {"boxcount", boxcount},
          {"render", render},         {"timings", timings}};
}

json to_json(const DimensionReport& r) {
  json levels = json::array();
  for (const LevelRecord& l : r.levels) {
    levels.push_back({{"n", l.n},
                      {"t_hat", l.t_hat},
                      {"certified_lower", l.certified_lower},
                      {"branch", branch_name(l.branch)},
                      {"witness_digest", l.witness_digest},
                      {"certificate", certificate(l.certificate)},
                      {"letters", l.letters}});
  }
  return {{"levels", levels},
          {"C", r.C},
          {"c", r.c},
          {"certified_lower", r.certified_lower},
          {"heuristic_upper", r.heuristic_upper},
          {"upper_is_heuristic", r.upper_is_heuristic},
          {"width", r.width()},
          {"flags", r.flags}};
}

json to_json(const SubsystemReport& r) {
  const FrequencyDesign& d = r.design;
  const DominationResult& dom = r.domination;
  json diff = nullptr;
  if (r.diffuseness) {
    diff = {{"d1", r.diffuseness->d1}, {"d2", r.diffuseness->d2}, {"c", r.diffuseness->c},
            {"beta", r.diffuseness->beta}};
  }
  return {{"target", r.target},
          {"design",
           {{"n", d.n}, {"k", d.k}, {"counts", d.counts}, {"p", vec(d.p)}, {"eps", d.eps}, {"transposed", d.transposed}}},
          {"t_n", r.t_n},
          {"separated", r.separated},
          {"gamma", {{"log_gamma", r.gamma.log_gamma}, {"log_gamma_tilde", r.gamma.log_gamma_tilde}}},
          {"log_a_nk", r.log_a_nk},
          {"log_b_nk", r.log_b_nk},
          {"s_nk", r.s_nk},
          {"achieved", r.achieved},
          {"domination",
           {{"flag", dom.flag},
            {"log_a_nk", dom.log_a_nk},
            {"log_b_nk", dom.log_b_nk},
            {"log_c", dom.log_c},
            {"delta", dom.delta},
            {"threshold", dom.threshold},
            {"k_min", dom.k_min}}},
          {"c", r.c},
          {"max_a_eps", r.max_a_eps},
          {"max_b_eps", r.max_b_eps},
          {"inflation_ok", r.inflation_ok},
          {"rmax_eps_n", r.rmax_eps_n},
          {"diffuseness", diff},
          {"diffuseness_refusal", r.diffuseness_refusal}};
}

json to_json(const VerifyResult& v) { return {{"ok", v.ok}, {"failures", v.failures}}; }

json to_json(const BoxCountResult& b) {
  return {{"n_lo", b.n_lo}, {"n_hi", b.n_hi}, {"counts", b.counts}, {"slope", b.slope}};
}

json to_json(const ParabolicReport& r) {
  json classes = json::array();
  for (const MapClassification& c : r.classes) {
    classes.push_back({{"kind", c.kind == MapClass::Parabolic ? "parabolic" : "contracting"},
                       {"sup_deriv", c.sup_deriv},
                       {"parabolic_points", c.parabolic_points}});
  }
  json osc = {{"pass", r.osc.pass}, {"message", r.osc.message}};
  if (!r.osc.pass) osc["maps"] = {r.osc.first, r.osc.second};
  return {{"classes", classes}, {"osc", osc}, {"valid", r.system.has_value()}, {"reason", r.reason}};
}

json to_json(const SubsystemWord& w) { return {{"word", w.word}, {"sup", enclosure(w.sup)}, {"inf", enclosure(w.inf)}}; }

json to_json(const DimInterval& d) { return json::array({d.lo, d.hi}); }

}  // namespace carpet
