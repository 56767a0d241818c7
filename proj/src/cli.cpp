#include "carpet/cli.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <regex>

#include "CLI11.hpp"
#include "carpet/config.hpp"
#include "carpet/digest.hpp"
#include "carpet/render.hpp"
#include "carpet/report.hpp"

namespace carpet {
namespace {

using nlohmann::json;

struct Args {
  std::string config;
  std::optional<std::uint64_t> seed;
  bool omit_timings = false;
  std::string out;
  int n_max = 0;
  double target = 0.0;
  double eps = 0.02;
  long long k_cap = 1000000;
  int depth = 0;
  int cf_samples = 64;
  int scale = 0;
  int size = 512;
  std::string words;
  std::string range;
};

class UsageError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_range(const std::string& s) {
  static const std::regex re(R"((\d+)\.\.(\d+))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw UsageError("--range expects a..b, got '" + s + "'");
  const int a = std::stoi(m[1]), b = std::stoi(m[2]);
  if (a > b) throw UsageError("--range needs a <= b");
  return {a, b};
}

std::vector<Word> parse_words(const std::string& bytes) {
  json j;
  try {
    j = json::parse(bytes);
  } catch (const json::parse_error& e) {
    throw InputError("words file: JSON parse error at byte " + std::to_string(e.byte));
  }
  if (!j.is_array()) throw InputError("words file: expected an array of cell-index arrays");
  std::vector<Word> out;
  for (const json& w : j) {
    if (!w.is_array()) throw InputError("words file: expected an array of cell-index arrays");
    Word word;
    for (const json& l : w) {
      if (!l.is_number_integer()) throw InputError("words file: cell indices must be integers");
      word.push_back(l.get<int>());
    }
    out.push_back(std::move(word));
  }
  return out;
}

json coordinate_summary(const CoordinateIFS& ifs) {
  return {{"maps", ifs.size()}, {"rmin", ifs.rmin()}, {"rmax", ifs.rmax()}, {"c", ifs.distortion_c()}};
}

void emit(const ReportDoc& doc, const Args& a, bool out_is_report, std::ostream& out) {
  const std::string text = dump_json(doc.to_json()) + "\n";
  if (out_is_report && !a.out.empty()) {
    std::ofstream f(a.out, std::ios::binary);
    if (!f) throw InputError("cannot write " + a.out);
    f << text;
  } else {
    out << text;
  }
}

int run(const std::string& cmd, const Args& a, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  ReportDoc doc;
  doc.command = cmd;
  const std::string bytes = read_file(a.config);

  if (cmd == "parabolic") {
    const ParabolicConfig cfg = parse_parabolic_config(bytes);
    doc.config_digest = hex_digest(serialize_config(cfg));
    doc.seed = a.seed.value_or(cfg.seed.value_or(MaximizeOptions{}.seed));
    const ParabolicReport rep = validate_parabolic(cfg.maps);
    if (!rep.system) throw ValidationError("not a parabolic system: " + rep.reason);
    const auto words = extract_uniform_subsystem(*rep.system, a.depth);
    json p = to_json(rep);
    p["depth"] = a.depth;
    p["words"] = json::array();
    for (const SubsystemWord& w : words) p["words"].push_back(to_json(w));
    if (words.size() >= 2) {
      const double c = word_distortion_constant(cfg.maps, words);
      p["c"] = c;
      p["interval"] = to_json(conformal_dim_interval(words, c));
    } else {
      p["c"] = nullptr;
      p["interval"] = to_json(DimInterval{});
    }
    p["cf_bound"] = {{"samples", a.cf_samples},
                     {"length", 32},
                     {"cf_depth", 12},
                     {"max_quotient", sampled_cf_bound(cfg.maps, words, a.cf_samples, 32, 12, doc.seed)},
                     {"heuristic", true}};
    doc.parabolic = p;
  } else {
    const CarpetConfig cfg = parse_config(bytes);
    const CarpetSystem carpet = cfg.system();
    doc.config_digest = hex_digest(serialize_config(cfg));
    doc.seed = a.seed.value_or(cfg.seed.value_or(MaximizeOptions{}.seed));
    MaximizeOptions opts;
    opts.seed = doc.seed;

    if (cmd == "validate") {
      doc.validation = {{"ok", true},
                        {"x", coordinate_summary(carpet.x_ifs())},
                        {"y", coordinate_summary(carpet.y_ifs())},
                        {"cells", carpet.size()},
                        {"c", carpet.distortion_c()}};
    } else if (cmd == "dim") {
      const int n_max = a.n_max > 0 ? a.n_max : std::min(3, default_n_max(carpet));
      doc.dimension = to_json(dim_report(carpet, n_max, opts));
    } else if (cmd == "lowerdim") {
      LowerDimOptions lo;
      lo.optimizer = opts;
      lo.k_cap = a.k_cap;
      if (a.n_max > 0) lo.n_max = a.n_max;
      const SubsystemReport rep = lower_dim_certificate(carpet, a.target, a.eps, lo);
      const VerifyResult v = verify(rep, carpet);
      if (!v.ok) throw InternalError("certificate failed re-verification");
      doc.subsystem = to_json(rep);
      doc.subsystem["verification"] = to_json(v);
    } else if (cmd == "render") {
      RasterSpec spec;
      spec.width = spec.height = a.size;
      spec.n = a.scale;
      const Image img = a.words.empty() ? render_carpet(carpet, spec)
                                        : render_subsystem(carpet, parse_words(read_file(a.words)), spec);
      std::ofstream f(a.out, std::ios::binary);
      if (!f) throw InputError("cannot write " + a.out);
      write_ppm(img, f);
      doc.render = {{"path", a.out},          {"width", img.width},
                    {"height", img.height},   {"scale", a.scale},
                    {"subsystem", !a.words.empty()}, {"coverage", img.coverage()}};
    } else if (cmd == "boxcount") {
      const auto [lo, hi] = parse_range(a.range);
      doc.boxcount = to_json(box_count_estimate(carpet, lo, hi));
    }
  }

  if (!a.omit_timings) {
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
    doc.timings = {{"total_seconds", dt.count()}};
  }
  emit(doc, a, cmd != "render", out);
  return kExitOk;
}

}  // namespace

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Resource:
      return kExitResource;
    case ErrorKind::Internal:
      return kExitInternal;
    default:
      return kExitFailure;
  }
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dimension estimates and certificates for non-linear carpets", "carpetdim"};
  app.require_subcommand(1);
  Args a;
  app.add_option("--seed", a.seed, "optimizer seed (overrides the config)");
  app.add_flag("--omit-timings", a.omit_timings, "leave the timings field null");

  auto with_config = [&](CLI::App* sub) {
    sub->add_option("config", a.config, "carpet config JSON")->required();
    sub->fallthrough();
    return sub;
  };
  CLI::App* validate = with_config(app.add_subcommand("validate", "run the contraction and OSC checks"));
  validate->add_option("--out", a.out, "report path");
  CLI::App* dim = with_config(app.add_subcommand("dim", "dimension enclosure over levels 1..n"));
  dim->add_option("--n-max", a.n_max, "deepest level")->check(CLI::Range(1, 12));
  dim->add_option("--out", a.out, "report path");
  CLI::App* lowerdim = with_config(app.add_subcommand("lowerdim", "dominated subsystem certificate"));
  lowerdim->add_option("--target", a.target, "dimension to beat")->required();
  lowerdim->add_option("--eps", a.eps, "inflation exponent");
  lowerdim->add_option("--n-max", a.n_max, "deepest level searched")->check(CLI::Range(1, 12));
  lowerdim->add_option("--k-cap", a.k_cap, "largest word length")->check(CLI::PositiveNumber);
  lowerdim->add_option("--out", a.out, "report path");
  CLI::App* parabolic = app.add_subcommand("parabolic", "parabolic Cantor set mode");
  parabolic->add_option("config", a.config, "parabolic config JSON")->required();
  parabolic->fallthrough();
  parabolic->add_option("--depth", a.depth, "iterate depth N")->required()->check(CLI::Range(1, 64));
  parabolic->add_option("--cf-samples", a.cf_samples, "sampled points for the quotient bound")
      ->check(CLI::Range(1, 100000));
  parabolic->add_option("--out", a.out, "report path");
  CLI::App* render = with_config(app.add_subcommand("render", "rasterize approximate squares to PPM"));
  render->add_option("--scale", a.scale, "scale exponent n")->required()->check(CLI::Range(0, 40));
  render->add_option("--out", a.out, "PPM path")->required();
  render->add_option("--size", a.size, "width and height in pixels")->check(CLI::Range(16, 8192));
  render->add_option("--words", a.words, "JSON file of subsystem words (cell-index arrays)");
  CLI::App* boxcount = with_config(app.add_subcommand("boxcount", "approximate-square counting slope"));
  boxcount->add_option("--range", a.range, "scales a..b")->required();
  boxcount->add_option("--out", a.out, "report path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  try {
    if (cmd == "boxcount") (void)parse_range(a.range);
    return run(cmd, a, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace carpet
