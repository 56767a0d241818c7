#include "carpet/conformal_ifs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "carpet/error.hpp"

namespace carpet {
namespace {

constexpr int kInitialCells = 64;
constexpr int kMaxRefineRounds = 200;

void check_word(std::span<const IntervalMap> maps, std::span<const int> word) {
  if (word.empty()) throw InputError("empty word");
  for (int letter : word) {
    if (letter < 0 || static_cast<std::size_t>(letter) >= maps.size()) {
      throw InputError("letter " + std::to_string(letter) + " out of range");
    }
  }
}

// log|f_w'(x)| by the chain rule, innermost letter first.
double log_abs_deriv(std::span<const IntervalMap> maps, std::span<const int> word, double x) {
  double y = x;
  double acc = 0.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const IntervalMap& f = maps[static_cast<std::size_t>(*it)];
    acc += std::log(std::abs(f.deriv(y, 1)));
    y = f(y);
  }
  return acc;
}

bool constant_derivative(std::span<const IntervalMap> maps, std::span<const int> word) {
  return std::all_of(word.begin(), word.end(), [&](int l) {
    return maps[static_cast<std::size_t>(l)].has_constant_deriv();
  });
}

double slope_product(std::span<const IntervalMap> maps, std::span<const int> word) {
  double prod = 1.0;
  for (int l : word) prod *= std::abs(maps[static_cast<std::size_t>(l)].deriv(0.0, 1));
  return prod;
}

struct Cell {
  double a, b, ua, ub;
};

// Certified extremum of u = log|f_w'| on [0,1]. With sign = +1 returns the
// best sampled maximum and the certified upper bound; with sign = -1 the
// same for the minimum (values negated internally).
std::pair<double, double> grid_extremum(std::span<const IntervalMap> maps, std::span<const int> word,
                                        double tol, double sign) {
  const double lip = log_deriv_lipschitz(maps, word);
  const double slack = std::log1p(tol);
  auto u = [&](double x) { return sign * log_abs_deriv(maps, word, x); };

  std::vector<Cell> cells;
  cells.reserve(kInitialCells);
  double prev = u(0.0);
  double best = prev;
  for (int i = 0; i < kInitialCells; ++i) {
    const double a = static_cast<double>(i) / kInitialCells;
    const double b = static_cast<double>(i + 1) / kInitialCells;
    const double ub = u(b);
    best = std::max(best, ub);
    cells.push_back({a, b, prev, ub});
    prev = ub;
  }
  auto bound = [&](const Cell& c) { return 0.5 * (c.ua + c.ub + lip * (c.b - c.a)); };

  for (int round = 0; round < kMaxRefineRounds; ++round) {
    std::vector<Cell> next;
    bool refined = false;
    for (const Cell& c : cells) {
      if (bound(c) <= best + slack) continue;
      const double m = 0.5 * (c.a + c.b);
      if (m <= c.a || m >= c.b) {
        next.push_back(c);
        continue;
      }
      const double um = u(m);
      best = std::max(best, um);
      next.push_back({c.a, m, c.ua, um});
      next.push_back({m, c.b, um, c.ub});
      refined = true;
    }
    cells = std::move(next);
    if (!refined) break;
  }
  double upper = best + slack;
  for (const Cell& c : cells) upper = std::max(upper, bound(c));
  return {best, upper};
}

}  // namespace

double log_deriv_lipschitz(std::span<const IntervalMap> maps, std::span<const int> word) {
  // d/dx log|f_w'| = sum_j (f''/f')(y_j) * y_j'(x), |y_j'| <= prod_{i>j} sup|f_i'|
  double lip = 0.0;
  double inner = 1.0;
  for (auto it = word.rbegin(); it != word.rend(); ++it) {
    const IntervalMap& f = maps[static_cast<std::size_t>(*it)];
    lip += f.sup_log_deriv_slope() * inner;
    inner *= f.sup_abs_deriv();
  }
  return lip;
}

NormEnclosure sup_deriv_word(std::span<const IntervalMap> maps, std::span<const int> word, double tol) {
  check_word(maps, word);
  if (constant_derivative(maps, word)) {
    const double p = slope_product(maps, word);
    return {p, p};
  }
  const auto [best, upper] = grid_extremum(maps, word, tol, 1.0);
  const double lo = std::exp(best);
  if (upper <= best + std::log1p(tol)) return {lo, lo * (1.0 + tol)};
  return {lo, std::exp(upper)};
}

NormEnclosure inf_deriv_word(std::span<const IntervalMap> maps, std::span<const int> word, double tol) {
  check_word(maps, word);
  if (constant_derivative(maps, word)) {
    const double p = slope_product(maps, word);
    return {p, p};
  }
  const auto [best, upper] = grid_extremum(maps, word, tol, -1.0);
  const double hi = std::exp(-best);
  if (upper <= best + std::log1p(tol)) return {hi / (1.0 + tol), hi};
  return {std::exp(-upper), hi};
}

double eval_word(std::span<const IntervalMap> maps, std::span<const int> word, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError("point outside [0,1]");
  double y = x;
  for (auto it = word.rbegin(); it != word.rend(); ++it) y = maps[static_cast<std::size_t>(*it)](y);
  return y;
}

Interval word_image(std::span<const IntervalMap> maps, std::span<const int> word) {
  const double y0 = eval_word(maps, word, 0.0);
  const double y1 = eval_word(maps, word, 1.0);
  return {std::min(y0, y1), std::max(y0, y1)};
}

ContractionResult check_contraction(std::span<const IntervalMap> maps) {
  ContractionResult r;
  if (maps.empty()) return r;
  r.rmin = 1.0;
  r.rmax = 0.0;
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const int letter = static_cast<int>(i);
    const double sup = sup_deriv_word(maps, std::span<const int>(&letter, 1)).hi;
    r.rmin = std::min(r.rmin, maps[i].inf_abs_deriv());
    r.rmax = std::max(r.rmax, sup);
    if (sup >= 1.0 && r.offending_map < 0) r.offending_map = letter;
  }
  r.ok = r.offending_map < 0 && r.rmin > 0.0;
  return r;
}

OscResult check_osc(std::span<const IntervalMap> maps) {
  OscResult r;
  std::vector<Interval> images;
  images.reserve(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    const Interval im = maps[i].image();
    if (im.lo < 0.0 || im.hi > 1.0) {
      r.pass = false;
      r.first = r.second = static_cast<int>(i);
      r.overlap = im;
      r.message = "image of map " + std::to_string(i) + " leaves [0,1]";
      return r;
    }
    images.push_back(im);
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      const double lo = std::max(images[i].lo, images[j].lo);
      const double hi = std::min(images[i].hi, images[j].hi);
      if (lo < hi) {
        std::ostringstream os;
        os << "maps " << i << " and " << j << " overlap on (" << lo << ", " << hi << ")";
        r.pass = false;
        r.first = static_cast<int>(i);
        r.second = static_cast<int>(j);
        r.overlap = {lo, hi};
        r.message = os.str();
        return r;
      }
    }
  }
  return r;
}

double distortion_constant(std::span<const IntervalMap> maps) {
  const ContractionResult cr = check_contraction(maps);
  if (!cr.ok) {
    throw ValidationError("not uniformly contracting (map " + std::to_string(cr.offending_map) + ")");
  }
  double k = 0.0;
  for (const IntervalMap& f : maps) k = std::max(k, f.sup_abs_second_deriv() / f.inf_abs_deriv());
  return std::exp(-k / (1.0 - cr.rmax));
}

Interval attractor_hull(std::span<const IntervalMap> maps) {
  Interval j{0.0, 1.0};
  for (int it = 0; it < 100000; ++it) {
    Interval next{1.0, 0.0};
    for (const IntervalMap& f : maps) {
      const double a = f(j.lo);
      const double b = f(j.hi);
      next.lo = std::min({next.lo, a, b});
      next.hi = std::max({next.hi, a, b});
    }
    const bool done = std::abs(next.lo - j.lo) <= 1e-16 && std::abs(next.hi - j.hi) <= 1e-16;
    j = next;
    if (done) break;
  }
  return j;
}

CoordinateIFS::CoordinateIFS(std::vector<IntervalMap> maps) : maps_(std::move(maps)) {
  if (maps_.empty()) throw InputError("an IFS needs at least one map");
  const ContractionResult cr = check_contraction(maps_);
  if (!cr.ok) {
    throw ValidationError("contraction failure at map " + std::to_string(cr.offending_map));
  }
  rmin_ = cr.rmin;
  rmax_ = cr.rmax;
  distortion_c_ = distortion_constant(maps_);
}

CarpetSystem::CarpetSystem(CoordinateIFS x_ifs, CoordinateIFS y_ifs, std::vector<CellIndex> cells,
                           std::optional<double> distortion_override)
    : x_(std::move(x_ifs)), y_(std::move(y_ifs)), cells_(std::move(cells)), override_(distortion_override) {
  if (cells_.empty()) throw InputError("cell set is empty");
  std::set<CellIndex> seen;
  for (const auto& [i, j] : cells_) {
    if (i < 0 || static_cast<std::size_t>(i) >= x_.size() || j < 0 || static_cast<std::size_t>(j) >= y_.size()) {
      throw InputError("cell (" + std::to_string(i) + ", " + std::to_string(j) + ") references a missing map");
    }
    if (!seen.insert({i, j}).second) {
      throw InputError("duplicate cell (" + std::to_string(i) + ", " + std::to_string(j) + ")");
    }
  }
  if (override_) {
    if (!(*override_ > 0.0 && *override_ <= 1.0)) throw InputError("distortion override must lie in (0,1]");
    c_ = *override_;
  } else {
    c_ = std::min(x_.distortion_c(), y_.distortion_c());
  }
}

double CarpetSystem::rmin() const { return std::min(x_.rmin(), y_.rmin()); }
double CarpetSystem::rmax() const { return std::max(x_.rmax(), y_.rmax()); }

std::vector<int> CarpetSystem::nonempty_columns() const {
  std::set<int> s;
  for (const auto& c : cells_) s.insert(c.first);
  return {s.begin(), s.end()};
}

std::vector<int> CarpetSystem::nonempty_rows() const {
  std::set<int> s;
  for (const auto& c : cells_) s.insert(c.second);
  return {s.begin(), s.end()};
}

void CarpetSystem::validate() const {
  if (const OscResult r = check_osc(x_.maps()); !r.pass) {
    throw ValidationError("x coordinate OSC violation: " + r.message);
  }
  if (const OscResult r = check_osc(y_.maps()); !r.pass) {
    throw ValidationError("y coordinate OSC violation: " + r.message);
  }
}

}  // namespace carpet
