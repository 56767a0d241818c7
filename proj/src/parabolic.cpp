#include "carpet/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "carpet/error.hpp"
#include "carpet/symbolic.hpp"

namespace carpet {
namespace {

constexpr double kUnitTol = 1e-12;

std::vector<double> fixed_points(const IntervalMap& f) {
  // (a x + b) / (c x + d) = x  <=>  c x^2 + (d - a) x - b = 0
  const Eigen::Matrix2d& m = f.matrix();
  const double a = m(0, 0), b = m(0, 1), c = m(1, 0), d = m(1, 1);
  std::vector<double> roots;
  if (std::abs(c) < 1e-300) {
    if (std::abs(d - a) > 1e-300) roots.push_back(b / (d - a));
  } else {
    const double B = d - a, disc = B * B + 4.0 * c * b;
    if (disc >= 0.0) {
      // stable quadratic roots
      const double s = std::sqrt(disc);
      const double qq = -0.5 * (B + std::copysign(s, B));
      if (qq != 0.0) {
        roots.push_back(qq / c);
        roots.push_back(-b / qq);
      } else {
        roots.push_back(0.0);
      }
    }
  }
  std::vector<double> out;
  for (double r : roots) {
    if (r >= -kUnitTol && r <= 1.0 + kUnitTol) out.push_back(std::clamp(r, 0.0, 1.0));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double x, double y) { return std::abs(x - y) <= kUnitTol; }),
            out.end());
  return out;
}

MapClassification classify(const IntervalMap& f, std::size_t index) {
  MapClassification cls;
  cls.sup_deriv = f.sup_abs_deriv();
  const std::string name = "map " + std::to_string(index);
  if (cls.sup_deriv > 1.0 + kUnitTol) {
    throw ValidationError(name + " expands: sup|f'| = " + std::to_string(cls.sup_deriv) + " > 1");
  }
  if (cls.sup_deriv < 1.0 - kUnitTol) return cls;
  if (f.has_constant_deriv()) throw ValidationError(name + " has |f'| = 1 on all of [0,1]");
  for (double p : fixed_points(f)) {
    if (std::abs(std::abs(f.deriv(p, 1)) - 1.0) <= kUnitTol) cls.parabolic_points.push_back(p);
  }
  for (double x : {0.0, 1.0}) {
    if (std::abs(std::abs(f.deriv(x, 1)) - 1.0) > kUnitTol) continue;
    const bool fixed = std::any_of(cls.parabolic_points.begin(), cls.parabolic_points.end(),
                                   [&](double p) { return std::abs(p - x) <= 1e-9; });
    if (!fixed) throw ValidationError(name + " has |f'| = 1 at the non-fixed point " + std::to_string(x));
  }
  cls.kind = MapClass::Parabolic;
  return cls;
}

}  // namespace

ParabolicReport validate_parabolic(const std::vector<IntervalMap>& maps) {
  if (maps.size() < 2) throw InputError("a parabolic system needs at least two maps");
  ParabolicReport rep;
  for (std::size_t i = 0; i < maps.size(); ++i) rep.classes.push_back(classify(maps[i], i));
  rep.osc = check_osc(maps);
  const bool any_parabolic = std::any_of(rep.classes.begin(), rep.classes.end(),
                                         [](const MapClassification& c) { return c.kind == MapClass::Parabolic; });
  if (!any_parabolic) {
    rep.reason = "no parabolic point: every map is a uniform contraction";
  } else if (!rep.osc.pass) {
    rep.reason = "open set condition fails: " + rep.osc.message;
  } else {
    rep.system = ParabolicSystem{maps, rep.classes};
  }
  return rep;
}

std::vector<SubsystemWord> extract_uniform_subsystem(const ParabolicSystem& sys, int N) {
  if (N < 1) throw InputError("iterate depth must be positive");
  const std::size_t m = sys.maps.size();
  const std::size_t limit = dim_cap();
  std::size_t total = 1;
  for (int i = 0; i < N; ++i) {
    if (total > limit / m) throw ResourceError("too many words at depth " + std::to_string(N));
    total *= m;
  }
  std::vector<SubsystemWord> out;
  Word w(static_cast<std::size_t>(N), 0);
  for (std::size_t count = 0; count < total; ++count) {
    const bool pure = std::all_of(w.begin(), w.end(), [&](int l) { return l == w.front(); });
    if (!(pure && sys.is_parabolic(w.front()))) {
      out.push_back({w, sup_deriv_word(sys.maps, w), inf_deriv_word(sys.maps, w)});
    }
    for (int k = N - 1; k >= 0; --k) {
      if (++w[static_cast<std::size_t>(k)] < static_cast<int>(m)) break;
      w[static_cast<std::size_t>(k)] = 0;
    }
  }
  for (const SubsystemWord& sw : out) {
    if (sw.sup.hi >= 1.0 - kUnitTol) throw PrecisionError("kept word is not uniformly contracting");
  }
  return out;
}

double word_distortion_constant(const std::vector<IntervalMap>& maps, const std::vector<SubsystemWord>& words) {
  double lip = 0.0, rmax = 0.0;
  for (const SubsystemWord& w : words) {
    lip = std::max(lip, log_deriv_lipschitz(maps, w.word));
    rmax = std::max(rmax, w.sup.hi);
  }
  if (!(rmax < 1.0)) throw ValidationError("word subsystem is not uniformly contracting");
  return std::exp(-lip / (1.0 - rmax));
}

double moran_root(const std::vector<double>& ratios, double tol) {
  for (double r : ratios) {
    if (!(r > 0.0 && r < 1.0)) throw InputError("Moran ratios must lie in (0,1)");
  }
  auto F = [&](double s) {
    double sum = 0.0;
    for (double r : ratios) sum += std::pow(r, s);
    return sum - 1.0;
  };
  if (F(0.0) <= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (F(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (F(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

DimInterval conformal_dim_interval(const std::vector<SubsystemWord>& words, double c) {
  if (words.empty()) throw InputError("no words");
  if (!(c > 0.0 && c <= 1.0)) throw InputError("distortion constant must lie in (0,1]");
  if (words.size() == 1) return {0.0, 0.0};
  std::vector<double> hi, lo;
  for (const SubsystemWord& w : words) {
    if (!(w.sup.hi < 1.0)) throw InputError("word norms must be below 1");
    hi.push_back(w.sup.hi);
    lo.push_back(std::max(c * w.sup.lo, w.inf.lo));
  }
  return {moran_root(lo), moran_root(hi)};
}

double cf_value(const std::vector<long long>& quotients) {
  double x = 0.0;
  for (auto it = quotients.rbegin(); it != quotients.rend(); ++it) x = 1.0 / (static_cast<double>(*it) + x);
  return x;
}

long long sampled_cf_bound(const std::vector<IntervalMap>& maps, const std::vector<SubsystemWord>& words,
                           int samples, int length, int cf_depth, std::uint64_t seed) {
  if (words.empty()) throw InputError("no words");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  long long bound = 0;
  for (int s = 0; s < samples; ++s) {
    double x = 0.5;
    for (int l = 0; l < length; ++l) x = eval_word(maps, words[pick(rng)].word, x);
    // keep quotients whose convergent denominator stays below the noise floor
    long long q_prev = 1, q = 0;
    for (long long a : cf_quotients(x, cf_depth).quotients) {
      const long long q_next = a * q + q_prev;
      if (a > kCfDenominatorLimit || q_next > kCfDenominatorLimit) break;
      q_prev = q;
      q = q_next;
      bound = std::max(bound, a);
    }
  }
  return bound;
}

}  // namespace carpet
