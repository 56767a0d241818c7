#ifndef CARPET_PARABOLIC_HPP
#define CARPET_PARABOLIC_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "carpet/conformal_ifs.hpp"

namespace carpet {

enum class MapClass { Contracting, Parabolic };

struct MapClassification {
  MapClass kind = MapClass::Contracting;
  double sup_deriv = 0.0;
  std::vector<double> parabolic_points;  // fixed points with |f'| = 1
};

/// Interval IFS with sup|f'| <= 1 and at least one parabolic point.
struct ParabolicSystem {
  std::vector<IntervalMap> maps;
  std::vector<MapClassification> classes;

  bool is_parabolic(int letter) const { return classes[static_cast<std::size_t>(letter)].kind == MapClass::Parabolic; }
};

struct ParabolicReport {
  std::vector<MapClassification> classes;
  OscResult osc;
  std::optional<ParabolicSystem> system;  // set when every condition holds
  std::string reason;                     // why system is empty
};

/// Classifies each map and checks the open set condition on (0,1).
///
/// Throws InputError for fewer than two maps and ValidationError when some
/// map has sup|f'| > 1 or reaches |f'| = 1 away from a fixed point. A system
/// without parabolic points, or failing the OSC, yields an empty system with
/// the reason recorded.
ParabolicReport validate_parabolic(const std::vector<IntervalMap>& maps);

struct SubsystemWord {
  Word word;
  NormEnclosure sup;  // encloses sup |f_w'|
  NormEnclosure inf;  // encloses inf |f_w'|
};

/// All length-N words except the pure powers of a parabolic letter, in
/// lexicographic order. Throws PrecisionError if the kept words are not
/// uniformly contracting.
std::vector<SubsystemWord> extract_uniform_subsystem(const ParabolicSystem& sys, int N);

/// exp(-L / (1 - rmax)) over a word subsystem, with L the largest Lipschitz
/// bound of log|f_w'| and rmax the largest sup-norm.
double word_distortion_constant(const std::vector<IntervalMap>& maps, const std::vector<SubsystemWord>& words);

struct DimInterval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Root of sum_i r_i^s = 1 for r_i in (0,1), by bisection to tol.
double moran_root(const std::vector<double>& ratios, double tol = 1e-12);

/// [s_lo, s_hi]: s_hi solves sum hi(w)^s = 1, s_lo solves
/// sum max(c lo(w), inf lo(w))^s = 1. A single word gives [0, 0].
DimInterval conformal_dim_interval(const std::vector<SubsystemWord>& words, double c);

template <typename Real>
struct CfExpansion {
  std::vector<long long> quotients;
  bool terminated = false;  // remainder fell below 1e-14
  long long max_quotient = 0;
};

/// Continued fraction partial quotients of x in (0,1) to the given depth.
template <typename Real>
CfExpansion<Real> cf_quotients(Real x, int depth) {
  using std::floor;
  CfExpansion<Real> out;
  if (!(x > Real(0) && x < Real(1)) || depth < 1) return out;
  const Real eps(1e-14);
  for (int i = 0; i < depth; ++i) {
    if (x < eps) {
      out.terminated = true;
      break;
    }
    const Real y = Real(1) / x;
    Real a = floor(y);
    x = y - a;
    if (Real(1) - x < eps) {
      a += Real(1);
      x = Real(0);
    }
    const auto q = static_cast<long long>(a);
    out.quotients.push_back(q);
    out.max_quotient = std::max(out.max_quotient, q);
  }
  if (!out.terminated && x < eps) out.terminated = true;
  return out;
}

/// [0; a_1, a_2, ...] evaluated from the innermost quotient outward.
double cf_value(const std::vector<long long>& quotients);

inline constexpr long long kCfDenominatorLimit = 1000000;

/// Largest partial quotient over points f_W(1/2), W a random product of
/// `length` subsystem words, expanded to cf_depth. Quotients are read only
/// while the convergent denominator stays at most kCfDenominatorLimit, where
/// double rounding cannot reach them.
long long sampled_cf_bound(const std::vector<IntervalMap>& maps, const std::vector<SubsystemWord>& words,
                           int samples, int length, int cf_depth, std::uint64_t seed);

}  // namespace carpet

#endif  // CARPET_PARABOLIC_HPP
