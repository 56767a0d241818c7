#include "carpet/dimension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carpet/digest.hpp"
#include "carpet/error.hpp"

namespace carpet {

TnResult t_n(const CarpetSystem& carpet, int n, const MaximizeOptions& opts, std::optional<std::size_t> cap) {
  const WeightedAlphabet alph = lift_alphabet(carpet, n, cap);
  const MaximizeResult m = maximize_g(alph, opts);
  TnResult r;
  r.n = n;
  r.value = m.value;
  r.p = m.p;
  r.branch = m.branch;
  r.certificate = m.certificate;
  r.letters = alph.size();
  return r;
}

int default_n_max(const CarpetSystem& carpet, std::optional<std::size_t> cap) {
  const std::size_t limit = cap.value_or(dim_cap());
  const std::size_t base = carpet.size();
  int n = 1;
  std::size_t pow = base;
  while (n < 12 && base > 1 && pow <= limit / base) {
    pow *= base;
    ++n;
  }
  return base == 1 ? 1 : n;
}

DimensionReport dim_report(const CarpetSystem& carpet, int n_max, const MaximizeOptions& opts,
                           std::optional<std::size_t> cap) {
  if (n_max < 1) throw InputError("n_max must be positive");
  carpet.validate();
  DimensionReport rep;
  rep.c = carpet.distortion_c();
  rep.C = holder_constants(carpet, 1).C;
  for (int n = 1; n <= n_max; ++n) {
    const TnResult t = t_n(carpet, n, opts, cap);
    LevelRecord rec;
    rec.n = n;
    rec.t_hat = t.value;
    rec.certified_lower = t.value / (1.0 + rep.C / n);
    rec.branch = t.branch;
    rec.witness_digest = vector_digest(t.p);
    rec.certificate = t.certificate;
    rec.letters = t.letters;
    if (t.certificate.warning) {
      rec.certificate.warning = true;
      rep.flags.push_back("level " + std::to_string(n) + ": restart spread " + format_double(t.certificate.spread) +
                          " above tolerance");
    }
    rep.levels.push_back(std::move(rec));
  }
  rep.certified_lower = 0.0;
  rep.heuristic_upper = rep.levels.front().t_hat;
  for (const LevelRecord& l : rep.levels) {
    rep.certified_lower = std::max(rep.certified_lower, l.certified_lower);
    rep.heuristic_upper = std::min(rep.heuristic_upper, l.t_hat);
  }
  // optimizer noise across levels can invert the pair by a few ulps
  if (rep.heuristic_upper < rep.certified_lower) {
    if (rep.certified_lower - rep.heuristic_upper > 1e-9) {
      rep.flags.push_back("heuristic upper " + format_double(rep.heuristic_upper) +
                          " fell below the certified lower bound and was raised to it");
    }
    rep.heuristic_upper = rep.certified_lower;
  }
  return rep;
}

BoxCountResult box_count_estimate(const CarpetSystem& carpet, int n_lo, int n_hi, std::optional<std::size_t> cap) {
  if (n_lo < 0 || n_hi < n_lo + 1) throw InputError("box count range needs at least two scales");
  BoxCountResult r;
  r.n_lo = n_lo;
  r.n_hi = n_hi;
  for (int n = n_lo; n <= n_hi; ++n) r.counts.push_back(enumerate_delta_n(carpet, n, cap).size());
  const auto m = static_cast<Eigen::Index>(r.counts.size());
  Eigen::MatrixXd X(m, 2);
  Eigen::VectorXd y(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = n_lo + static_cast<double>(i);
    y(i) = std::log2(static_cast<double>(r.counts[static_cast<std::size_t>(i)]));
  }
  r.slope = X.colPivHouseholderQr().solve(y)(1);
  return r;
}

}  // namespace carpet
