#include "carpet/subsystem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <set>
#include <string>

#include "carpet/digest.hpp"
#include "carpet/error.hpp"

namespace carpet {

Counts frequency_counts(const Eigen::VectorXd& p, long long k) {
  const auto m = static_cast<std::size_t>(p.size());
  Counts counts(m, 0);
  std::size_t support = 0;
  for (std::size_t c = 0; c < m; ++c) support += p(static_cast<Eigen::Index>(c)) > 0.0;
  if (support == 0) throw InputError("probability vector has empty support");
  if (k < static_cast<long long>(support)) {
    throw InputError("k = " + std::to_string(k) + " is below the support size " + std::to_string(support));
  }
  // first seats in index order
  long long seated = 0;
  for (std::size_t c = 0; c < m; ++c) {
    if (p(static_cast<Eigen::Index>(c)) > 0.0) {
      counts[c] = 1;
      ++seated;
    }
  }
  struct Entry {
    double priority;
    std::size_t cell;
  };
  auto lower = [](const Entry& x, const Entry& y) {
    return x.priority != y.priority ? x.priority < y.priority : x.cell > y.cell;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(lower)> heap(lower);
  for (std::size_t c = 0; c < m; ++c) {
    if (counts[c] > 0) heap.push({p(static_cast<Eigen::Index>(c)), c});
  }
  for (; seated < k; ++seated) {
    const Entry top = heap.top();
    heap.pop();
    ++counts[top.cell];
    heap.push({p(static_cast<Eigen::Index>(top.cell)) / static_cast<double>(counts[top.cell]), top.cell});
  }
  return counts;
}

namespace {

void check_counts(std::span<const long long> counts, const WeightedAlphabet& alphabet) {
  if (counts.size() != alphabet.size()) throw InputError("counts do not match the alphabet");
  for (long long m : counts) {
    if (m < 0) throw InputError("negative count");
  }
}

long long total(std::span<const long long> counts) {
  long long k = 0;
  for (long long m : counts) k += m;
  return k;
}

double log_factorial(long long m) { return std::lgamma(static_cast<double>(m) + 1.0); }

}  // namespace

GammaCounts gamma_counts(std::span<const long long> counts, const WeightedAlphabet& alphabet) {
  check_counts(counts, alphabet);
  const long long k = total(counts);
  std::vector<long long> col_total(static_cast<std::size_t>(alphabet.num_columns()), 0);
  GammaCounts g;
  g.log_gamma = log_factorial(k);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    g.log_gamma -= log_factorial(counts[c]);
    col_total[static_cast<std::size_t>(alphabet.cells[c].col)] += counts[c];
  }
  g.log_gamma_tilde = log_factorial(k);
  for (long long M : col_total) g.log_gamma_tilde -= log_factorial(M);
  return g;
}

GammaBruteForce gamma_counts_brute_force(std::span<const long long> counts, const WeightedAlphabet& alphabet) {
  check_counts(counts, alphabet);
  const long long k = total(counts);
  const std::size_t m = alphabet.size();
  double size = std::pow(static_cast<double>(m), static_cast<double>(k));
  if (size > 2e7) throw ResourceError("brute-force enumeration too large");
  GammaBruteForce out;
  std::set<std::vector<int>> projections;
  std::vector<int> w(static_cast<std::size_t>(k), 0);
  std::vector<long long> seen(m);
  const auto words = static_cast<std::uint64_t>(size);
  for (std::uint64_t count = 0; count < words; ++count) {
    std::fill(seen.begin(), seen.end(), 0);
    for (int l : w) ++seen[static_cast<std::size_t>(l)];
    if (std::equal(seen.begin(), seen.end(), counts.begin())) {
      ++out.gamma;
      std::vector<int> proj(w.size());
      for (std::size_t i = 0; i < w.size(); ++i) proj[i] = alphabet.cells[static_cast<std::size_t>(w[i])].col;
      projections.insert(std::move(proj));
    }
    for (long long i = k - 1; i >= 0; --i) {
      if (++w[static_cast<std::size_t>(i)] < static_cast<int>(m)) break;
      w[static_cast<std::size_t>(i)] = 0;
    }
  }
  out.gamma_tilde = projections.size();
  return out;
}

double log_a_nk(std::span<const long long> counts, const WeightedAlphabet& alphabet) {
  check_counts(counts, alphabet);
  double s = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c]) s += static_cast<double>(counts[c]) * std::log(alphabet.a(alphabet.cells[c].col));
  }
  return s;
}

double log_b_nk(std::span<const long long> counts, const WeightedAlphabet& alphabet) {
  check_counts(counts, alphabet);
  double s = 0.0;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c]) s += static_cast<double>(counts[c]) * std::log(alphabet.b(alphabet.cells[c].row));
  }
  return s;
}

double s_nk(std::span<const long long> counts, const WeightedAlphabet& alphabet) {
  const GammaCounts g = gamma_counts(counts, alphabet);
  return g.log_gamma_tilde / -log_a_nk(counts, alphabet) +
         (g.log_gamma - g.log_gamma_tilde) / -log_b_nk(counts, alphabet);
}

double domination_threshold(double delta, double c, double sum_log_a) {
  if (!(delta > 0.0)) throw InputError("domination threshold needs a positive Lyapunov gap");
  return (-std::log(c) - sum_log_a) / delta;
}

DominationResult check_domination(std::span<const long long> counts, const Eigen::VectorXd& p,
                                  const WeightedAlphabet& alphabet, double c) {
  check_prob_vector(p, alphabet);
  if (!(c > 0.0 && c <= 1.0)) throw InputError("distortion constant must lie in (0,1]");
  const auto [l1, l2] = lyapunov(p, alphabet);
  if (!(l1 > l2)) throw InputError("check_domination needs lambda1(p) > lambda2(p)");
  DominationResult d;
  d.log_a_nk = log_a_nk(counts, alphabet);
  d.log_b_nk = log_b_nk(counts, alphabet);
  d.log_c = std::log(c);
  d.flag = d.log_b_nk < d.log_c + d.log_a_nk;
  d.delta = l1 - l2;
  d.threshold = domination_threshold(d.delta, c, alphabet.log_a_per_cell().sum());
  d.k_min = static_cast<long long>(std::floor(d.threshold)) + 1;
  return d;
}

DiffusenessCertificate diffuseness_certificate(const FrequencyDesign& design, const WeightedAlphabet& alphabet,
                                               const CarpetSystem& carpet) {
  check_counts(design.counts, alphabet);
  const auto& col_maps = design.transposed ? carpet.y_ifs().maps() : carpet.x_ifs().maps();
  const auto& row_maps = design.transposed ? carpet.x_ifs().maps() : carpet.y_ifs().maps();

  std::vector<std::vector<int>> rows_in_col(static_cast<std::size_t>(alphabet.num_columns()));
  for (std::size_t c = 0; c < alphabet.size(); ++c) {
    if (design.counts[c] > 0) rows_in_col[static_cast<std::size_t>(alphabet.cells[c].col)].push_back(alphabet.cells[c].row);
  }
  Interval hull{1.0, 0.0};
  int support_cols = 0;
  double d2 = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rows_in_col.size(); ++i) {
    if (rows_in_col[i].empty()) continue;
    ++support_cols;
    const Interval im = word_image(col_maps, alphabet.column_words[i]);
    hull.lo = std::min(hull.lo, im.lo);
    hull.hi = std::max(hull.hi, im.hi);
    if (rows_in_col[i].size() < 2) continue;
    Interval fibre{1.0, 0.0};
    for (int j : rows_in_col[i]) {
      const Interval r = word_image(row_maps, alphabet.row_words[static_cast<std::size_t>(j)]);
      fibre.lo = std::min(fibre.lo, r.lo);
      fibre.hi = std::max(fibre.hi, r.hi);
    }
    d2 = std::min(d2, fibre.length());
  }
  if (support_cols < 2) throw ValidationError("diffuseness refused: the subsystem has fewer than two columns");
  if (!std::isfinite(d2)) throw ValidationError("diffuseness refused: no column holds two cells");
  DiffusenessCertificate cert;
  cert.d1 = hull.length();
  cert.d2 = d2;
  cert.c = carpet.distortion_c();
  cert.beta = cert.c * std::min(cert.d1, cert.d2);
  if (!(cert.beta > 0.0)) throw ValidationError("diffuseness refused: beta is not positive");
  return cert;
}

namespace {

// Fills every derived field of a report from its design.
void evaluate_design(SubsystemReport& r, const WeightedAlphabet& alph, const CarpetSystem& carpet) {
  const FrequencyDesign& d = r.design;
  r.c = carpet.distortion_c();
  r.gamma = gamma_counts(d.counts, alph);
  r.log_a_nk = log_a_nk(d.counts, alph);
  r.log_b_nk = log_b_nk(d.counts, alph);
  r.s_nk = s_nk(d.counts, alph);
  r.achieved = r.s_nk / (1.0 + d.eps);
  r.domination = check_domination(d.counts, d.p, alph, r.c);
  r.max_a_eps = std::pow(alph.a.maxCoeff(), d.eps);
  r.max_b_eps = std::pow(alph.b.maxCoeff(), d.eps);
  r.inflation_ok = r.max_a_eps <= r.c && r.max_b_eps <= r.c;
  r.rmax_eps_n = std::pow(carpet.rmax(), d.eps * d.n);
  r.diffuseness.reset();
  r.diffuseness_refusal.clear();
  try {
    r.diffuseness = diffuseness_certificate(d, alph, carpet);
  } catch (const ValidationError& e) {
    r.diffuseness_refusal = e.what();
  }
}

bool design_ok(const SubsystemReport& r) { return r.achieved > r.target && r.domination.flag && r.inflation_ok; }

WeightedAlphabet oriented_alphabet(const CarpetSystem& carpet, const FrequencyDesign& d,
                                   std::optional<std::size_t> cap) {
  WeightedAlphabet alph = lift_alphabet(carpet, d.n, cap);
  return d.transposed ? transpose(alph) : alph;
}

}  // namespace

SubsystemReport lower_dim_certificate(const CarpetSystem& carpet, double t, double eps, const LowerDimOptions& opts) {
  if (!(t > 0.0)) throw InputError("target must be positive");
  if (!(eps > 0.0)) throw InputError("eps must be positive");
  if (opts.n_max < 1 || opts.k_cap < 1) throw InputError("n_max and k_cap must be positive");
  carpet.validate();

  double achievable = 0.0;
  std::vector<std::string> notes;
  for (int n = 1; n <= opts.n_max; ++n) {
    const WeightedAlphabet base = lift_alphabet(carpet, n, opts.alphabet_cap);
    const Eigen::VectorXd gap = base.log_a_per_cell() - base.log_b_per_cell();
    if (gap.cwiseAbs().maxCoeff() <= 1e-12) {
      throw UnsupportedError("a = b on every cell: the carpet is conformal-like and the Lyapunov exponents cannot "
                             "be separated");
    }
    const double c = carpet.distortion_c();
    if (std::pow(base.a.maxCoeff(), eps) > c || std::pow(base.b.maxCoeff(), eps) > c) {
      notes.push_back("level " + std::to_string(n) + ": inflation bound fails");
      continue;
    }
    const MaximizeResult opt = maximize_g(base, opts.optimizer);
    achievable = std::max(achievable, opt.value / (1.0 + eps));
    if (!(t * (1.0 + eps) < opt.value)) {
      notes.push_back("level " + std::to_string(n) + ": t(1+eps) >= t_n = " + format_double(opt.value));
      continue;
    }
    // drop numerically negligible mass so the support is meaningful
    Eigen::VectorXd q = (opt.p.array() < 1e-9).select(0.0, opt.p);
    q /= q.sum();
    if (!(g_eval(q, base).value > t * (1.0 + eps))) q = opt.p;

    SubsystemReport r;
    r.target = t;
    r.t_n = opt.value;
    const SeparationResult sep = separate_lyapunov(q, base, t * (1.0 + eps));
    r.separated = !sep.already_separated;
    r.design.n = n;
    r.design.eps = eps;
    r.design.p = sep.p;
    const auto [l1, l2] = lyapunov(sep.p, base);
    r.design.transposed = l1 < l2;
    const WeightedAlphabet alph = r.design.transposed ? transpose(base) : base;

    long long support = 0;
    for (Eigen::Index i = 0; i < sep.p.size(); ++i) support += sep.p(i) > 0.0;
    const DominationResult probe = check_domination(frequency_counts(sep.p, support), sep.p, alph, c);
    long long k = std::max(support, probe.k_min);
    auto attempt = [&](long long kk) {
      r.design.k = kk;
      r.design.counts = frequency_counts(sep.p, kk);
      evaluate_design(r, alph, carpet);
      return design_ok(r);
    };
    bool found = false;
    long long lo = support - 1;  // last k known to fail, or below the search range
    while (k <= opts.k_cap) {
      if (attempt(k)) {
        found = true;
        break;
      }
      lo = k;
      if (k > opts.k_cap / 2) break;
      k *= 2;
    }
    if (!found) {
      notes.push_back("level " + std::to_string(n) + ": no k up to " + std::to_string(opts.k_cap));
      continue;
    }
    long long hi = k;
    lo = std::max(lo, std::max(support, probe.k_min) - 1);
    while (hi - lo > 1) {
      const long long mid = lo + (hi - lo) / 2;
      if (attempt(mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    attempt(hi);
    return r;
  }
  std::string msg = "no certificate for t = " + format_double(t) + " within n <= " + std::to_string(opts.n_max) +
                    " and k <= " + std::to_string(opts.k_cap) + "; achievable t < " + format_double(achievable);
  for (const std::string& n : notes) msg += "; " + n;
  throw ResourceError(msg);
}

VerifyResult verify(const SubsystemReport& report, const CarpetSystem& carpet, std::optional<std::size_t> alphabet_cap) {
  VerifyResult v;
  auto fail = [&](const std::string& what) {
    v.ok = false;
    v.failures.push_back(what);
  };
  const FrequencyDesign& d = report.design;
  const WeightedAlphabet alph = oriented_alphabet(carpet, d, alphabet_cap);
  if (d.counts.size() != alph.size()) {
    fail("counts do not match the level-" + std::to_string(d.n) + " alphabet");
    return v;
  }
  long long k = 0;
  for (long long m : d.counts) k += m;
  if (k != d.k) fail("counts do not sum to k");
  if (d.counts != frequency_counts(d.p, d.k)) fail("counts are not the apportionment of k p");

  SubsystemReport fresh = report;
  try {
    evaluate_design(fresh, alph, carpet);
  } catch (const Error& e) {
    fail(std::string("re-evaluation failed: ") + e.what());
    return v;
  }
  if (fresh.s_nk != report.s_nk || fresh.log_a_nk != report.log_a_nk || fresh.log_b_nk != report.log_b_nk) {
    fail("recorded s_nk or contraction products differ from re-evaluation");
  }
  if (!(fresh.achieved > report.target)) fail("s_nk / (1 + eps) does not exceed the target");
  if (!fresh.domination.flag) fail("domination inequality fails");
  if (!(fresh.domination.log_b_nk < fresh.domination.log_c + fresh.domination.log_a_nk)) fail("domination gap");
  if (!fresh.inflation_ok) fail("eps-inflation bound fails");
  if (fresh.gamma.log_gamma_tilde > fresh.gamma.log_gamma + 1e-9) fail("#Gamma~ exceeds #Gamma");
  if (report.diffuseness) {
    if (!fresh.diffuseness || !(fresh.diffuseness->beta > 0.0) || fresh.diffuseness->beta != report.diffuseness->beta) {
      fail("diffuseness constant does not re-verify");
    }
  }
  return v;
}

}  // namespace carpet
