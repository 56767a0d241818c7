#include "carpet/baranski.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <random>
#include <string>

#include "carpet/error.hpp"

namespace carpet {

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::V:
      return "V";
    case Branch::H:
      return "H";
    case Branch::Boundary:
      return "boundary";
  }
  return "?";
}

void check_prob_vector(const Eigen::VectorXd& p, const WeightedAlphabet& alphabet) {
  if (static_cast<std::size_t>(p.size()) != alphabet.size()) {
    throw InputError("probability vector has " + std::to_string(p.size()) + " entries for " +
                     std::to_string(alphabet.size()) + " cells");
  }
  if ((p.array() < 0.0).any() || !p.allFinite()) throw InputError("probability vector has negative entries");
  if (std::abs(p.sum() - 1.0) > 1e-12) throw InputError("probability vector does not sum to 1");
}

namespace {

struct AscentRun {
  Eigen::VectorXd p;
  int iterations = 0;
};

// Exponentiated-gradient ascent of g1 with a ramped penalty on
// max(0, lambda2 - lambda1)^2, in log coordinates theta = log p.
class G1Ascent {
 public:
  G1Ascent(const WeightedAlphabet& alphabet, const MaximizeOptions& opts)
      : alph_(alphabet), opts_(opts), la_(alphabet.log_a_per_cell()), lb_(alphabet.log_b_per_cell()) {
    col_.resize(alphabet.size());
    for (std::size_t c = 0; c < alphabet.size(); ++c) col_[c] = alphabet.cells[c].col;
  }

  AscentRun run(const Eigen::VectorXd& start) const {
    const Eigen::Index m = start.size();
    Eigen::VectorXd theta = start.array().max(1e-300).log().matrix();
    normalize(theta);
    Eigen::VectorXd grad(m), trial(m);
    AscentRun out;
    int quiet = 0;
    for (int t = 1; t <= opts_.iterations; ++t) {
      out.iterations = t;
      const double mu = opts_.penalty0 * static_cast<double>(t) / opts_.iterations;
      const double f = objective(theta, mu, &grad);
      double eta = opts_.step0 / std::sqrt(static_cast<double>(t));
      double f_new = f;
      bool moved = false;
      for (int tries = 0; tries < 40; ++tries) {
        trial = theta + eta * grad;
        normalize(trial);
        f_new = objective(trial, mu, nullptr);
        if (f_new >= f) {
          moved = true;
          break;
        }
        eta *= 0.5;
      }
      if (moved) theta = trial;
      quiet = (!moved || f_new - f < 1e-14) ? quiet + 1 : 0;
      if (quiet >= 50) break;
    }
    out.p = theta.array().exp().matrix();
    out.p /= out.p.sum();
    return out;
  }

 private:
  // theta <- theta - logsumexp(theta), floored so exp stays representable
  static void normalize(Eigen::VectorXd& theta) {
    const double mx = theta.maxCoeff();
    theta = theta.array().max(mx - 700.0).matrix();
    const double lse = mx + std::log((theta.array() - mx).exp().sum());
    theta.array() -= lse;
  }

  double objective(const Eigen::VectorXd& theta, double mu, Eigen::VectorXd* grad) const {
    const Eigen::VectorXd p = theta.array().exp().matrix();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(alph_.num_columns());
    for (Eigen::Index c = 0; c < p.size(); ++c) q(col_[static_cast<std::size_t>(c)]) += p(c);
    double A = 0.0, B = 0.0;
    Eigen::VectorXd logq(p.size());
    for (Eigen::Index c = 0; c < p.size(); ++c) {
      logq(c) = std::log(q(col_[static_cast<std::size_t>(c)]));
      A += p(c) * logq(c);
      B += p(c) * theta(c);
    }
    const double l1 = p.dot(la_), l2 = p.dot(lb_);
    const double viol = std::max(0.0, l2 - l1);
    const double val = A / l1 + (B - A) / l2 - mu * viol * viol;
    if (grad) {
      for (Eigen::Index c = 0; c < p.size(); ++c) {
        (*grad)(c) = (logq(c) + 1.0) / l1 - A * la_(c) / (l1 * l1) + (theta(c) - logq(c)) / l2 -
                     (B - A) * lb_(c) / (l2 * l2) - 2.0 * mu * viol * (lb_(c) - la_(c));
      }
    }
    return val;
  }

  const WeightedAlphabet& alph_;
  const MaximizeOptions& opts_;
  Eigen::VectorXd la_, lb_;
  std::vector<int> col_;
};

Eigen::VectorXd start_point(Eigen::Index m, std::uint64_t seed, int restart) {
  if (restart == 0) return Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m));
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::exponential_distribution<double> expo(1.0);  // Dirichlet(1) via normalized exponentials
  Eigen::VectorXd v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = expo(rng) + 1e-12;
  return v / v.sum();
}

struct RestartOutcome {
  Eigen::VectorXd p;
  double value = -1.0;
  int iterations = 0;
};

}  // namespace

MaximizeResult maximize_g(const WeightedAlphabet& alphabet, const MaximizeOptions& opts) {
  if (alphabet.size() == 0) throw InputError("empty alphabet");
  if (opts.restarts < 1 || opts.iterations < 1) throw InputError("restarts and iterations must be positive");
  const WeightedAlphabet flipped = transpose(alphabet);
  const G1Ascent v_problem(alphabet, opts);
  const G1Ascent h_problem(flipped, opts);
  const auto m = static_cast<Eigen::Index>(alphabet.size());

  auto one_restart = [&](int r) {
    const Eigen::VectorXd start = start_point(m, opts.seed, r);
    RestartOutcome best;
    for (const G1Ascent* prob : {&v_problem, &h_problem}) {
      AscentRun run = prob->run(start);
      const double val = g_eval(run.p, alphabet, opts.boundary_tol).value;
      best.iterations += run.iterations;
      if (val > best.value) {
        best.value = val;
        best.p = std::move(run.p);
      }
    }
    return best;
  };

  std::vector<std::future<RestartOutcome>> jobs;
  for (int r = 0; r < opts.restarts; ++r) jobs.push_back(std::async(std::launch::async, one_restart, r));
  std::vector<RestartOutcome> outcomes;
  for (auto& j : jobs) outcomes.push_back(j.get());

  MaximizeResult res;
  std::size_t best = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    res.certificate.iterations_used += outcomes[r].iterations;
    worst = std::min(worst, outcomes[r].value);
    if (outcomes[r].value > outcomes[best].value) best = r;
  }
  res.p = outcomes[best].p;
  const GValue<double> g = g_eval(res.p, alphabet, opts.boundary_tol);
  res.value = g.value;
  res.branch = g.branch;
  res.certificate.spread = res.value - worst;
  res.certificate.warning = res.certificate.spread > opts.spread_tol;
  res.certificate.seed = opts.seed;
  return res;
}

double grid_oracle(const WeightedAlphabet& alphabet, int resolution) {
  const std::size_t m = alphabet.size();
  if (m == 0 || m > 4) throw InputError("grid oracle needs between 1 and 4 cells");
  if (resolution < 1) throw InputError("resolution must be positive");
  const double R = resolution;
  // x log x at x = k / R
  std::vector<double> xlogx(static_cast<std::size_t>(resolution) + 1, 0.0);
  for (int k = 1; k <= resolution; ++k) xlogx[static_cast<std::size_t>(k)] = (k / R) * std::log(k / R);
  const Eigen::VectorXd la = alphabet.log_a_per_cell(), lb = alphabet.log_b_per_cell();
  const int nc = alphabet.num_columns(), nr = alphabet.num_rows();

  std::vector<int> k(m, 0);
  std::vector<int> qv(static_cast<std::size_t>(nc)), rv(static_cast<std::size_t>(nr));
  double best = 0.0;
  auto evaluate = [&]() {
    std::fill(qv.begin(), qv.end(), 0);
    std::fill(rv.begin(), rv.end(), 0);
    double hp = 0.0, l1 = 0.0, l2 = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      qv[static_cast<std::size_t>(alphabet.cells[c].col)] += k[c];
      rv[static_cast<std::size_t>(alphabet.cells[c].row)] += k[c];
      hp -= xlogx[static_cast<std::size_t>(k[c])];
      l1 += k[c] / R * la(static_cast<Eigen::Index>(c));
      l2 += k[c] / R * lb(static_cast<Eigen::Index>(c));
    }
    double hq = 0.0, hr = 0.0;
    for (int v : qv) hq -= xlogx[static_cast<std::size_t>(v)];
    for (int v : rv) hr -= xlogx[static_cast<std::size_t>(v)];
    const double g1 = hq / -l1 + (hp - hq) / -l2;
    const double g2 = hr / -l2 + (hp - hr) / -l1;
    double g;
    if (std::abs(l1 - l2) <= kBoundaryTol) {
      g = std::max(g1, g2);
    } else {
      g = l1 > l2 ? g1 : g2;
    }
    best = std::max(best, g);
  };
  auto rec = [&](auto&& self, std::size_t idx, int left) -> void {
    if (idx + 1 == m) {
      k[idx] = left;
      evaluate();
      return;
    }
    for (int v = 0; v <= left; ++v) {
      k[idx] = v;
      self(self, idx + 1, left - v);
    }
  };
  rec(rec, 0, resolution);
  return best;
}

SeparationResult separate_lyapunov(const Eigen::VectorXd& q, const WeightedAlphabet& alphabet, double t) {
  check_prob_vector(q, alphabet);
  const double gq = g_eval(q, alphabet).value;
  if (!(gq > t)) throw InputError("separate_lyapunov needs g(q) > t");

  SeparationResult res;
  const auto [l1, l2] = lyapunov(q, alphabet);
  if (std::abs(l1 - l2) > kBoundaryTol) {
    res.p = q;
    res.already_separated = true;
    res.gap = l1 - l2;
    return res;
  }

  const Eigen::VectorXd d = alphabet.log_a_per_cell() - alphabet.log_b_per_cell();
  if (d.cwiseAbs().maxCoeff() <= 1e-12) {
    throw UnsupportedError("a and b agree on every cell, the Lyapunov exponents cannot be separated");
  }
  // receiving cell: largest |log a - log b| on the side that has one; donor
  // on the opposite side (or neutral), carrying positive mass
  int to = -1, from = -1;
  Eigen::Index imax = 0, imin = 0;
  d.maxCoeff(&imax);
  d.minCoeff(&imin);
  const bool raise_l1 = d(imax) > 1e-12;
  to = static_cast<int>(raise_l1 ? imax : imin);
  for (Eigen::Index c = 0; c < d.size(); ++c) {
    if (q(c) <= 0.0) continue;
    const bool opposite = raise_l1 ? d(c) <= 0.0 : d(c) >= 0.0;
    if (!opposite) continue;
    if (from < 0 || (raise_l1 ? d(c) < d(from) : d(c) > d(from))) from = static_cast<int>(c);
  }
  if (from < 0) throw InternalError("no donor cell on the opposite side of the Lyapunov constraint");

  const double D = d(to) - d(from);
  double delta = 0.5 * q.minCoeff();
  if (!(delta > 0.0)) delta = 0.5 * q(from);
  for (int halvings = 0; halvings < 200; ++halvings, delta *= 0.5) {
    Eigen::VectorXd p = q;
    p(from) -= delta;
    p(to) += delta;
    if (!(p(from) > 0.0)) continue;
    const auto [m1, m2] = lyapunov(p, alphabet);
    const double gap = m1 - m2;
    if (gap == 0.0 || (gap > 0.0) != (D > 0.0)) continue;
    if (!(g_eval(p, alphabet).value > t)) continue;
    res.p = std::move(p);
    res.delta = delta;
    res.gap = gap;
    res.gap_bound = delta * std::abs(D);
    res.from_cell = from;
    res.to_cell = to;
    return res;
  }
  throw InternalError("delta halving did not reach g(p) > t");
}

}  // namespace carpet
