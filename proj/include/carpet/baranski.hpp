#ifndef CARPET_BARANSKI_HPP
#define CARPET_BARANSKI_HPP

#include <cmath>
#include <cstdint>
#include <utility>

#include <Eigen/Dense>

#include "carpet/symbolic.hpp"

namespace carpet {

inline constexpr double kBoundaryTol = 1e-9;

enum class Branch { V, H, Boundary };

const char* branch_name(Branch b);

/// Column sums q and row sums r of p.
template <typename Derived>
std::pair<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>,
          Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>>
marginals(const Eigen::MatrixBase<Derived>& p, const WeightedAlphabet& alphabet) {
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  Vec q = Vec::Zero(alphabet.num_columns());
  Vec r = Vec::Zero(alphabet.num_rows());
  for (std::size_t c = 0; c < alphabet.size(); ++c) {
    q(alphabet.cells[c].col) += p(static_cast<Eigen::Index>(c));
    r(alphabet.cells[c].row) += p(static_cast<Eigen::Index>(c));
  }
  return {q, r};
}

/// (lambda1, lambda2) = (sum p log a, sum p log b).
template <typename Derived>
std::pair<typename Derived::Scalar, typename Derived::Scalar> lyapunov(const Eigen::MatrixBase<Derived>& p,
                                                                       const WeightedAlphabet& alphabet) {
  using S = typename Derived::Scalar;
  S l1(0), l2(0);
  for (std::size_t c = 0; c < alphabet.size(); ++c) {
    const S pc = p(static_cast<Eigen::Index>(c));
    l1 += pc * S(std::log(alphabet.a(alphabet.cells[c].col)));
    l2 += pc * S(std::log(alphabet.b(alphabet.cells[c].row)));
  }
  return {l1, l2};
}

/// Shannon entropy with 0 log 0 = 0.
template <typename Derived>
typename Derived::Scalar entropy(const Eigen::MatrixBase<Derived>& v) {
  using std::log;
  using S = typename Derived::Scalar;
  S h(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v(i) > S(0)) h -= v(i) * log(v(i));
  }
  return h;
}

template <typename S>
struct GValue {
  S value = S(0);
  Branch branch = Branch::V;
  S lambda1 = S(0);
  S lambda2 = S(0);
  S g1 = S(0);
  S g2 = S(0);
  Eigen::Matrix<S, Eigen::Dynamic, 1> q;
  Eigen::Matrix<S, Eigen::Dynamic, 1> r;
};

/// g(p, a, b): g1 = H(q)/(-lambda1) + (H(p) - H(q))/(-lambda2) when
/// lambda1 >= lambda2, otherwise g2 with the roles of (q, a) and (r, b)
/// swapped. Both are always computed; within boundary_tol of the constraint
/// surface the branch is Boundary and the value is the larger of the two.
template <typename Derived>
GValue<typename Derived::Scalar> g_eval(const Eigen::MatrixBase<Derived>& p, const WeightedAlphabet& alphabet,
                                        double boundary_tol = kBoundaryTol) {
  using S = typename Derived::Scalar;
  using std::abs;
  GValue<S> g;
  std::tie(g.q, g.r) = marginals(p, alphabet);
  std::tie(g.lambda1, g.lambda2) = lyapunov(p, alphabet);
  const S hp = entropy(p), hq = entropy(g.q), hr = entropy(g.r);
  g.g1 = hq / -g.lambda1 + (hp - hq) / -g.lambda2;
  g.g2 = hr / -g.lambda2 + (hp - hr) / -g.lambda1;
  if (abs(g.lambda1 - g.lambda2) <= S(boundary_tol)) {
    g.branch = Branch::Boundary;
    g.value = g.g1 > g.g2 ? g.g1 : g.g2;
  } else if (g.lambda1 > g.lambda2) {
    g.branch = Branch::V;
    g.value = g.g1;
  } else {
    g.branch = Branch::H;
    g.value = g.g2;
  }
  return g;
}

/// Dimension of the Bernoulli measure with weights p on the symbolic carpet.
template <typename Derived>
typename Derived::Scalar bernoulli_dim(const Eigen::MatrixBase<Derived>& p, const WeightedAlphabet& alphabet) {
  return g_eval(p, alphabet).value;
}

/// Checks p is a probability vector on the alphabet (sum 1 within 1e-12,
/// entries nonnegative); throws InputError otherwise.
void check_prob_vector(const Eigen::VectorXd& p, const WeightedAlphabet& alphabet);

struct MaximizeOptions {
  int restarts = 8;
  int iterations = 5000;
  double step0 = 0.5;  // step at iteration t is step0 / sqrt(t)
  std::uint64_t seed = 0x5eed;
  double boundary_tol = kBoundaryTol;
  double penalty0 = 10.0;  // final weight of the Lyapunov constraint penalty
  double spread_tol = 1e-3;
};

struct MaximizeCertificate {
  int iterations_used = 0;  // summed over restarts and both problems
  double spread = 0.0;      // best minus worst restart value
  bool warning = false;     // spread above spread_tol
  std::uint64_t seed = 0;
};

struct MaximizeResult {
  Eigen::VectorXd p;
  double value = 0.0;
  Branch branch = Branch::V;
  MaximizeCertificate certificate;
};

/// Maximizes g over the simplex: g1 on lambda1 >= lambda2 and g2 on
/// lambda2 >= lambda1, each by exponentiated-gradient ascent with a ramped
/// quadratic penalty on the constraint, from the uniform vector and seeded
/// Dirichlet starts. value is g evaluated at the returned p.
MaximizeResult maximize_g(const WeightedAlphabet& alphabet, const MaximizeOptions& opts = {});

/// Max of g over the lattice {k / resolution}; at most 4 cells.
double grid_oracle(const WeightedAlphabet& alphabet, int resolution);

struct SeparationResult {
  Eigen::VectorXd p;
  bool already_separated = false;
  double delta = 0.0;        // mass moved
  double gap = 0.0;          // lambda1(p) - lambda2(p)
  double gap_bound = 0.0;    // delta * |log a0 - log b0 - log a1 + log b1|
  int from_cell = -1;
  int to_cell = -1;
};

/// Perturbs q so that lambda1 != lambda2 while keeping g above t.
///
/// Requires g(q) > t. Returns q itself when |lambda1 - lambda2| exceeds the
/// boundary tolerance. Otherwise moves mass delta from a cell with
/// a <= b to a cell with a > b (or the mirrored pair), halving delta from
/// min(q)/2. Throws UnsupportedError when a == b on every cell and
/// InternalError when no valid pair exists.
SeparationResult separate_lyapunov(const Eigen::VectorXd& q, const WeightedAlphabet& alphabet, double t);

}  // namespace carpet

#endif  // CARPET_BARANSKI_HPP
