#include <cmath>
#include <random>

#include "carpet/baranski.hpp"
#include "carpet/error.hpp"
#include "doctest.h"
#include "test_systems.hpp"

using namespace carpet;

namespace {

// Closed form for Bedford-McMullen carpets with a > b: log_{1/a} sum_i N_i^{log a / log b}.
double mcmullen(double a, double b, const std::vector<int>& column_counts) {
  double s = 0.0;
  for (int n : column_counts) s += std::pow(n, std::log(a) / std::log(b));
  return std::log(s) / -std::log(a);
}

WeightedAlphabet bm_alphabet() { return lift_alphabet(testsys::bm_carpet(), 1); }

Eigen::VectorXd uniform(std::size_t m) { return Eigen::VectorXd::Constant(static_cast<Eigen::Index>(m), 1.0 / m); }

Eigen::VectorXd random_simplex(std::mt19937_64& rng, std::size_t m) {
  std::exponential_distribution<double> e(1.0);
  Eigen::VectorXd v(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = e(rng);
  return v / v.sum();
}

}  // namespace

TEST_CASE("marginals") {
  const WeightedAlphabet bm = bm_alphabet();
  const auto [q, r] = marginals(uniform(3), bm);
  CHECK(q(0) == doctest::Approx(2.0 / 3.0));
  CHECK(q(1) == doctest::Approx(1.0 / 3.0));
  for (int j = 0; j < 3; ++j) CHECK(r(j) == doctest::Approx(1.0 / 3.0));

  const auto [q2, r2] = marginals(Eigen::Vector3d(1, 0, 0), bm);
  CHECK(q2(0) == 1.0);
  CHECK(r2(0) == 1.0);
}

TEST_CASE("lyapunov") {
  const auto [l1, l2] = lyapunov(uniform(3), bm_alphabet());
  CHECK(l1 == doctest::Approx(-0.693147).epsilon(1e-6));
  CHECK(l2 == doctest::Approx(-1.098612).epsilon(1e-6));
}

TEST_CASE("g_eval examples") {
  const GValue<double> g = g_eval(uniform(3), bm_alphabet());
  const double hq = -(2.0 / 3 * std::log(2.0 / 3) + 1.0 / 3 * std::log(1.0 / 3));
  CHECK(g.value == doctest::Approx(hq / std::log(2.0) + (std::log(3.0) - hq) / std::log(3.0)).epsilon(1e-14));
  CHECK(g.value == doctest::Approx(1.338917).epsilon(1e-6));
  CHECK(g.branch == Branch::V);

  const WeightedAlphabet sq = lift_alphabet(testsys::full_square(), 1);
  const GValue<double> gs = g_eval(uniform(4), sq);
  CHECK(gs.value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(gs.branch == Branch::Boundary);

  CHECK(g_eval(Eigen::Vector3d(0, 1, 0), bm_alphabet()).value == 0.0);
  CHECK(bernoulli_dim(uniform(3), bm_alphabet()) == g.value);
}

TEST_CASE("g_eval is generic in the scalar type") {
  const Eigen::Matrix<long double, Eigen::Dynamic, 1> p = uniform(3).cast<long double>();
  const auto g = g_eval(p, bm_alphabet());
  CHECK(static_cast<double>(g.value) == doctest::Approx(g_eval(uniform(3), bm_alphabet()).value).epsilon(1e-15));
}

TEST_CASE("g1 and g2 agree near the constraint surface") {
  // a = (1/2, 1/4), b = 1/3: lambda1 = lambda2 when q0 = 2 - log2(3)
  const WeightedAlphabet alph =
      from_weights(Eigen::Vector2d(0.5, 0.25), Eigen::Vector2d(1.0 / 3, 1.0 / 3), {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double q0 = 2.0 - std::log2(3.0);
  for (int t = 0; t < 200; ++t) {
    const double s = u(rng), w = u(rng);
    Eigen::Vector4d p(q0 * s, q0 * (1 - s), (1 - q0) * w, (1 - q0) * (1 - w));
    const GValue<double> g = g_eval(p, alph);
    CHECK(std::abs(g.lambda1 - g.lambda2) <= 1e-9);
    CHECK(std::abs(g.g1 - g.g2) <= 1e-6);
  }
}

TEST_CASE("maximize_g examples") {
  const MaximizeResult bm = maximize_g(bm_alphabet());
  CHECK(std::abs(bm.value - mcmullen(0.5, 1.0 / 3, {2, 1})) <= 1e-9);
  CHECK(std::abs(bm.value - 1.349739) <= 1e-3);
  const auto [q, r] = marginals(bm.p, bm_alphabet());
  // first-order condition log((1 - q0) / q0) = -(log 2)^2 / log 3
  CHECK(q(0) == doctest::Approx(1.0 / (1.0 + std::exp(-std::pow(std::log(2.0), 2) / std::log(3.0)))).epsilon(1e-3));
  CHECK(q(0) == doctest::Approx(0.6076).epsilon(1e-3));
  CHECK(bm.value <= mcmullen(0.5, 1.0 / 3, {2, 1}) + 1e-12);
  CHECK_FALSE(bm.certificate.warning);
  CHECK(bm.certificate.seed == MaximizeOptions{}.seed);

  const MaximizeResult sq = maximize_g(lift_alphabet(testsys::full_square(), 1));
  CHECK(sq.value == doctest::Approx(2.0).epsilon(1e-12));

  const MaximizeResult col = maximize_g(lift_alphabet(testsys::one_column(), 1));
  CHECK(col.value == doctest::Approx(std::log(2.0) / std::log(3.0)).epsilon(1e-10));

  CHECK(maximize_g(lift_alphabet(testsys::single_cell(), 1)).value == 0.0);
}

TEST_CASE("maximize_g is deterministic") {
  const MaximizeResult a = maximize_g(bm_alphabet());
  const MaximizeResult b = maximize_g(bm_alphabet());
  CHECK(a.value == b.value);
  CHECK(a.p == b.p);
}

TEST_CASE("grid_oracle examples") {
  CHECK(grid_oracle(bm_alphabet(), 400) == doctest::Approx(1.3497).epsilon(3e-3));
  const double sq = grid_oracle(lift_alphabet(testsys::full_square(), 1), 100);
  CHECK(sq <= 2.0 + 1e-12);
  CHECK(sq >= 2.0 - 1e-4);
  CHECK(grid_oracle(lift_alphabet(testsys::single_cell(), 1), 50) == 0.0);
  CHECK_THROWS_AS(grid_oracle(lift_alphabet(testsys::bm_carpet(), 2), 10), InputError);
}

TEST_CASE("optimizer agrees with the grid oracle and dominates samples") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> w(0.1, 0.9);
  const std::vector<AlphabetCell> grid{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  for (int t = 0; t < 6; ++t) {
    std::vector<AlphabetCell> cells;
    for (const AlphabetCell& c : grid) {
      if (std::uniform_int_distribution<int>(0, 3)(rng) != 0) cells.push_back(c);
    }
    if (cells.empty()) cells.push_back(grid[0]);
    const WeightedAlphabet alph = from_weights(Eigen::Vector2d(w(rng), w(rng)), Eigen::Vector2d(w(rng), w(rng)), cells);
    const MaximizeResult res = maximize_g(alph);
    CHECK(std::abs(res.value - grid_oracle(alph, 400)) <= 3e-3);
    for (int s = 0; s < 50; ++s) CHECK(res.value >= g_eval(random_simplex(rng, cells.size()), alph).value - 1e-12);
  }
}

TEST_CASE("optimizer value is invariant under the level-2 lift of an affine system") {
  for (const CarpetSystem& c : {testsys::bm_carpet(), testsys::one_column()}) {
    const double v1 = maximize_g(lift_alphabet(c, 1)).value;
    CHECK(std::abs(maximize_g(lift_alphabet(c, 2)).value - v1) <= 1e-3);
  }
}

TEST_CASE("maximizer is interior for multi-column multi-row systems") {
  for (const CarpetSystem& c : {testsys::bm_carpet(), testsys::moebius_carpet()}) {
    const MaximizeResult res = maximize_g(lift_alphabet(c, 1));
    CHECK(res.p.minCoeff() > 1e-6);
  }
}

TEST_CASE("separate_lyapunov") {
  const WeightedAlphabet bm = bm_alphabet();
  const SeparationResult same = separate_lyapunov(uniform(3), bm, 1.0);
  CHECK(same.already_separated);
  CHECK(same.p == uniform(3));

  const WeightedAlphabet mixed =
      from_weights(Eigen::Vector2d(0.5, 0.25), Eigen::Vector2d(1.0 / 3, 1.0 / 3), {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const double q0 = 2.0 - std::log(3.0) / std::log(2.0);
  const Eigen::Vector4d q(q0 / 2, q0 / 2, (1 - q0) / 2, (1 - q0) / 2);
  const double gq = g_eval(q, mixed).value;
  const SeparationResult sep = separate_lyapunov(q, mixed, gq - 0.01);
  CHECK_FALSE(sep.already_separated);
  const auto [l1, l2] = lyapunov(sep.p, mixed);
  CHECK(l1 != l2);
  CHECK(l1 - l2 == sep.gap);
  CHECK(std::abs(sep.gap) >= 0.5 * sep.gap_bound);
  CHECK(g_eval(sep.p, mixed).value > gq - 0.01);
  CHECK(std::abs(sep.p.sum() - 1.0) <= 1e-12);
  CHECK(sep.p.minCoeff() > 0.0);

  const WeightedAlphabet sq = lift_alphabet(testsys::full_square(), 1);
  CHECK_THROWS_AS(separate_lyapunov(uniform(4), sq, 1.0), UnsupportedError);
  CHECK_THROWS_AS(separate_lyapunov(uniform(3), bm, 5.0), InputError);
}
