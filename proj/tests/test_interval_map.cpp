#include <cmath>

#include "carpet/error.hpp"
#include "carpet/interval_map.hpp"
#include "doctest.h"

using carpet::IntervalMap;

TEST_CASE("eval_map on affine and Moebius maps") {
  CHECK(carpet::eval_map(IntervalMap::affine(0.5, 0.0), 1.0) == doctest::Approx(0.5));
  // x / (x + 2) at 1
  CHECK(carpet::eval_map(IntervalMap::moebius(1, 0, 1, 2), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  // (x + 2) / (x + 3) at 0
  CHECK(carpet::eval_map(IntervalMap::moebius(1, 2, 1, 3), 0.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("eval_map rejects points outside the unit interval") {
  const auto f = IntervalMap::affine(0.5, 0.0);
  CHECK_THROWS_AS(carpet::eval_map(f, 1.5), carpet::InputError);
  CHECK_THROWS_AS(carpet::eval_map(f, -0.1), carpet::InputError);
  CHECK_THROWS_AS(carpet::eval_map(f, std::nan("")), carpet::InputError);
}

TEST_CASE("closed-form derivatives") {
  const auto f = IntervalMap::affine(0.5, 0.0);
  CHECK(carpet::deriv(f, 0.3, 1) == 0.5);
  CHECK(carpet::deriv(f, 0.3, 2) == 0.0);

  const auto g = IntervalMap::moebius(1, 0, 1, 2);
  CHECK(carpet::deriv(g, 0.0, 1) == doctest::Approx(0.5));
  CHECK(carpet::deriv(g, 0.0, 2) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(carpet::deriv(g, 0.0, 3), carpet::InputError);

  // finite differences at an interior point
  const double x = 0.37, h = 1e-6;
  CHECK(g.deriv(x, 1) == doctest::Approx((g(x + h) - g(x - h)) / (2 * h)).epsilon(1e-8));
  CHECK(g.deriv(x, 2) == doctest::Approx((g.deriv(x + h, 1) - g.deriv(x - h, 1)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("construction rejects invalid maps") {
  CHECK_THROWS_AS(IntervalMap::affine(0.0, 0.5), carpet::InputError);
  CHECK_THROWS_AS(IntervalMap::affine(0.5, 0.7), carpet::InputError);     // image leaves [0,1]
  CHECK_THROWS_AS(IntervalMap::moebius(1, 0, -2, 1), carpet::InputError);  // pole at 1/2
  CHECK_THROWS_AS(IntervalMap::moebius(1, 2, 2, 4), carpet::InputError);   // zero determinant
}

TEST_CASE("endpoint extrema of |f'|") {
  const auto f0 = IntervalMap::moebius(1, 0, 1, 2);
  const auto f1 = IntervalMap::moebius(1, 2, 1, 3);
  CHECK(f0.sup_abs_deriv() == doctest::Approx(0.5));
  CHECK(f0.inf_abs_deriv() == doctest::Approx(2.0 / 9.0));
  CHECK(f1.inf_abs_deriv() == doctest::Approx(1.0 / 16.0));
  CHECK(f0.sup_abs_second_deriv() == doctest::Approx(0.5));
  CHECK(f1.sup_abs_second_deriv() == doctest::Approx(2.0 / 27.0));
  CHECK(f0.sup_log_deriv_slope() == doctest::Approx(1.0));
  CHECK(f1.has_constant_deriv() == false);
  CHECK(IntervalMap::moebius(1, 0, 0, 3).has_constant_deriv());
}
