#include <algorithm>
#include <cmath>
#include <random>

#include "carpet/conformal_ifs.hpp"
#include "carpet/error.hpp"
#include "doctest.h"
#include "test_systems.hpp"

using namespace carpet;

namespace {

// Independent route: every map in the zoo is a Moebius transformation, so f_w
// is the Moebius map of the matrix product and |f_w'| = |det| / (c x + d)^2 is
// monotone; its sup sits at an endpoint.
double moebius_oracle_sup(const std::vector<IntervalMap>& maps, const Word& w) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (int l : w) m = m * maps[static_cast<std::size_t>(l)].matrix();
  const double det = m.determinant();
  auto d = [&](double x) { return std::abs(det) / std::pow(m(1, 0) * x + m(1, 1), 2); };
  return std::max(d(0.0), d(1.0));
}

double moebius_oracle_inf(const std::vector<IntervalMap>& maps, const Word& w) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();
  for (int l : w) m = m * maps[static_cast<std::size_t>(l)].matrix();
  const double det = m.determinant();
  auto d = [&](double x) { return std::abs(det) / std::pow(m(1, 0) * x + m(1, 1), 2); };
  return std::min(d(0.0), d(1.0));
}

Word random_word(std::mt19937_64& rng, int alphabet, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<int> letter(0, alphabet - 1);
  Word w(static_cast<std::size_t>(len(rng)));
  for (int& l : w) l = letter(rng);
  return w;
}

Word concat(const Word& u, const Word& v) {
  Word w = u;
  w.insert(w.end(), v.begin(), v.end());
  return w;
}

}  // namespace

TEST_CASE("sup_deriv_word examples") {
  const std::vector<IntervalMap> halves{IntervalMap::affine(0.5, 0.0), IntervalMap::affine(0.5, 0.5)};
  const NormEnclosure e = sup_deriv_word(halves, Word{0, 1});
  CHECK(e.lo == 0.25);
  CHECK(e.hi == 0.25);

  const std::vector<IntervalMap> mob{IntervalMap::moebius(1, 0, 1, 2)};
  const NormEnclosure e00 = sup_deriv_word(mob, Word{0, 0});
  CHECK(e00.lo <= 0.25 + 1e-15);
  CHECK(e00.hi >= 0.25);
  CHECK(e00.hi / e00.lo <= 1.0 + 1e-9 + 1e-15);
  CHECK(e00.hi == doctest::Approx(0.25).epsilon(1e-9));

  const NormEnclosure e0 = sup_deriv_word(mob, Word{0});
  CHECK(e0.hi == doctest::Approx(0.5).epsilon(1e-9));

  CHECK_THROWS_AS(sup_deriv_word(mob, Word{}), InputError);
  CHECK_THROWS_AS(sup_deriv_word(mob, Word{1}), InputError);
}

TEST_CASE("sup/inf enclosures agree with the Moebius matrix oracle") {
  const auto maps = testsys::moebius_pair_maps();
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_word(rng, 2, 12);
    const NormEnclosure s = sup_deriv_word(maps, w);
    const double truth = moebius_oracle_sup(maps, w);
    CHECK(s.lo <= truth * (1 + 1e-13));
    CHECK(s.hi >= truth * (1 - 1e-13));
    CHECK(s.hi / s.lo <= 1.0 + 1e-9 + 1e-14);

    const NormEnclosure i = inf_deriv_word(maps, w);
    const double inf_truth = moebius_oracle_inf(maps, w);
    CHECK(i.lo <= inf_truth * (1 + 1e-13));
    CHECK(i.hi >= inf_truth * (1 - 1e-13));
  }
}

TEST_CASE("distortion constants") {
  CHECK(distortion_constant(testsys::bm_x_maps()) == 1.0);
  CHECK(distortion_constant(std::vector<IntervalMap>{IntervalMap::affine(1.0 / 3.0, 0.0)}) == 1.0);
  // K = max(2.25, 32/27), rmax = 1/2
  CHECK(distortion_constant(testsys::moebius_pair_maps()) == doctest::Approx(std::exp(-4.5)).epsilon(1e-8));
  CHECK(distortion_constant(testsys::moebius_pair_maps()) == doctest::Approx(0.011109).epsilon(1e-4));
}

TEST_CASE("check_contraction") {
  const auto r = check_contraction(std::vector<IntervalMap>{IntervalMap::affine(0.5, 0.0), IntervalMap::affine(0.5, 0.5)});
  CHECK(r.ok);
  CHECK(r.rmin == 0.5);
  CHECK(r.rmax == 0.5);

  const auto m = check_contraction(testsys::moebius_pair_maps());
  CHECK(m.ok);
  CHECK(m.rmin == doctest::Approx(1.0 / 16.0));
  CHECK(m.rmax == doctest::Approx(0.5).epsilon(1e-9));

  const auto bad = check_contraction(
      std::vector<IntervalMap>{IntervalMap::moebius(1, 0, 1, 1), IntervalMap::affine(1.0 / 3.0, 2.0 / 3.0)});
  CHECK_FALSE(bad.ok);
  CHECK(bad.offending_map == 0);
  CHECK_THROWS_AS(CoordinateIFS({IntervalMap::moebius(1, 0, 1, 1)}), ValidationError);
}

TEST_CASE("check_osc") {
  CHECK(check_osc(testsys::bm_x_maps()).pass);
  CHECK(check_osc(testsys::moebius_pair_maps()).pass);

  const auto r = check_osc(std::vector<IntervalMap>{IntervalMap::affine(0.5, 0.0), IntervalMap::affine(0.5, 0.25)});
  CHECK_FALSE(r.pass);
  CHECK(r.first == 0);
  CHECK(r.second == 1);
  CHECK(r.overlap.lo == 0.25);
  CHECK(r.overlap.hi == 0.5);
}

TEST_CASE("CarpetSystem construction and validation") {
  const CarpetSystem bm = testsys::bm_carpet();
  CHECK(bm.distortion_c() == 1.0);
  CHECK(bm.nonempty_columns() == std::vector<int>{0, 1});
  CHECK(bm.nonempty_rows() == std::vector<int>{0, 1, 2});
  CHECK_NOTHROW(bm.validate());

  CHECK_THROWS_AS(CarpetSystem(CoordinateIFS(testsys::bm_x_maps()), CoordinateIFS(testsys::bm_y_maps()), {{5, 0}}),
                  InputError);
  CHECK_THROWS_AS(CarpetSystem(CoordinateIFS(testsys::bm_x_maps()), CoordinateIFS(testsys::bm_y_maps()), {}),
                  InputError);

  const CarpetSystem overlap(CoordinateIFS({IntervalMap::affine(0.5, 0.0), IntervalMap::affine(0.5, 0.25)}),
                             CoordinateIFS(testsys::bm_y_maps()), {{0, 0}, {1, 1}});
  CHECK_THROWS_AS(overlap.validate(), ValidationError);

  const CarpetSystem mob = testsys::moebius_carpet();
  CHECK(mob.distortion_c() == doctest::Approx(std::exp(-4.5)).epsilon(1e-8));
  const CarpetSystem overridden(mob.x_ifs(), mob.y_ifs(), mob.cells(), 0.5);
  CHECK(overridden.distortion_c() == 0.5);
}

TEST_CASE("property: sandwich, geometric bounds and distortion over random words") {
  struct Sys {
    std::vector<IntervalMap> maps;
    double slack;  // relative slack for equality cases under floating rounding
  };
  const std::vector<Sys> systems{{testsys::moebius_pair_maps(), 0.0},
                                 {testsys::bm_y_maps(), 1e-14},
                                 {testsys::mixed_maps(), 1e-14}};
  std::mt19937_64 rng(11);
  for (const Sys& s : systems) {
    const CoordinateIFS ifs(s.maps);
    const double c = ifs.distortion_c();
    const int alphabet = static_cast<int>(s.maps.size());
    const Interval hull = attractor_hull(s.maps);
    for (int trial = 0; trial < 200; ++trial) {
      const Word u = random_word(rng, alphabet, 8);
      const Word v = random_word(rng, alphabet, 8);
      const NormEnclosure eu = ifs.sup_deriv(u), ev = ifs.sup_deriv(v), euv = ifs.sup_deriv(concat(u, v));
      CHECK(c * eu.hi * ev.hi <= euv.lo * (1 + s.slack));
      CHECK(euv.lo <= euv.hi);
      CHECK(euv.hi <= eu.hi * ev.hi * (1 + s.slack));

      const double m = static_cast<double>(u.size());
      CHECK(std::pow(ifs.rmin(), m) <= eu.lo * (1 + s.slack));
      CHECK(eu.hi <= std::pow(ifs.rmax(), m) * (1 + s.slack));

      // diameter of the image of the attractor hull
      const double len = std::abs(eval_word(s.maps, u, hull.hi) - eval_word(s.maps, u, hull.lo));
      CHECK(len >= c * eu.lo * (hull.hi - hull.lo) * (1 - 1e-12));
      // endpoint subtraction loses absolute precision near 1
      CHECK(len <= eu.hi * (1 + s.slack) + 1e-15);

      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int k = 0; k < 5; ++k) {
        const double x1 = unit(rng), x2 = unit(rng);
        auto dv = [&](double x) {
          double y = x, acc = 1.0;
          for (auto it = u.rbegin(); it != u.rend(); ++it) {
            acc *= std::abs(s.maps[static_cast<std::size_t>(*it)].deriv(y, 1));
            y = s.maps[static_cast<std::size_t>(*it)](y);
          }
          return acc;
        };
        CHECK(dv(x1) >= c * dv(x2) * (1 - 1e-12));
      }
    }
  }
}
