#include <cmath>
#include <cstdlib>
#include <random>

#include "carpet/error.hpp"
#include "carpet/symbolic.hpp"
#include "doctest.h"
#include "test_systems.hpp"

using namespace carpet;

namespace {

std::vector<int> random_seq(std::mt19937_64& rng, int alphabet, int len) {
  std::uniform_int_distribution<int> letter(0, alphabet - 1);
  std::vector<int> s(static_cast<std::size_t>(len));
  for (int& l : s) l = letter(rng);
  return s;
}

bool is_prefix(const Word& p, const Word& w) {
  return p.size() <= w.size() && std::equal(p.begin(), p.end(), w.begin());
}

}  // namespace

TEST_CASE("lift_alphabet on the BM example") {
  const CarpetSystem bm = testsys::bm_carpet();
  const WeightedAlphabet l1 = lift_alphabet(bm, 1);
  CHECK(l1.size() == 3);
  CHECK(l1.a(0) == 0.5);
  CHECK(l1.b(2) == 1.0 / 3.0);

  const WeightedAlphabet l2 = lift_alphabet(bm, 2);
  CHECK(l2.size() == 9);
  CHECK(l2.num_columns() == 4);
  CHECK(l2.num_rows() == 9);
  for (Eigen::Index i = 0; i < l2.a.size(); ++i) CHECK(l2.a(i) == 0.25);
  for (Eigen::Index j = 0; j < l2.b.size(); ++j) CHECK(l2.b(j) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));

  CHECK_THROWS_AS(lift_alphabet(bm, 0), InputError);
  CHECK_THROWS_AS(lift_alphabet(bm, 12, 1000), ResourceError);
}

TEST_CASE("lift weights are exact products for affine systems") {
  const CarpetSystem bm = testsys::bm_carpet();
  const WeightedAlphabet l1 = lift_alphabet(bm, 1);
  const WeightedAlphabet l3 = lift_alphabet(bm, 3);
  for (std::size_t c = 0; c < l3.size(); ++c) {
    const Word& cw = l3.cell_words[c];
    double pa = 1.0, pb = 1.0;
    for (int l : cw) {
      pa *= l1.a(l1.cells[static_cast<std::size_t>(l)].col);
      pb *= l1.b(l1.cells[static_cast<std::size_t>(l)].row);
    }
    CHECK(l3.a(l3.cells[c].col) == pa);
    CHECK(l3.b(l3.cells[c].row) == pb);
  }
}

TEST_CASE("lift of the Moebius x-IFS") {
  const WeightedAlphabet l2 = lift_alphabet(testsys::moebius_carpet(), 2);
  CHECK(l2.column_words.front() == Word{0, 0});
  CHECK(l2.a(0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(l2.a(0) >= 0.25);
}

TEST_CASE("dim cap reads the environment") {
  CHECK(dim_cap() == kDefaultDimCap);
  setenv("CARPET_DIM_CAP", "50", 1);
  CHECK(dim_cap() == 50);
  CHECK_THROWS_AS(lift_alphabet(testsys::bm_carpet(), 4), ResourceError);
  setenv("CARPET_DIM_CAP", "garbage", 1);
  CHECK(dim_cap() == kDefaultDimCap);
  unsetenv("CARPET_DIM_CAP");
}

TEST_CASE("metric_distance examples") {
  const WeightedAlphabet bm = lift_alphabet(testsys::bm_carpet(), 1);
  const std::vector<int> s{0, 0, 0};
  CHECK(metric_distance(s, s, bm) == 0.0);
  // columns 0,0,0 vs 0,0,1; rows 0,0,0 vs 0,1,2
  CHECK(metric_distance(s, std::vector<int>{0, 1, 2}, bm) == doctest::Approx(1.0 / 3.0));
  CHECK(metric_distance(std::vector<int>{0, 0}, std::vector<int>{2, 2}, bm) == 1.0);
  // rows agree through the truncation and their bound exceeds the column weight
  CHECK_THROWS_AS(metric_distance(std::vector<int>{0}, std::vector<int>{0, 1}, bm), PrecisionError);
}

TEST_CASE("metric axioms on sampled triples") {
  const WeightedAlphabet bm = lift_alphabet(testsys::bm_carpet(), 1);
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int t = 0; t < 2000; ++t) {
    const auto x = random_seq(rng, 3, 12), y = random_seq(rng, 3, 12), z = random_seq(rng, 3, 12);
    try {
      const double dxy = metric_distance(x, y, bm), dyx = metric_distance(y, x, bm);
      const double dyz = metric_distance(y, z, bm), dxz = metric_distance(x, z, bm);
      CHECK(dxy == dyx);
      CHECK(dxz <= std::max(dxy, dyz) * (1 + 1e-15));
      if (x != y) CHECK(dxy > 0.0);
      ++checked;
    } catch (const PrecisionError&) {
    }
  }
  CHECK(checked > 1900);
}

TEST_CASE("approx_square_at examples") {
  const CarpetSystem bm = testsys::bm_carpet();
  const std::vector<int> zeros(10, 0);
  const ApproxSquare q1 = approx_square_at(bm, zeros, 1);
  CHECK(q1.x_word.size() == 2);
  CHECK(q1.y_word.size() == 1);
  const ApproxSquare q0 = approx_square_at(bm, std::vector<int>{2, 1}, 0);
  CHECK(q0.x_word == Word{1});
  CHECK(q0.y_word == Word{2});
  CHECK_THROWS_AS(approx_square_at(bm, std::vector<int>{0}, 1), PrecisionError);

  // x-weight of letter 1 is 1/9 < 1/8
  const ApproxSquare qm = approx_square_at(testsys::moebius_carpet(), std::vector<int>{2, 0, 0, 0}, 3);
  CHECK(qm.x_word == Word{1});
}

TEST_CASE("enumerate_delta_n examples") {
  const auto bm1 = enumerate_delta_n(testsys::bm_carpet(), 1);
  const std::vector<ApproxSquare> expect{{{0, 0}, {0}, 1}, {{0, 0}, {1}, 1}, {{0, 1}, {0}, 1},
                                         {{0, 1}, {1}, 1}, {{1, 0}, {2}, 1}, {{1, 1}, {2}, 1}};
  CHECK(bm1 == expect);
  CHECK(enumerate_delta_n(testsys::full_square(), 1).size() == 16);
  for (int n = 0; n < 5; ++n) CHECK(enumerate_delta_n(testsys::single_cell(), n).size() == 1);
  CHECK_THROWS_AS(enumerate_delta_n(testsys::bm_carpet(), 8, 100), ResourceError);
}

TEST_CASE("delta_n partitions the symbol space") {
  std::mt19937_64 rng(5);
  for (const CarpetSystem& carpet : {testsys::bm_carpet(), testsys::moebius_carpet()}) {
    for (int n = 1; n <= 4; ++n) {
      const auto squares = enumerate_delta_n(carpet, n);
      for (int t = 0; t < 100; ++t) {
        const auto seq = random_seq(rng, static_cast<int>(carpet.size()), 40);
        Word xs, ys;
        for (int l : seq) {
          xs.push_back(carpet.cells()[static_cast<std::size_t>(l)].first);
          ys.push_back(carpet.cells()[static_cast<std::size_t>(l)].second);
        }
        int hits = 0;
        for (const auto& q : squares) hits += is_prefix(q.x_word, xs) && is_prefix(q.y_word, ys);
        CHECK(hits == 1);
        const ApproxSquare own = approx_square_at(carpet, seq, n);
        CHECK(std::find(squares.begin(), squares.end(), own) != squares.end());
      }
    }
  }
}

TEST_CASE("balls are approximate squares") {
  const CarpetSystem carpet = testsys::bm_carpet();
  const WeightedAlphabet alph = lift_alphabet(carpet, 1);
  constexpr int kLen = 7;
  std::vector<std::vector<int>> all;
  std::vector<int> s(kLen, 0);
  for (int count = 0; count < 2187; ++count) {
    all.push_back(s);
    for (int k = kLen - 1; k >= 0; --k) {
      if (++s[static_cast<std::size_t>(k)] < 3) break;
      s[static_cast<std::size_t>(k)] = 0;
    }
  }
  std::mt19937_64 rng(9);
  int resolved = 0, total = 0;
  for (int n = 1; n <= 3; ++n) {
    const double r = std::ldexp(1.0, -n);
    for (int t = 0; t < 5; ++t) {
      const auto& centre = all[std::uniform_int_distribution<std::size_t>(0, all.size() - 1)(rng)];
      const ApproxSquare q = approx_square_at(carpet, centre, n);
      for (const auto& other : all) {
        ++total;
        double d = 0.0;
        try {
          d = metric_distance(centre, other, alph);
        } catch (const PrecisionError&) {
          continue;
        }
        ++resolved;
        bool shares = true;
        for (std::size_t k = 0; k < q.x_word.size(); ++k) {
          shares = shares && carpet.cells()[static_cast<std::size_t>(other[k])].first == q.x_word[k];
        }
        for (std::size_t k = 0; k < q.y_word.size(); ++k) {
          shares = shares && carpet.cells()[static_cast<std::size_t>(other[k])].second == q.y_word[k];
        }
        CHECK((d < r) == shares);
      }
    }
  }
  CHECK(resolved > total * 9 / 10);
}

TEST_CASE("delta_n rectangles have comparable sides") {
  for (const CarpetSystem& carpet : {testsys::bm_carpet(), testsys::moebius_carpet()}) {
    const double c = carpet.distortion_c();
    for (int n = 1; n <= 5; ++n) {
      const double r = std::ldexp(1.0, -n);
      const double floor = c * carpet.rmin() * r * (1 - 1e-8);
      for (const auto& q : enumerate_delta_n(carpet, n)) {
        const double wx = word_image(carpet.x_ifs().maps(), q.x_word).length();
        const double wy = word_image(carpet.y_ifs().maps(), q.y_word).length();
        CHECK(wx <= r);
        CHECK(wy <= r);
        CHECK(wx >= floor);
        CHECK(wy >= floor);
      }
    }
  }
}

TEST_CASE("holder_constants") {
  const HolderConstants h = holder_constants(testsys::bm_carpet(), 2);
  CHECK(h.C == 0.0);
  CHECK(h.c_n == doctest::Approx(1.0 / 9.0));
  const HolderConstants m = holder_constants(testsys::moebius_carpet(), 2);
  CHECK(m.C == doctest::Approx(6.4919).epsilon(1e-4));
  CHECK(m.c_n == doctest::Approx(1.0 / 256.0));
}

TEST_CASE("transpose swaps the coordinates") {
  const WeightedAlphabet bm = lift_alphabet(testsys::bm_carpet(), 1);
  const WeightedAlphabet t = transpose(bm);
  CHECK(t.a == bm.b);
  CHECK(t.cells[2] == AlphabetCell{2, 1});
  CHECK_THROWS_AS(from_weights(Eigen::Vector2d(0.5, 1.0), Eigen::Vector2d(0.5, 0.5), {{0, 0}}), InputError);
}
