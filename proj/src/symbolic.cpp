#include "carpet/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <string>

#include "carpet/error.hpp"

namespace carpet {
namespace {

// Memoized hi endpoints of sup_deriv_word for one coordinate IFS.
class WeightCache {
 public:
  explicit WeightCache(const CoordinateIFS& ifs) : ifs_(ifs) {}

  double operator()(const Word& w) {
    if (w.empty()) return 1.0;
    auto it = cache_.find(w);
    if (it != cache_.end()) return it->second;
    const double v = ifs_.sup_deriv(w).hi;
    cache_.emplace(w, v);
    return v;
  }

 private:
  const CoordinateIFS& ifs_;
  std::map<Word, double> cache_;
};

// |cells|^n, or nullopt when it exceeds limit.
std::optional<std::size_t> checked_power(std::size_t base, int n, std::size_t limit) {
  std::size_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (base != 0 && r > limit / base) return std::nullopt;
    r *= base;
  }
  return r <= limit ? std::optional<std::size_t>(r) : std::nullopt;
}

void number_in_order(std::map<Word, int>& words) {
  int k = 0;
  for (auto& entry : words) entry.second = k++;
}

}  // namespace

std::size_t dim_cap() {
  if (const char* env = std::getenv("CARPET_DIM_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultDimCap;
}

Eigen::VectorXd WeightedAlphabet::log_a_per_cell() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t c = 0; c < cells.size(); ++c) out(static_cast<Eigen::Index>(c)) = std::log(a(cells[c].col));
  return out;
}

Eigen::VectorXd WeightedAlphabet::log_b_per_cell() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t c = 0; c < cells.size(); ++c) out(static_cast<Eigen::Index>(c)) = std::log(b(cells[c].row));
  return out;
}

WeightedAlphabet from_weights(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              const std::vector<AlphabetCell>& cells) {
  if (cells.empty()) throw InputError("alphabet has no cells");
  auto in_unit = [](double w) { return w > 0.0 && w < 1.0; };
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (!in_unit(a(i))) throw InputError("weight a[" + std::to_string(i) + "] outside (0,1)");
  }
  for (Eigen::Index j = 0; j < b.size(); ++j) {
    if (!in_unit(b(j))) throw InputError("weight b[" + std::to_string(j) + "] outside (0,1)");
  }
  std::set<std::pair<int, int>> seen;
  for (const AlphabetCell& c : cells) {
    if (c.col < 0 || c.col >= a.size() || c.row < 0 || c.row >= b.size()) {
      throw InputError("alphabet cell out of range");
    }
    if (!seen.insert({c.col, c.row}).second) throw InputError("duplicate alphabet cell");
  }
  WeightedAlphabet out;
  out.level = 1;
  out.a = a;
  out.b = b;
  out.cells = cells;
  for (Eigen::Index i = 0; i < a.size(); ++i) out.column_words.push_back({static_cast<int>(i)});
  for (Eigen::Index j = 0; j < b.size(); ++j) out.row_words.push_back({static_cast<int>(j)});
  for (std::size_t c = 0; c < cells.size(); ++c) out.cell_words.push_back({static_cast<int>(c)});
  return out;
}

WeightedAlphabet lift_alphabet(const CarpetSystem& carpet, int n, std::optional<std::size_t> cap) {
  if (n < 1) throw InputError("level must be positive");
  const std::size_t limit = cap.value_or(dim_cap());
  const std::size_t base = carpet.size();
  const auto total = checked_power(base, n, limit);
  if (!total) {
    throw ResourceError("level " + std::to_string(n) + " needs " + std::to_string(base) + "^" + std::to_string(n) +
                        " letters, above the cap " + std::to_string(limit) + " (raise CARPET_DIM_CAP)");
  }

  WeightedAlphabet out;
  out.level = n;
  out.cell_words.reserve(*total);
  std::map<Word, int> cols, rows;
  Word w(static_cast<std::size_t>(n), 0);
  for (std::size_t count = 0; count < *total; ++count) {
    Word xw(w.size()), yw(w.size());
    for (std::size_t k = 0; k < w.size(); ++k) {
      xw[k] = carpet.cells()[static_cast<std::size_t>(w[k])].first;
      yw[k] = carpet.cells()[static_cast<std::size_t>(w[k])].second;
    }
    cols.emplace(xw, 0);
    rows.emplace(yw, 0);
    out.cell_words.push_back(w);
    // odometer, last position fastest
    for (int k = n - 1; k >= 0; --k) {
      if (++w[static_cast<std::size_t>(k)] < static_cast<int>(base)) break;
      w[static_cast<std::size_t>(k)] = 0;
    }
  }
  number_in_order(cols);
  number_in_order(rows);

  out.a.resize(static_cast<Eigen::Index>(cols.size()));
  for (const auto& [word, idx] : cols) {
    out.column_words.push_back(word);
    out.a(idx) = carpet.x_ifs().sup_deriv(word).hi;
  }
  out.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (const auto& [word, idx] : rows) {
    out.row_words.push_back(word);
    out.b(idx) = carpet.y_ifs().sup_deriv(word).hi;
  }

  out.cells.reserve(out.cell_words.size());
  for (const Word& cw : out.cell_words) {
    Word xw(cw.size()), yw(cw.size());
    for (std::size_t k = 0; k < cw.size(); ++k) {
      xw[k] = carpet.cells()[static_cast<std::size_t>(cw[k])].first;
      yw[k] = carpet.cells()[static_cast<std::size_t>(cw[k])].second;
    }
    out.cells.push_back({cols.at(xw), rows.at(yw)});
  }
  return out;
}

WeightedAlphabet transpose(const WeightedAlphabet& alphabet) {
  WeightedAlphabet out = alphabet;
  std::swap(out.column_words, out.row_words);
  std::swap(out.a, out.b);
  for (AlphabetCell& c : out.cells) std::swap(c.col, c.row);
  return out;
}

double metric_distance(std::span<const int> s1, std::span<const int> s2, const WeightedAlphabet& alphabet) {
  const std::size_t len = std::min(s1.size(), s2.size());
  for (std::size_t k = 0; k < std::max(s1.size(), s2.size()); ++k) {
    const int l = k < s1.size() ? s1[k] : s2[k];
    if (l < 0 || static_cast<std::size_t>(l) >= alphabet.size()) throw InputError("letter out of range");
  }
  if (s1.size() == s2.size() && std::equal(s1.begin(), s1.end(), s2.begin())) return 0.0;

  double wx = 1.0, wy = 1.0;
  bool x_open = true, y_open = true;
  for (std::size_t k = 0; k < len; ++k) {
    const AlphabetCell& c1 = alphabet.cells[static_cast<std::size_t>(s1[k])];
    const AlphabetCell& c2 = alphabet.cells[static_cast<std::size_t>(s2[k])];
    if (x_open && c1.col == c2.col) {
      wx *= alphabet.a(c1.col);
    } else {
      x_open = false;
    }
    if (y_open && c1.row == c2.row) {
      wy *= alphabet.b(c1.row);
    } else {
      y_open = false;
    }
  }
  // an open coordinate has only an upper bound on its common-prefix weight
  if (x_open && y_open) throw PrecisionError("truncations agree on their common length");
  if (x_open && wx > wy) throw PrecisionError("column prefix unresolved by the truncation");
  if (y_open && wy > wx) throw PrecisionError("row prefix unresolved by the truncation");
  return std::max(wx, wy);
}

ApproxSquare approx_square_at(const CarpetSystem& carpet, std::span<const int> seq, int n) {
  if (n < 0) throw InputError("scale exponent must be nonnegative");
  const double thr = std::ldexp(1.0, -n);
  ApproxSquare sq;
  sq.n = n;
  Word xw, yw;
  bool x_done = false, y_done = false;
  for (int l : seq) {
    if (l < 0 || static_cast<std::size_t>(l) >= carpet.size()) throw InputError("cell index out of range");
    const CellIndex& cell = carpet.cells()[static_cast<std::size_t>(l)];
    if (!x_done) {
      xw.push_back(cell.first);
      if (carpet.x_ifs().sup_deriv(xw).hi < thr) {
        sq.x_word = xw;
        x_done = true;
      }
    }
    if (!y_done) {
      yw.push_back(cell.second);
      if (carpet.y_ifs().sup_deriv(yw).hi < thr) {
        sq.y_word = yw;
        y_done = true;
      }
    }
    if (x_done && y_done) return sq;
  }
  throw PrecisionError("sequence too short to reach scale 2^-" + std::to_string(n));
}

std::vector<ApproxSquare> enumerate_delta_n(const CarpetSystem& carpet, int n, std::optional<std::size_t> cap) {
  if (n < 0) throw InputError("scale exponent must be nonnegative");
  const std::size_t limit = cap.value_or(dim_cap());
  const double thr = std::ldexp(1.0, -n);
  WeightCache wx(carpet.x_ifs()), wy(carpet.y_ifs());
  const std::vector<int> cols = carpet.nonempty_columns();
  const std::vector<int> rows = carpet.nonempty_rows();
  std::set<ApproxSquare> found;

  Word xw, yw;
  auto visit = [&](auto&& self, bool x_frozen, bool y_frozen) -> void {
    if (x_frozen && y_frozen) {
      found.insert({xw, yw, n});
      if (found.size() > limit) {
        throw ResourceError("more than " + std::to_string(limit) + " approximate squares at scale " +
                            std::to_string(n) + "; use a smaller scale or raise CARPET_DIM_CAP");
      }
      return;
    }
    if (!x_frozen && !y_frozen) {
      for (const auto& [i, j] : carpet.cells()) {
        xw.push_back(i);
        yw.push_back(j);
        self(self, wx(xw) < thr, wy(yw) < thr);
        xw.pop_back();
        yw.pop_back();
      }
    } else if (x_frozen) {
      for (int j : rows) {
        yw.push_back(j);
        self(self, true, wy(yw) < thr);
        yw.pop_back();
      }
    } else {
      for (int i : cols) {
        xw.push_back(i);
        self(self, wx(xw) < thr, true);
        xw.pop_back();
      }
    }
  };
  visit(visit, false, false);
  return {found.begin(), found.end()};
}

HolderConstants holder_constants(const CarpetSystem& carpet, int n) {
  HolderConstants h;
  const double c = carpet.distortion_c();
  h.C = c >= 1.0 ? 0.0 : std::log(c) / std::log(carpet.rmax());
  h.c_n = std::pow(carpet.rmin(), n);
  return h;
}

}  // namespace carpet
