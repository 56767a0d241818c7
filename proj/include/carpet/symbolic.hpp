#ifndef CARPET_SYMBOLIC_HPP
#define CARPET_SYMBOLIC_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "carpet/conformal_ifs.hpp"

namespace carpet {

inline constexpr std::size_t kDefaultDimCap = 200000;

/// Alphabet size cap: CARPET_DIM_CAP when set to a positive integer, else
/// kDefaultDimCap.
std::size_t dim_cap();

/// A letter of a weighted alphabet: its column (index into column_words / a)
/// and row (index into row_words / b).
struct AlphabetCell {
  int col = 0;
  int row = 0;

  bool operator==(const AlphabetCell&) const = default;
};

/// Level-n alphabet with weight vectors a (per distinct x-word) and b (per
/// distinct y-word).
///
/// At level n each letter is an admissible word of n carpet cells; its
/// x-word and y-word are the coordinate projections. Column and row words are
/// sorted lexicographically, letters are in lexicographic order of their cell
/// words.
struct WeightedAlphabet {
  int level = 1;
  std::vector<Word> column_words;
  std::vector<Word> row_words;
  Eigen::VectorXd a;
  Eigen::VectorXd b;
  std::vector<AlphabetCell> cells;
  std::vector<Word> cell_words;  // each a word over carpet cell indices

  std::size_t size() const { return cells.size(); }
  int num_columns() const { return static_cast<int>(a.size()); }
  int num_rows() const { return static_cast<int>(b.size()); }

  /// Per-letter log a(col) and log b(row).
  Eigen::VectorXd log_a_per_cell() const;
  Eigen::VectorXd log_b_per_cell() const;
};

/// Alphabet with level-1 weights given directly; column i has x-word {i} and
/// row j has y-word {j}. Throws InputError on weights outside (0,1), empty or
/// duplicate cells and out-of-range indices.
WeightedAlphabet from_weights(const Eigen::VectorXd& a, const Eigen::VectorXd& b,
                              const std::vector<AlphabetCell>& cells);

/// Lifts the carpet to level n: all admissible length-n cell words with the
/// hi endpoint of sup_deriv_word as weight. Throws ResourceError when |cells|^n
/// exceeds the cap (default dim_cap()).
WeightedAlphabet lift_alphabet(const CarpetSystem& carpet, int n, std::optional<std::size_t> cap = std::nullopt);

/// Swaps the roles of the coordinates.
WeightedAlphabet transpose(const WeightedAlphabet& alphabet);

/// Symbolic metric d[a,b] between two sequences of alphabet letters:
/// max(a-weight of the common column prefix, b-weight of the common row
/// prefix), with multiplicative weights and weight 1 for the empty prefix.
///
/// Sequences are truncations. Returns 0 for identical sequences. Throws
/// PrecisionError when one coordinate agrees along the whole common length
/// and the other coordinate's weight does not dominate that bound.
double metric_distance(std::span<const int> s1, std::span<const int> s2, const WeightedAlphabet& alphabet);

/// Symbolic approximate square: coordinate words cut where their norms first
/// drop strictly below 2^-n.
struct ApproxSquare {
  Word x_word;
  Word y_word;
  int n = 0;

  bool operator==(const ApproxSquare&) const = default;
  auto operator<=>(const ApproxSquare&) const = default;
};

/// Approximate square of level n containing the sequence of carpet cell
/// indices seq. Throws PrecisionError when seq is too short.
ApproxSquare approx_square_at(const CarpetSystem& carpet, std::span<const int> seq, int n);

/// All level-n approximate squares, sorted lexicographically. Throws
/// ResourceError when more than cap squares arise.
std::vector<ApproxSquare> enumerate_delta_n(const CarpetSystem& carpet, int n,
                                            std::optional<std::size_t> cap = std::nullopt);

struct HolderConstants {
  double c_n = 1.0;
  double C = 0.0;
};

/// C = log c / log rmax and c_n = rmin^n, with c the shared distortion
/// constant and rmax, rmin over both coordinates.
HolderConstants holder_constants(const CarpetSystem& carpet, int n);

}  // namespace carpet

#endif  // CARPET_SYMBOLIC_HPP
