#ifndef CARPET_CONFORMAL_IFS_HPP
#define CARPET_CONFORMAL_IFS_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "carpet/interval_map.hpp"

namespace carpet {

/// A finite word over a map alphabet. The word w = (w_0, ..., w_{m-1}) denotes
/// the composition f_{w_0} o f_{w_1} o ... o f_{w_{m-1}}.
using Word = std::vector<int>;

/// Enclosure lo <= value <= hi of a derivative norm.
struct NormEnclosure {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
};

inline constexpr double kDefaultEnclosureTol = 1e-9;

/// Encloses ||f_w'|| = sup over [0,1] of |f_w'| with hi / lo <= 1 + tol.
///
/// Words whose letters all have constant derivative get the exact product of
/// slopes (lo == hi). Otherwise log|f_w'| is sampled on a 64-cell grid and
/// cells are bisected left to right while the Lipschitz bound on log|f_w'|
/// allows a value above best * (1 + tol). Once certified, hi is normalized to
/// lo * (1 + tol), which makes enclosures of concatenated words compare
/// consistently (hi(uv) <= hi(u) hi(v)).
NormEnclosure sup_deriv_word(std::span<const IntervalMap> maps, std::span<const int> word,
                             double tol = kDefaultEnclosureTol);

/// Encloses inf over [0,1] of |f_w'|, same method mirrored; lo = hi / (1 + tol).
NormEnclosure inf_deriv_word(std::span<const IntervalMap> maps, std::span<const int> word,
                             double tol = kDefaultEnclosureTol);

/// Upper bound on the Lipschitz constant of log|f_w'| on [0,1].
double log_deriv_lipschitz(std::span<const IntervalMap> maps, std::span<const int> word);

/// f_w(x) for a word; x must lie in [0,1].
double eval_word(std::span<const IntervalMap> maps, std::span<const int> word, double x);

/// f_w([0,1]).
Interval word_image(std::span<const IntervalMap> maps, std::span<const int> word);

struct ContractionResult {
  double rmin = 0.0;
  double rmax = 0.0;
  bool ok = false;
  int offending_map = -1;  // first map with sup |f'| >= 1
};

/// rmin = min inf |f_i'|, rmax = max sup |f_i'| (upper enclosure endpoint).
ContractionResult check_contraction(std::span<const IntervalMap> maps);

struct OscResult {
  bool pass = true;
  int first = -1;
  int second = -1;
  Interval overlap;
  std::string message;
};

/// Open set condition with U = (0,1): images of [0,1] must lie in [0,1] and
/// have pairwise disjoint interiors.
OscResult check_osc(std::span<const IntervalMap> maps);

/// exp(-K / (1 - rmax)) with K = max_i sup|f_i''| / inf|f_i'|.
/// Throws ValidationError when rmax >= 1.
double distortion_constant(std::span<const IntervalMap> maps);

/// Convex hull of the attractor, by iterating J -> hull(U f_i(J)) from [0,1].
Interval attractor_hull(std::span<const IntervalMap> maps);

/// A uniformly contracting IFS on [0,1].
class CoordinateIFS {
 public:
  /// Throws ValidationError (naming the map) if some map is not a contraction
  /// and InputError if maps is empty.
  explicit CoordinateIFS(std::vector<IntervalMap> maps);

  const std::vector<IntervalMap>& maps() const { return maps_; }
  std::size_t size() const { return maps_.size(); }
  double rmin() const { return rmin_; }
  double rmax() const { return rmax_; }
  double distortion_c() const { return distortion_c_; }

  NormEnclosure sup_deriv(std::span<const int> word, double tol = kDefaultEnclosureTol) const {
    return sup_deriv_word(maps_, word, tol);
  }

 private:
  std::vector<IntervalMap> maps_;
  double rmin_ = 0.0;
  double rmax_ = 0.0;
  double distortion_c_ = 1.0;
};

/// Overload forwarding to the span version.
inline NormEnclosure sup_deriv_word(const CoordinateIFS& ifs, std::span<const int> word,
                                    double tol = kDefaultEnclosureTol) {
  return ifs.sup_deriv(word, tol);
}
inline double distortion_constant(const CoordinateIFS& ifs) { return ifs.distortion_c(); }
inline OscResult check_osc(const CoordinateIFS& ifs) { return check_osc(ifs.maps()); }

/// Index pair (column i in the x alphabet, row j in the y alphabet).
using CellIndex = std::pair<int, int>;

/// Planar IFS (f_i, g_j) for (i, j) in a cell set.
class CarpetSystem {
 public:
  /// Throws InputError on empty or out-of-range cells and on duplicate cells.
  /// The shared distortion constant is min of the coordinate constants unless
  /// an override in (0, 1] is supplied.
  CarpetSystem(CoordinateIFS x_ifs, CoordinateIFS y_ifs, std::vector<CellIndex> cells,
               std::optional<double> distortion_override = std::nullopt);

  const CoordinateIFS& x_ifs() const { return x_; }
  const CoordinateIFS& y_ifs() const { return y_; }
  const std::vector<CellIndex>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  double distortion_c() const { return c_; }
  std::optional<double> distortion_override() const { return override_; }
  double rmin() const;
  double rmax() const;

  /// Sorted distinct x (resp. y) letters that occur in some cell.
  std::vector<int> nonempty_columns() const;
  std::vector<int> nonempty_rows() const;

  /// Runs the coordinate OSC on both sides; throws ValidationError naming the
  /// coordinate and maps on failure.
  void validate() const;

 private:
  CoordinateIFS x_;
  CoordinateIFS y_;
  std::vector<CellIndex> cells_;
  std::optional<double> override_;
  double c_ = 1.0;
};

}  // namespace carpet

#endif  // CARPET_CONFORMAL_IFS_HPP
