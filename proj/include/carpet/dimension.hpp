#ifndef CARPET_DIMENSION_HPP
#define CARPET_DIMENSION_HPP

#include <optional>
#include <string>
#include <vector>

#include "carpet/baranski.hpp"

namespace carpet {

struct TnResult {
  int n = 1;
  double value = 0.0;  // g at the returned witness, a lower bound for t_n
  Eigen::VectorXd p;
  Branch branch = Branch::V;
  MaximizeCertificate certificate;
  std::size_t letters = 0;
};

/// t_n = max over probability vectors on the level-n alphabet of g.
TnResult t_n(const CarpetSystem& carpet, int n, const MaximizeOptions& opts = {},
             std::optional<std::size_t> cap = std::nullopt);

struct LevelRecord {
  int n = 1;
  double t_hat = 0.0;
  double certified_lower = 0.0;  // t_hat / (1 + C/n)
  Branch branch = Branch::V;
  std::string witness_digest;
  MaximizeCertificate certificate;
  std::size_t letters = 0;
};

/// Hausdorff dimension enclosure over levels 1..n_max.
///
/// certified_lower is max over n of t_hat / (1 + C/n); heuristic_upper is
/// min over n of t_hat and is only as good as the optimizer.
struct DimensionReport {
  std::vector<LevelRecord> levels;
  double C = 0.0;
  double c = 1.0;
  double certified_lower = 0.0;
  double heuristic_upper = 0.0;
  bool upper_is_heuristic = true;
  std::vector<std::string> flags;

  double width() const { return heuristic_upper - certified_lower; }
};

/// Largest n with |cells|^n <= cap, clamped to [1, 12].
int default_n_max(const CarpetSystem& carpet, std::optional<std::size_t> cap = std::nullopt);

/// Runs t_n for n = 1..n_max. Throws ValidationError when the coordinate OSC
/// fails.
DimensionReport dim_report(const CarpetSystem& carpet, int n_max, const MaximizeOptions& opts = {},
                           std::optional<std::size_t> cap = std::nullopt);

struct BoxCountResult {
  int n_lo = 0;
  int n_hi = 0;
  std::vector<std::size_t> counts;  // #Delta_n for n = n_lo..n_hi
  double slope = 0.0;               // least-squares slope of log2 count against n
};

BoxCountResult box_count_estimate(const CarpetSystem& carpet, int n_lo, int n_hi,
                                  std::optional<std::size_t> cap = std::nullopt);

}  // namespace carpet

#endif  // CARPET_DIMENSION_HPP
