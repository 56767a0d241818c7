#ifndef CARPET_INTERVAL_MAP_HPP
#define CARPET_INTERVAL_MAP_HPP

#include <Eigen/Dense>

namespace carpet {

/// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

/// A conformal map of [0,1] into itself: either affine x -> s*x + o or a
/// Moebius transformation x -> (a*x + b) / (c*x + d).
///
/// Both kinds are C-infinity with closed-form derivatives, and |f'| is monotone
/// on [0,1] (the denominator c*x + d is linear and nonvanishing), so every
/// extremum of |f'| and |f''| sits at an endpoint. Construction validates that
/// the map is defined on [0,1], is nondegenerate and maps [0,1] into [0,1].
class IntervalMap {
 public:
  enum class Kind { Affine, Moebius };

  static IntervalMap affine(double slope, double offset);
  static IntervalMap moebius(double a, double b, double c, double d);

  Kind kind() const { return kind_; }
  bool is_affine() const { return kind_ == Kind::Affine; }
  /// True for affine maps and Moebius maps with c == 0.
  bool has_constant_deriv() const;

  double slope() const { return coeff_(0, 0); }
  double offset() const { return coeff_(0, 1); }

  /// Coefficients as the 2x2 matrix [[a, b], [c, d]]; affine maps are
  /// [[s, o], [0, 1]]. Composition of maps is the matrix product.
  const Eigen::Matrix2d& matrix() const { return coeff_; }

  double operator()(double x) const;
  /// order 1 or 2.
  double deriv(double x, int order = 1) const;

  Interval image() const;

  double sup_abs_deriv() const;
  double inf_abs_deriv() const;
  double sup_abs_second_deriv() const;
  /// sup over [0,1] of |f''/f'|, the Lipschitz constant of log|f'|.
  double sup_log_deriv_slope() const;

  bool operator==(const IntervalMap&) const = default;

 private:
  IntervalMap(Kind kind, const Eigen::Matrix2d& coeff);

  double det() const { return coeff_.determinant(); }
  double denom(double x) const { return coeff_(1, 0) * x + coeff_(1, 1); }

  Kind kind_;
  Eigen::Matrix2d coeff_;
};

/// Evaluates m at x; throws InputError when x is outside [0,1].
double eval_map(const IntervalMap& m, double x);

/// First or second derivative of m at x; throws InputError on a domain
/// violation or an order other than 1 or 2.
double deriv(const IntervalMap& m, double x, int order);

}  // namespace carpet

#endif  // CARPET_INTERVAL_MAP_HPP
