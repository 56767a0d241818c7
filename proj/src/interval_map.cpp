#include "carpet/interval_map.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "carpet/error.hpp"

namespace carpet {
namespace {

constexpr double kRangeSlack = 1e-12;

void require_unit(double x) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw InputError("point " + std::to_string(x) + " lies outside [0,1]");
  }
}

}  // namespace

IntervalMap::IntervalMap(Kind kind, const Eigen::Matrix2d& coeff) : kind_(kind), coeff_(coeff) {
  if (!coeff_.allFinite()) {
    throw InputError("map coefficients must be finite");
  }
  if (det() == 0.0) {
    throw InputError("degenerate map: zero derivative");
  }
  const double d0 = denom(0.0);
  const double d1 = denom(1.0);
  if (d0 == 0.0 || d1 == 0.0 || (d0 > 0.0) != (d1 > 0.0)) {
    throw InputError("Moebius map has a pole in [0,1]");
  }
  const Interval im = image();
  if (im.lo < -kRangeSlack || im.hi > 1.0 + kRangeSlack) {
    throw InputError("map does not send [0,1] into [0,1] (image [" + std::to_string(im.lo) + ", " +
                     std::to_string(im.hi) + "])");
  }
}

IntervalMap IntervalMap::affine(double slope, double offset) {
  Eigen::Matrix2d m;
  m << slope, offset, 0.0, 1.0;
  return IntervalMap(Kind::Affine, m);
}

IntervalMap IntervalMap::moebius(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return IntervalMap(Kind::Moebius, m);
}

bool IntervalMap::has_constant_deriv() const { return coeff_(1, 0) == 0.0; }

double IntervalMap::operator()(double x) const {
  if (kind_ == Kind::Affine) return coeff_(0, 0) * x + coeff_(0, 1);
  return (coeff_(0, 0) * x + coeff_(0, 1)) / denom(x);
}

double IntervalMap::deriv(double x, int order) const {
  if (kind_ == Kind::Affine) return order == 1 ? coeff_(0, 0) : 0.0;
  const double q = denom(x);
  if (order == 1) return det() / (q * q);
  return -2.0 * coeff_(1, 0) * det() / (q * q * q);
}

Interval IntervalMap::image() const {
  const double y0 = (*this)(0.0);
  const double y1 = (*this)(1.0);
  return {std::min(y0, y1), std::max(y0, y1)};
}

double IntervalMap::sup_abs_deriv() const {
  return std::max(std::abs(deriv(0.0, 1)), std::abs(deriv(1.0, 1)));
}

double IntervalMap::inf_abs_deriv() const {
  return std::min(std::abs(deriv(0.0, 1)), std::abs(deriv(1.0, 1)));
}

double IntervalMap::sup_abs_second_deriv() const {
  return std::max(std::abs(deriv(0.0, 2)), std::abs(deriv(1.0, 2)));
}

double IntervalMap::sup_log_deriv_slope() const {
  if (kind_ == Kind::Affine) return 0.0;
  // f''/f' = -2c / (c x + d)
  const double c2 = 2.0 * std::abs(coeff_(1, 0));
  return std::max(c2 / std::abs(denom(0.0)), c2 / std::abs(denom(1.0)));
}

double eval_map(const IntervalMap& m, double x) {
  require_unit(x);
  return m(x);
}

double deriv(const IntervalMap& m, double x, int order) {
  require_unit(x);
  if (order != 1 && order != 2) throw InputError("derivative order must be 1 or 2");
  return m.deriv(x, order);
}

}  // namespace carpet
