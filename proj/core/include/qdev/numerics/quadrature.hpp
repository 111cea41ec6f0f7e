#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qdev::numerics {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Computes the rule by Newton iteration on P_order. Requires order >= 1.
GaussRule gauss_legendre(int order);

/// Levels of geometric halving toward a singular endpoint, and the order
/// used on each piece.
inline constexpr int kGradingLevels = 20;
inline constexpr int kGradedOrder = 8;

/// Integral of f(t) * t^weight_exponent over [lo, hi].
///
/// For a non-negative integer exponent a single Gauss rule of the given order
/// is used, exact for polynomial integrands of degree <= 2*order - 1. For a
/// non-integer exponent on an interval close to the origin (lo < hi - lo) the
/// interval is split geometrically toward lo (ratio 1/2, 20 levels) and each
/// piece gets its own rule. Throws ArgumentError for lo < 0, hi <= lo or
/// order < 2.
double integrate_weighted(const std::function<double(double)>& f, double lo, double hi,
                          double weight_exponent, int order);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace qdev::numerics
