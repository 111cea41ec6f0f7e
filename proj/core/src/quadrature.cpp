#include "qdev/numerics/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "qdev/errors.hpp"

namespace qdev::numerics {

GaussRule gauss_legendre(int order) {
  if (order < 1) throw ArgumentError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  const auto n = static_cast<std::size_t>(order);
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

namespace {

double apply_rule(const GaussRule& rule, const std::function<double(double)>& f, double lo,
                  double hi, double p) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double t = mid + half * rule.nodes[i];
    s += rule.weights[i] * f(t) * std::pow(t, p);
  }
  return s * half;
}

bool is_nonnegative_integer(double p) { return p >= 0.0 && std::floor(p) == p; }

}  // namespace

double integrate_weighted(const std::function<double(double)>& f, double lo, double hi,
                          double weight_exponent, int order) {
  if (!(lo >= 0.0)) throw ArgumentError("integrate_weighted: lo must be >= 0");
  if (!(hi > lo)) throw ArgumentError("integrate_weighted: reversed or empty interval");
  if (order < 2) throw ArgumentError("integrate_weighted: order must be >= 2");
  const GaussRule rule = gauss_legendre(order);
  if (is_nonnegative_integer(weight_exponent) || lo >= hi - lo) {
    return apply_rule(rule, f, lo, hi, weight_exponent);
  }
  // Pieces [hi/2^(l+1), hi/2^l] for l < kGradingLevels, stopping at lo; the
  // remainder next to lo is one more piece. Summed from small to large.
  double pieces[kGradingLevels + 1];
  int count = 0;
  double upper = hi;
  for (int l = 0; l < kGradingLevels; ++l) {
    const double lower = 0.5 * upper;
    if (lower <= lo) break;
    pieces[count++] = apply_rule(rule, f, lower, upper, weight_exponent);
    upper = lower;
  }
  double sum = apply_rule(rule, f, lo, upper, weight_exponent);
  for (int i = count - 1; i >= 0; --i) sum += pieces[i];
  return sum;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ArgumentError("loglog_slope: need at least two matching samples");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw ArgumentError("loglog_slope: samples must be positive");
    }
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw ArgumentError("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / denom;
}

}  // namespace qdev::numerics
