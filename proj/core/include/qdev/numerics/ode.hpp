#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

#include "qdev/errors.hpp"

namespace qdev::numerics {

struct StepControl {
  double rtol = 1e-12;
  double atol = 1e-14;
  double initial_step = 1e-3;
  std::size_t max_steps = 10'000'000;
};

/// Adaptive Dormand-Prince 5(4) integrator for small autonomous-in-form
/// systems y' = f(x, y). The step size carries over between calls so a
/// trajectory can be advanced node by node.
template <std::size_t N>
class DormandPrince {
 public:
  using State = std::array<double, N>;

  explicit DormandPrince(StepControl control = {}) : control_(control), h_(control.initial_step) {}

  /// Advances y from x0 to x1 (x1 > x0) and returns the number of accepted steps.
  template <class Rhs>
  std::size_t advance(Rhs&& f, double x0, double x1, State& y) {
    if (!(x1 > x0)) throw ArgumentError("DormandPrince: x1 must exceed x0");
    double x = x0;
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    while (x < x1) {
      if (++attempts > control_.max_steps) {
        throw ConsistencyError("DormandPrince: step budget exhausted");
      }
      const bool last = x + h_ >= x1;
      const double h = last ? x1 - x : h_;
      State y5, err;
      step(f, x, y, h, y5, err);
      double err_norm = 0.0;
      for (std::size_t i = 0; i < N; ++i) {
        const double sc = control_.atol + control_.rtol * std::max(std::abs(y[i]), std::abs(y5[i]));
        err_norm = std::max(err_norm, std::abs(err[i]) / sc);
      }
      if (!std::isfinite(err_norm)) throw ConsistencyError("DormandPrince: non-finite state");
      const double factor =
          err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      if (err_norm <= 1.0) {
        x = last ? x1 : x + h;
        y = y5;
        ++accepted;
        // Do not let a short final step shrink the carried step size.
        if (!last) h_ = h * factor;
      } else {
        h_ = h * factor;
        if (h_ < 1e-14 * std::max(1.0, std::abs(x))) {
          throw ConsistencyError("DormandPrince: step size underflow");
        }
      }
    }
    return accepted;
  }

 private:
  template <class Rhs>
  static void step(Rhs& f, double x, const State& y, double h, State& y5, State& err) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                     b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    State k1, k2, k3, k4, k5, k6, k7, t;
    k1 = f(x, y);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * a21 * k1[i];
    k2 = f(x + c2 * h, t);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    k3 = f(x + c3 * h, t);
    for (std::size_t i = 0; i < N; ++i) t[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    k4 = f(x + c4 * h, t);
    for (std::size_t i = 0; i < N; ++i) {
      t[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    }
    k5 = f(x + c5 * h, t);
    for (std::size_t i = 0; i < N; ++i) {
      t[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    }
    k6 = f(x + h, t);
    for (std::size_t i = 0; i < N; ++i) {
      y5[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
    }
    k7 = f(x + h, y5);
    for (std::size_t i = 0; i < N; ++i) {
      err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
  }

  StepControl control_;
  double h_;
};

}  // namespace qdev::numerics
