#pragma once

// Reference s-wave solution of -v'' - (n-1)/r v' + V v = k^2 v, v(0) = 1,
// started from the two-term series at a tiny radius and integrated with a
// tightly controlled Runge-Kutta-Fehlberg 7(8) pair.

#include <array>
#include <functional>
#include <vector>

#include <boost/numeric/odeint.hpp>

namespace oracle {

/// Values of v at the requested ascending radii (all > 1e-6).
inline std::vector<double> radial_solution(int n, double k, const std::function<double(double)>& V,
                                           const std::vector<double>& radii) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  const double r0 = 1e-6;
  const double c2 = (V(0.0) - k * k) / (2.0 * n);
  State y{1.0 + c2 * r0 * r0, 2.0 * c2 * r0};
  auto rhs = [&](const State& s, State& ds, double r) {
    ds[0] = s[1];
    ds[1] = -(n - 1) / r * s[1] + (V(r) - k * k) * s[0];
  };
  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_fehlberg78<State>());
  std::vector<double> out;
  double r = r0;
  for (double target : radii) {
    odeint::integrate_adaptive(stepper, rhs, y, r, target, 1e-4);
    r = target;
    out.push_back(y[0]);
  }
  return out;
}

}  // namespace oracle
