#pragma once

// Dense univariate polynomials with exact-in-practice small coefficients,
// enough to integrate products of the (1 - s^2)^4 bump and its derivatives
// in closed form.

#include <cstddef>
#include <vector>

namespace oracle {

struct Polynomial {
  std::vector<double> c;  // c[k] multiplies s^k

  double operator()(double s) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * s + c[k];
    return v;
  }

  Polynomial derivative() const {
    Polynomial d;
    for (std::size_t k = 1; k < c.size(); ++k) d.c.push_back(static_cast<double>(k) * c[k]);
    if (d.c.empty()) d.c.push_back(0.0);
    return d;
  }

  /// Exact integral over [-1, 1].
  double integral_unit() const {
    double v = 0.0;
    for (std::size_t k = 0; k < c.size(); k += 2) v += 2.0 * c[k] / static_cast<double>(k + 1);
    return v;
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i) {
      for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    }
    return r;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    Polynomial r = a.c.size() >= b.c.size() ? a : b;
    const Polynomial& o = a.c.size() >= b.c.size() ? b : a;
    for (std::size_t i = 0; i < o.c.size(); ++i) r.c[i] += o.c[i];
    return r;
  }

  friend Polynomial operator*(double s, const Polynomial& a) {
    Polynomial r = a;
    for (double& x : r.c) x *= s;
    return r;
  }
};

/// (1 - s^2)^4.
inline Polynomial bump_polynomial() { return Polynomial{{1.0, 0.0, -4.0, 0.0, 6.0, 0.0, -4.0, 0.0, 1.0}}; }

}  // namespace oracle
