#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace qdev::temporal {

/// Coefficients of the pencil
///   B(w, u) = int stiffness w'u' + potential t^2 w u,   K(w, u) = int t^weight_exponent w u
/// on (0, T]. Both the physical problem and the oscillator calibration preset
/// reduce to this triple.
struct FormCoefficients {
  double stiffness = 1.0;
  double potential = 1.0;
  double weight_exponent = 0.0;
};

/// -w'' + t^2 w = lambda w with w(0) = 0: odd half-line oscillator, lambda_k = 4k + 3.
inline constexpr FormCoefficients kCalibrationPreset{1.0, 1.0, 0.0};

/// Temporal eigenproblem for spatial dimension n and cosmological constant
/// magnitude |Lambda|:
///   -a w'' + n|Lambda| t^2 w = lambda t^p w,  a = n^2 / (32 (n - 1)),  p = 2 - 4/n.
///
/// With Lambda = -|Lambda| the implicit equation obtained by separating the
/// wave equation, -a w'' - mu t^p w - n t^2 Lambda w = 0, is this same problem
/// with mu = lambda, so one solver serves both readings.
class TemporalProblem {
 public:
  /// Throws ArgumentError unless n >= 3 and lambda_abs > 0.
  TemporalProblem(int n, double lambda_abs);

  int dimension() const { return n_; }
  double lambda_abs() const { return lambda_abs_; }
  double stiffness() const { return a_; }
  double weight_exponent() const { return p_; }
  double potential() const { return n_ * lambda_abs_; }

  FormCoefficients forms() const { return {a_, potential(), p_}; }

 private:
  int n_;
  double lambda_abs_;
  double a_;
  double p_;
};

/// Nodes of a 1-D mesh on [0, T_max], first node exactly 0.
class Mesh1D {
 public:
  static constexpr std::size_t kMinElements = 16;
  /// Narrowest graded element relative to the uniform tail spacing.
  static constexpr double kMinGradedWidth = 1e-4;

  /// Validates: strictly increasing, first node 0, at least 16 elements.
  explicit Mesh1D(std::vector<double> nodes);

  /// Uniform tail with `graded_fraction` of the elements geometrically
  /// shrinking toward 0 by `ratio` per element, capped so that no element is
  /// narrower than kMinGradedWidth times the tail spacing. ratio 1 or
  /// fraction 0 gives a uniform mesh.
  static Mesh1D graded(double t_max, std::size_t elements, double ratio = 1.1,
                       double graded_fraction = 0.1);
  static Mesh1D uniform(double t_max, std::size_t elements);

  /// Every element bisected; the result is nested in this mesh.
  Mesh1D refined() const;
  /// Nodes multiplied by factor (change of variables t -> factor * t).
  Mesh1D scaled(double factor) const;

  std::span<const double> nodes() const { return nodes_; }
  std::size_t elements() const { return nodes_.size() - 1; }
  double t_max() const { return nodes_.back(); }

 private:
  std::vector<double> nodes_;
};

}  // namespace qdev::temporal
