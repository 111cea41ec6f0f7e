#include "qdev/temporal/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qdev/errors.hpp"
#include "qdev/numerics/eigen.hpp"
#include "qdev/temporal/forms.hpp"

namespace qdev::temporal {
namespace {

struct MeshSolve {
  std::vector<double> values;
  std::vector<std::vector<double>> nodal;  // full-mesh nodal vectors
  std::vector<double> k_norms;
  double residual = 0.0;
};

MeshSolve solve_on(const FormCoefficients& coeffs, const Mesh1D& mesh, std::size_t m) {
  const auto forms = assemble_forms(coeffs, mesh);
  const auto sol = numerics::solve_sym_generalized_eig(forms.B, forms.K, m);
  MeshSolve out;
  out.values = sol.values;
  out.residual = sol.b_norm_check;
  const std::size_t nodes = mesh.nodes().size();
  for (std::size_t j = 0; j < m; ++j) {
    const auto v = sol.vector(j);
    std::vector<double> w(nodes, 0.0);
    std::copy(v.begin(), v.end(), w.begin() + 1);
    // Sign convention: first nonzero nodal value positive, i.e. w'(0+) > 0.
    const auto first = std::find_if(w.begin(), w.end(), [](double x) { return x != 0.0; });
    if (first != w.end() && *first < 0.0) {
      for (auto& x : w) x = -x;
    }
    std::vector<double> interior(w.begin() + 1, w.end() - 1);
    out.k_norms.push_back(forms.K.form(interior, interior));
    out.nodal.push_back(std::move(w));
  }
  return out;
}

}  // namespace

TemporalSpectrum temporal_spectrum(const FormCoefficients& coeffs, const Mesh1D& mesh,
                                   std::size_t m, const SpectrumOptions& options) {
  if (m > mesh.elements() / 4) {
    throw ArgumentError("temporal_spectrum: m = " + std::to_string(m) + " exceeds N/4 for N = " +
                        std::to_string(mesh.elements()));
  }
  if (m == 0) return TemporalSpectrum{mesh, {}, {}, 0.0, 0.0};

  MeshSolve fine = solve_on(coeffs, options.richardson ? mesh.refined() : mesh, m);
  std::vector<double> values = fine.values;
  if (options.richardson) {
    const MeshSolve coarse = solve_on(coeffs, mesh, m);
    for (std::size_t j = 0; j < m; ++j) {
      values[j] = (4.0 * fine.values[j] - coarse.values[j]) / 3.0;
    }
  }

  if (!(values.front() > 0.0)) {
    throw ConsistencyError("temporal_spectrum: non-positive eigenvalue " +
                           std::to_string(values.front()));
  }
  for (std::size_t j = 0; j + 1 < m; ++j) {
    if (!(values[j + 1] - values[j] > options.simplicity_gap * values[j + 1])) {
      throw SimplicityError("temporal_spectrum: eigenvalues " + std::to_string(j) + " and " +
                            std::to_string(j + 1) + " are not separated");
    }
  }

  double estimate = 0.0;
  try {
    estimate = truncation_error_estimate(coeffs, mesh.t_max(), values.back());
  } catch (const EstimateInvalidError& e) {
    throw TruncationError(std::string("temporal_spectrum: ") + e.what());
  }
  if (estimate > options.truncation_tolerance) {
    throw TruncationError("temporal_spectrum: tail estimate " + std::to_string(estimate) +
                          " exceeds tolerance; increase T_max");
  }

  TemporalSpectrum out{options.richardson ? mesh.refined() : mesh, {}, fine.values, estimate,
                       fine.residual};
  for (std::size_t j = 0; j < m; ++j) {
    out.pairs.push_back({j, values[j], std::move(fine.nodal[j]), fine.k_norms[j]});
  }
  return out;
}

TemporalSpectrum temporal_spectrum(const TemporalProblem& problem, double t_max,
                                   std::size_t elements, std::size_t m,
                                   const SpectrumOptions& options) {
  if (options.richardson) {
    if (elements % 2 != 0) {
      throw ArgumentError("temporal_spectrum: Richardson needs an even element count");
    }
    return temporal_spectrum(problem.forms(), Mesh1D::graded(t_max, elements / 2), m, options);
  }
  return temporal_spectrum(problem.forms(), Mesh1D::graded(t_max, elements), m, options);
}

double default_t_max(const FormCoefficients& coeffs, std::size_t m, double tolerance) {
  if (!(coeffs.potential > 0.0) || !(coeffs.stiffness > 0.0)) {
    throw ArgumentError("default_t_max: confinement requires positive coefficients");
  }
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw ArgumentError("default_t_max: tolerance must lie in (0, 1)");
  }
  const std::size_t modes = std::max<std::size_t>(m, 1);
  const double length = std::pow(coeffs.stiffness / coeffs.potential, 0.25);
  const double decay = std::sqrt(coeffs.potential / coeffs.stiffness);
  const double p = coeffs.weight_exponent;
  double t = 3.0 * length;
  for (int iter = 0; iter < 64; ++iter) {
    const std::size_t elements = std::max<std::size_t>(64, 16 * modes);
    // Coarse conforming solve on a short domain over-estimates every
    // eigenvalue, so the cutoff derived from it is conservative.
    const auto forms = assemble_forms(coeffs, Mesh1D::uniform(t, elements));
    const auto sol = numerics::solve_sym_generalized_eig(forms.B, forms.K, modes);
    const double lambda = sol.values.back();
    const double turning = std::pow(lambda / coeffs.potential, 1.0 / (2.0 - p));
    const double required =
        std::sqrt(turning * turning + 2.0 * std::log(1.0 / tolerance) / decay);
    if (t >= required) return 1.05 * required;
    t = 1.2 * required;
  }
  throw ConsistencyError("default_t_max: cutoff iteration did not settle");
}

std::size_t count_sign_changes(std::span<const double> values) {
  std::size_t changes = 0;
  int last_sign = 0;
  for (double v : values) {
    if (v == 0.0) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++changes;
    last_sign = s;
  }
  if (last_sign == 0) throw ArgumentError("count_sign_changes: all-zero vector");
  return changes;
}

double scaled_eigenvalue(double lambda_unit, double lambda_abs, int n) {
  if (!(lambda_abs > 0.0)) throw ArgumentError("scaled_eigenvalue: |Lambda| must be positive");
  if (n < 1) throw ArgumentError("scaled_eigenvalue: dimension must be positive");
  return std::pow(lambda_abs, 1.0 - 1.0 / n) * lambda_unit;
}

double truncation_error_estimate(const FormCoefficients& coeffs, double t_max,
                                 double lambda_target) {
  if (!(coeffs.potential > 0.0) || !(coeffs.stiffness > 0.0)) {
    throw EstimateInvalidError("truncation estimate: no confining potential");
  }
  if (!(lambda_target >= 0.0)) {
    throw EstimateInvalidError("truncation estimate: negative target eigenvalue");
  }
  const double p = coeffs.weight_exponent;
  const double turning = std::pow(lambda_target / coeffs.potential, 1.0 / (2.0 - p));
  if (!(t_max > turning)) {
    throw EstimateInvalidError("truncation estimate: T_max = " + std::to_string(t_max) +
                               " lies inside the allowed region (turning point " +
                               std::to_string(turning) + ")");
  }
  const double decay = std::sqrt(coeffs.potential / coeffs.stiffness);
  return std::exp(-decay * (t_max * t_max - turning * turning) / 2.0);
}

}  // namespace qdev::temporal
