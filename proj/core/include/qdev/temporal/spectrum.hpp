#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qdev/temporal/problem.hpp"

namespace qdev::temporal {

/// One temporal eigenpair (w_i, lambda_i).
struct GeneralizedEigenpair {
  std::size_t index = 0;
  double eigenvalue = 0.0;
  /// Nodal values on the full mesh, including the zero boundary values at
  /// t = 0 and t = T_max.
  std::vector<double> coefficients;
  /// K(w_i, w_i) with the assembled K; 1 up to round-off.
  double k_norm = 0.0;
};

struct SpectrumOptions {
  /// Largest acceptable tail estimate for the top requested eigenvalue.
  double truncation_tolerance = 1e-10;
  /// Relative eigengap below which simplicity is reported violated.
  double simplicity_gap = 1e-9;
  /// Solve on the mesh and on its refinement, extrapolate eigenvalues as
  /// (4 lambda_fine - lambda_coarse) / 3 and return the fine eigenvectors.
  bool richardson = false;
};

struct TemporalSpectrum {
  Mesh1D mesh;  // mesh carrying the returned coefficients
  std::vector<GeneralizedEigenpair> pairs;
  /// Unextrapolated eigenvalues on `mesh` (equal to pairs' values unless
  /// Richardson extrapolation was requested).
  std::vector<double> raw_eigenvalues;
  double truncation_estimate = 0.0;
  double max_pair_residual = 0.0;
};

/// The m smallest eigenpairs on the given mesh, K-orthonormal, positive,
/// strictly ascending and sign-normalized (first nonzero nodal value > 0).
///
/// Throws ArgumentError when m > N/4, TruncationError when the tail estimate
/// for lambda_{m-1} exceeds the tolerance, SimplicityError when two
/// eigenvalues are closer than the gap, ConsistencyError for a non-positive
/// eigenvalue.
TemporalSpectrum temporal_spectrum(const FormCoefficients& coeffs, const Mesh1D& mesh,
                                   std::size_t m, const SpectrumOptions& options = {});

/// Default graded mesh of N elements on (0, T_max]. With Richardson enabled
/// the mesh is the refinement of an N/2-element graded mesh.
TemporalSpectrum temporal_spectrum(const TemporalProblem& problem, double t_max,
                                   std::size_t elements, std::size_t m,
                                   const SpectrumOptions& options = {});

/// Cutoff T_max whose tail estimate for the m-th eigenvalue is below tolerance.
double default_t_max(const FormCoefficients& coeffs, std::size_t m, double tolerance = 1e-10);

/// Strict sign changes of the nodal sequence, skipping zeros (so the
/// boundary zeros never count). Throws ArgumentError for an all-zero vector.
std::size_t count_sign_changes(std::span<const double> values);
inline std::size_t count_sign_changes(const GeneralizedEigenpair& pair) {
  return count_sign_changes(pair.coefficients);
}

/// Eigenvalue at |Lambda| = lambda_abs from the |Lambda| = 1 eigenvalue:
/// the substitution tau = |Lambda|^(1/4) t maps one problem onto the other
/// with factor |Lambda|^(1 - 1/n).
double scaled_eigenvalue(double lambda_unit, double lambda_abs, int n);

/// Gaussian tail bound exp(-sqrt(c/a) (T^2 - t*^2) / 2) for the
/// eigenfunction with eigenvalue lambda_target, where c t*^2 = lambda t*^p
/// defines the turning point. Throws EstimateInvalidError if T_max <= t*.
double truncation_error_estimate(const FormCoefficients& coeffs, double t_max,
                                 double lambda_target);
inline double truncation_error_estimate(const TemporalProblem& problem, double t_max,
                                        double lambda_target) {
  return truncation_error_estimate(problem.forms(), t_max, lambda_target);
}

}  // namespace qdev::temporal
