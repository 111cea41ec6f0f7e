#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qdev/numerics/sym_matrix.hpp"

namespace qdev::numerics {

/// The m smallest eigenpairs of a symmetric-definite pencil B v = lambda K v.
struct EigSolution {
  std::size_t order = 0;
  std::vector<double> values;   // ascending
  std::vector<double> vectors;  // column-major, order x values.size()
  /// Largest normalized residual |Bv - lambda Kv| / (|Bv| + |lambda||Kv|).
  double b_norm_check = 0.0;

  std::size_t count() const { return values.size(); }
  std::span<const double> vector(std::size_t i) const {
    return {vectors.data() + i * order, order};
  }
  std::span<double> vector(std::size_t i) { return {vectors.data() + i * order, order}; }
};

enum class EigMethod {
  automatic,    // tridiagonal path when both matrices have bandwidth <= 1
  dense,        // Cholesky reduction of K + symmetric QR
  tridiagonal,  // Sturm-count bisection + inverse iteration
};

/// Largest order accepted by the dense path.
inline constexpr std::size_t kMaxDenseOrder = 4096;

/// Solves B v = lambda K v for the m smallest eigenvalues.
///
/// B must be positive definite and K positive definite. Returned vectors are
/// K-orthonormal. Output is a deterministic function of the input.
/// Throws DefinitenessError when a Cholesky factorization fails and
/// ArgumentError for m > order or mismatched orders.
EigSolution solve_sym_generalized_eig(const SymMatrix& B, const SymMatrix& K, std::size_t m,
                                      EigMethod method = EigMethod::automatic);

/// Normalized residual of one pair, as reported in EigSolution::b_norm_check.
double pair_residual(const SymMatrix& B, const SymMatrix& K, double lambda,
                     std::span<const double> v);

/// Number of eigenvalues of the tridiagonal pencil strictly below sigma
/// (Sylvester inertia of B - sigma K). Both matrices must be tridiagonal.
std::size_t sturm_count(const SymMatrix& B, const SymMatrix& K, double sigma);

}  // namespace qdev::numerics
