#pragma once

#include <array>
#include <utility>

#include "qdev/numerics/sym_matrix.hpp"
#include "qdev/temporal/problem.hpp"

namespace qdev::temporal {

/// 2x2 element matrices for the two hat functions of [t_a, t_b]
/// (row-major: aa, ab, ba, bb).
struct ElementForms {
  std::array<double, 4> b;
  std::array<double, 4> k;
};

ElementForms element_forms(const FormCoefficients& coeffs, double t_a, double t_b);

/// Assembled pencil on the interior nodes 1..N-1 of the mesh; the Dirichlet
/// rows at t = 0 and t = T_max are eliminated. Both matrices are tridiagonal.
struct AssembledForms {
  numerics::SymMatrix B;
  numerics::SymMatrix K;
};

AssembledForms assemble_forms(const FormCoefficients& coeffs, const Mesh1D& mesh);
inline AssembledForms assemble_forms(const TemporalProblem& problem, const Mesh1D& mesh) {
  return assemble_forms(problem.forms(), mesh);
}

}  // namespace qdev::temporal
