#include "qdev/temporal/forms.hpp"

#include "qdev/errors.hpp"
#include "qdev/numerics/quadrature.hpp"

namespace qdev::temporal {

ElementForms element_forms(const FormCoefficients& coeffs, double t_a, double t_b) {
  const double h = t_b - t_a;
  auto phi_a = [=](double t) { return (t_b - t) / h; };
  auto phi_b = [=](double t) { return (t - t_a) / h; };
  using numerics::integrate_weighted;
  using numerics::kGradedOrder;

  ElementForms out{};
  const double stiff = coeffs.stiffness / h;
  const double paa = integrate_weighted([&](double t) { return phi_a(t) * phi_a(t); }, t_a, t_b, 2.0, kGradedOrder);
  const double pab = integrate_weighted([&](double t) { return phi_a(t) * phi_b(t); }, t_a, t_b, 2.0, kGradedOrder);
  const double pbb = integrate_weighted([&](double t) { return phi_b(t) * phi_b(t); }, t_a, t_b, 2.0, kGradedOrder);
  out.b = {stiff + coeffs.potential * paa, -stiff + coeffs.potential * pab,
           -stiff + coeffs.potential * pab, stiff + coeffs.potential * pbb};

  const double p = coeffs.weight_exponent;
  const double kaa = integrate_weighted([&](double t) { return phi_a(t) * phi_a(t); }, t_a, t_b, p, kGradedOrder);
  const double kab = integrate_weighted([&](double t) { return phi_a(t) * phi_b(t); }, t_a, t_b, p, kGradedOrder);
  const double kbb = integrate_weighted([&](double t) { return phi_b(t) * phi_b(t); }, t_a, t_b, p, kGradedOrder);
  out.k = {kaa, kab, kab, kbb};
  return out;
}

AssembledForms assemble_forms(const FormCoefficients& coeffs, const Mesh1D& mesh) {
  if (!(coeffs.stiffness > 0.0) || !(coeffs.potential >= 0.0)) {
    throw ArgumentError("assemble_forms: stiffness must be positive, potential non-negative");
  }
  const auto nodes = mesh.nodes();
  const std::size_t elements = mesh.elements();
  const std::size_t unknowns = elements - 1;
  AssembledForms out{numerics::SymMatrix::banded(unknowns, 1),
                     numerics::SymMatrix::banded(unknowns, 1)};
  // Global node g maps to unknown g - 1; nodes 0 and N are Dirichlet.
  for (std::size_t e = 0; e < elements; ++e) {
    const auto local = element_forms(coeffs, nodes[e], nodes[e + 1]);
    const std::size_t ga = e;
    const std::size_t gb = e + 1;
    const bool a_free = ga != 0 && ga != elements;
    const bool b_free = gb != 0 && gb != elements;
    if (a_free) {
      out.B.add(ga - 1, ga - 1, local.b[0]);
      out.K.add(ga - 1, ga - 1, local.k[0]);
    }
    if (b_free) {
      out.B.add(gb - 1, gb - 1, local.b[3]);
      out.K.add(gb - 1, gb - 1, local.k[3]);
    }
    if (a_free && b_free) {
      out.B.add(gb - 1, ga - 1, local.b[1]);
      out.K.add(gb - 1, ga - 1, local.k[1]);
    }
  }
  return out;
}

}  // namespace qdev::temporal
