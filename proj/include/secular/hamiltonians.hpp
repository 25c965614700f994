#pragma once

#include <array>

#include "secular/types.hpp"

// The quadrupolar Hamiltonian H0, the octupolar perturbation H2, their
// harmonics and analytic derivatives, in both charts (module "hamiltonians").
//
// Conventions (canonical pairs (g1, G1), (gamma, Gamma)):
//   g1'     = +dH/dG1,  G1'    = -dH/dg1,
//   gamma'  = +dH/dGamma, Gamma' = -dH/dgamma.
// In the Poincare chart (xi, eta):
//   xi' = -dH/deta,  eta' = +dH/dxi.

namespace secular {

// H0 = (1 - G1^2/L1^2) [2 - 5 (1 - Gamma^2/G1^2) sin^2 g1] - Gamma^2/L1^2.
double h0(const DelaunayState& s, double L1);

// (g1_dot, G1_dot, gamma_dot, Gamma_dot) of H0. Gamma_dot = 0 identically.
std::array<double, 4> h0_vector_field(const DelaunayState& s, double L1);

// H0 composed with the Poincare chart, in the smooth (singularity-free) form
//   H0~ = (L1+G1)/(2 L1^2) * [2 rho^2 - 5 (1 - Gamma^2/G1^2) eta^2] - Gamma^2/L1^2,
// G1 = L1 - rho^2/2, rho^2 = xi^2 + eta^2. Continuous at the origin with value
// -Gamma^2/L1^2; Hessian there diag(4/L1, -2(3 - 5 Gamma^2/L1^2)/L1).
double h0_poincare(const PoincareState& s, double L1);

// Gradient (dH/dxi, dH/deta, dH/dGamma) of h0_poincare (dH/dgamma = 0).
std::array<double, 3> h0_poincare_gradient(const PoincareState& s, double L1);

// Octupolar Hamiltonian
//   H2 = A_oct e1 (cos g1 cos gamma A + sin g1 sin gamma cos i B),
//   A = q (5 w (6 - 7 u^2) - 3) - 35 s^2 w + 7,
//   B = q (5 w (7 u^2 - 4) + 3) + 35 s^2 w - 7,
// with q = G1^2/L1^2, u = cos g1, s = sin g1, w = sin^2 i, cos i = Gamma/G1.
double h2(const DelaunayState& s, double L1, const OctupoleConstants& oct);

// gamma-harmonics: H2 = H2p e^{i gamma} + conj(H2p) e^{-i gamma};
//   H2p = (A_oct e1 / 2) (cos g1 A - i sin g1 cos i B).
complexd h2_plus(const DelaunayState& s, double L1, const OctupoleConstants& oct);

// Analytic partials of H2: (dH2/dg1, dH2/dG1, dH2/dgamma, dH2/dGamma).
std::array<double, 4> h2_partials(const DelaunayState& s, double L1,
                                  const OctupoleConstants& oct);

// Hamiltonian vector field of H = H0 + mu H2 in the Delaunay chart.
std::array<double, 4> perturbed_vector_field(const DelaunayState& s, double mu,
                                             double L1,
                                             const OctupoleConstants& oct);

// Same field in the Poincare chart, ordered (xi', eta', gamma', Gamma').
// Points within 1e-7*sqrt(L1) of the origin are nudged onto the xi-axis at
// that radius when mu != 0 (H2's angular derivative is direction-dependent
// there, and e1 underflows closer in; see design notes).
std::array<double, 4> perturbed_vector_field_poincare(
    const PoincareState& s, double mu, double L1, const OctupoleConstants& oct);

}  // namespace secular
