#pragma once

#include <array>

#include "secular/types.hpp"

// Closed-form heteroclinic orbit of H0, hyperbolic fixed points, and the
// identity suite along the orbit (module "separatrix").
//
// Corrected parameterization (tau = A2 t, D^2 = chi^2 + (1+chi^2) sinh^2 tau):
//   cos g1^h =  sqrt(3/5) sinh(tau) / D            (plus sign; see ledger)
//   G1^h     =  Gamma sqrt(5/3) sqrt(1 + (3/5)(L1/Gamma)^2 sinh^2 tau) / cosh tau
//   gamma^h  =  gamma0 - 2 Gamma t / L1^2 + arctan(tanh(tau)/chi)
// The orbit runs from g1_max (t = -inf) to g1_min (t = +inf); sin g1 > 0.

namespace secular {

struct FixedPoints {
    double g1_min = 0;  // in (0, pi/2)
    double g1_max = 0;  // = pi - g1_min
};

struct SeparatrixSample {
    double t = 0;
    double g1 = 0, G1 = 0, gamma = 0;
    double gamma1 = 0;  // rotational part  -2 Gamma t / L1^2
    double gamma2 = 0;  // transient part   arctan(tanh(A2 t)/chi)
};

// Roots of sin^2 g1 = 2/(5 GammaTilde^2) at G1 = L1.
FixedPoints fixed_points(const SecularParams& p);

SeparatrixSample separatrix_sample(double t, double gamma0,
                                   const SecularParams& p);

// Max-norm of d/dt(analytic sample) - h0_vector_field(sample), using analytic
// time derivatives of the closed forms. Contract: < 1e-9 over the orbit.
double separatrix_residual(double t, double gamma0, const SecularParams& p);

// |g1_dot(from field, G1 eliminated) - A1 (1 - (5/3)(1+chi^2) cos^2 g1)
//   sqrt(1 - (5/3) cos^2 g1) / sin g1| for g1 strictly inside the swept range.
double g1_closed_ode_check(double g1, const SecularParams& p);

// The periodic orbits Z0_{min,max}(t) = (g1_{min,max}, L1, gamma0 + gamma1(t), Gamma).
DelaunayState periodic_orbit(bool use_max, double t, double gamma0,
                             const SecularParams& p);

// Residuals of the six on-separatrix identities at time t, in order:
//   G1(g1), e1(g1) (compared as e1^2, the well-conditioned form near the
//   circular endpoint), cos i, sin i, cos gamma2, sin gamma2.
std::array<double, 6> separatrix_identities(double t, const SecularParams& p);

}  // namespace secular
