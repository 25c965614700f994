#pragma once

#include "secular/types.hpp"

// Parameter derivation and chart transforms (module "core-model").

namespace secular {

// Reduced masses and barycentric weights from the three masses.
SystemParams derive_system(double m0, double m1, double m2);

// Build the full secular parameter set. e2 is fixed by delta via
// e2 = sqrt(1 - delta^2); a_i follow from L_i = mu_i sqrt(M_i a_i).
// Throws DomainError if Gamma violates 0 < Gamma < L1*sqrt(3/5) or
// delta is outside (0,1) or L2 <= L1.
SecularParams make_secular(const SystemParams& sys, double L1, double L2,
                           double delta, double Gamma);

// e = sqrt(1 - G^2/L^2) for 0 < G <= L.
double eccentricity(double L, double G);

// cos i = Gamma/G1, sin i = sqrt(1 - Gamma^2/G1^2) (leading order in 1/L2).
struct Inclination {
    double cos_i;
    double sin_i;
};
Inclination mutual_inclination(double G1, double Gamma);

// Corrected separatrix constants (see SeparatrixConstants docs).
SeparatrixConstants derive_separatrix_constants(const SecularParams& p);

// Octupole scales; K = (a1^3/a2^4) e2 (1-e2^2)^{-5/2}.
OctupoleConstants derive_octupole_constants(const SecularParams& p);

// Chart transforms. poincare_to_delaunay reports the undefined angle at the
// origin through `angle_defined`; g1 is set to 0 there and must not be used.
PoincareState delaunay_to_poincare(const DelaunayState& s, double L1);

struct DelaunayResult {
    DelaunayState state;
    bool angle_defined;
};
DelaunayResult poincare_to_delaunay(const PoincareState& s, double L1);

}  // namespace secular
