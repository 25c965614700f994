#include "secular/core.hpp"

#include <cmath>

namespace secular {

SystemParams derive_system(double m0, double m1, double m2) {
    if (!(m0 > 0) || !(m1 > 0) || !(m2 > 0))
        throw DomainError("derive_system: all masses must be positive");
    SystemParams s;
    s.m0 = m0;
    s.m1 = m1;
    s.m2 = m2;
    s.M0 = m0;
    s.M1 = m0 + m1;
    s.mu1 = 1.0 / (1.0 / s.M0 + 1.0 / m1);
    s.mu2 = 1.0 / (1.0 / s.M1 + 1.0 / m2);
    s.sigma0 = m0 / s.M1;
    s.sigma1 = m1 / s.M1;
    return s;
}

SecularParams make_secular(const SystemParams& sys, double L1, double L2,
                           double delta, double Gamma) {
    if (!(L1 > 0) || !(L2 > 0))
        throw DomainError("make_secular: actions must be positive");
    if (L2 <= L1)
        throw DomainError("make_secular: hierarchical regime requires L2 > L1");
    if (!(delta > 0) || !(delta < 1))
        throw DomainError("make_secular: delta must lie in (0,1)");
    const double gamma_max = L1 * std::sqrt(3.0 / 5.0);
    if (!(Gamma > 0) || !(Gamma < gamma_max))
        throw DomainError("make_secular: Gamma must lie in (0, L1*sqrt(3/5))");

    SecularParams p;
    p.sys = sys;
    p.L1 = L1;
    p.L2 = L2;
    p.delta = delta;
    p.C = delta * L2;
    p.Gamma = Gamma;
    p.e2 = std::sqrt(1.0 - delta * delta);
    // L_i = mu_i sqrt(M_i a_i) => a_i = L_i^2 / (mu_i^2 M_i). The Kepler "M"
    // of the inner problem is M1 = m0+m1 for mu1, and M2tot = m0+m1+m2 for mu2.
    p.a1 = L1 * L1 / (sys.mu1 * sys.mu1 * sys.M1);
    const double M2tot = sys.m0 + sys.m1 + sys.m2;
    p.a2 = L2 * L2 / (sys.mu2 * sys.mu2 * M2tot);
    // Reporting-only normalization constant (ambiguous in the source; the
    // phase portrait and Melnikov zeros are invariant under time rescaling).
    const double one_me2 = 1.0 - p.e2 * p.e2;
    p.alpha1 = -std::pow(L1, 4) * M2tot * std::pow(sys.mu2, 6) * sys.m2 /
               (8.0 * sys.M1 * sys.M1 * std::pow(sys.mu1, 3) *
                std::pow(one_me2, 1.5));
    return p;
}

double eccentricity(double L, double G) {
    // Tolerate rounding just past the circular boundary G = L (closed-form
    // orbit samples can overshoot by one ulp deep in the asymptotic tails).
    if (!(G > 0) || G > L * (1.0 + 1e-12))
        throw DomainError("eccentricity: require 0 < G <= L");
    const double r = std::fmin(1.0, G / L);
    return std::sqrt(std::fmax(0.0, (1.0 - r) * (1.0 + r)));
}

Inclination mutual_inclination(double G1, double Gamma) {
    if (!(G1 > 0) || std::fabs(Gamma) > G1)
        throw DomainError("mutual_inclination: require 0 < |Gamma| <= G1");
    const double c = Gamma / G1;
    return {c, std::sqrt(std::fmax(0.0, (1.0 - c) * (1.0 + c)))};
}

SeparatrixConstants derive_separatrix_constants(const SecularParams& p) {
    SeparatrixConstants k;
    k.gamma_hat = p.Gamma / p.L1;
    const double f = 1.0 - (5.0 / 3.0) * k.gamma_hat * k.gamma_hat;
    if (!(f > 0))
        throw DomainError("derive_separatrix_constants: Gamma out of range");
    k.chi = std::sqrt(2.0 / 3.0) * k.gamma_hat / std::sqrt(f);
    k.A2 = 2.0 * std::sqrt(6.0) * std::sqrt(f) / p.L1;
    k.A1 = (6.0 * std::sqrt(3.0) / std::sqrt(5.0)) * f / p.Gamma;
    k.alpha = M_PI * p.Gamma / (k.A2 * p.L1 * p.L1);
    k.chi_hat = k.chi / std::sqrt(1.0 + k.chi * k.chi);
    k.beta = (k.alpha / M_PI) * std::asin(k.chi_hat);
    return k;
}

OctupoleConstants derive_octupole_constants(const SecularParams& p) {
    OctupoleConstants c;
    const double gh2 = p.Gamma * p.Gamma / (p.L1 * p.L1);
    const double f = 1.0 - (5.0 / 3.0) * gh2;
    c.K = (p.a1 * p.a1 * p.a1 / std::pow(p.a2, 4)) * p.e2 /
          std::pow(1.0 - p.e2 * p.e2, 2.5);
    c.A_oct = -(15.0 / 64.0) * c.K;
    c.C1 = (105.0 / 32.0) * c.K * std::pow(f, 1.5);
    c.C2 = (15.0 / 64.0) * std::sqrt(5.0 / 3.0) * c.K * std::sqrt(f);
    c.C1tilde = -(15.0 / (16.0 * std::sqrt(10.0))) * c.K * std::sqrt(gh2) * f;
    return c;
}

PoincareState delaunay_to_poincare(const DelaunayState& s, double L1) {
    if (s.G1 > L1)
        throw DomainError("delaunay_to_poincare: G1 > L1");
    const double r = std::sqrt(2.0 * (L1 - s.G1));
    return {r * std::cos(s.g1), -r * std::sin(s.g1), s.gamma, s.Gamma};
}

DelaunayResult poincare_to_delaunay(const PoincareState& s, double L1) {
    const double rho2 = s.xi * s.xi + s.eta * s.eta;
    if (rho2 >= 2.0 * L1)
        throw DomainError("poincare_to_delaunay: xi^2 + eta^2 >= 2 L1 (G1 <= 0)");
    DelaunayResult r;
    r.state.G1 = L1 - 0.5 * rho2;
    r.state.gamma = s.gamma;
    r.state.Gamma = s.Gamma;
    r.angle_defined = rho2 > 0.0;
    r.state.g1 = r.angle_defined ? std::atan2(-s.eta, s.xi) : 0.0;
    return r;
}

}  // namespace secular
