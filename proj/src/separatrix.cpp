#include "secular/separatrix.hpp"

#include <algorithm>
#include <cmath>

#include "secular/core.hpp"
#include "secular/hamiltonians.hpp"

namespace secular {

FixedPoints fixed_points(const SecularParams& p) {
    const double gt2 = p.gamma_tilde_sq();
    const double s2 = 2.0 / (5.0 * gt2);
    if (!(s2 < 1.0))
        throw DomainError("fixed_points: GammaTilde^2 <= 2/5, no hyperbolic points");
    FixedPoints fp;
    fp.g1_min = std::asin(std::sqrt(s2));
    fp.g1_max = M_PI - fp.g1_min;
    return fp;
}

namespace {

struct OrbitTerms {
    double sh, ch, D, cg, sg, R;
    SeparatrixConstants k;
};

OrbitTerms orbit_terms(double t, const SecularParams& p) {
    OrbitTerms o;
    o.k = derive_separatrix_constants(p);
    const double tau = o.k.A2 * t;
    o.sh = std::sinh(tau);
    o.ch = std::cosh(tau);
    const double chi2 = o.k.chi * o.k.chi;
    o.D = std::sqrt(chi2 + (1.0 + chi2) * o.sh * o.sh);
    o.cg = std::sqrt(3.0 / 5.0) * o.sh / o.D;
    o.sg = std::sqrt(chi2 * o.ch * o.ch + 0.4 * o.sh * o.sh) / o.D;
    o.R = std::sqrt(1.0 + 0.6 * std::pow(p.L1 / p.Gamma, 2) * o.sh * o.sh);
    return o;
}

}  // namespace

SeparatrixSample separatrix_sample(double t, double gamma0,
                                   const SecularParams& p) {
    const OrbitTerms o = orbit_terms(t, p);
    SeparatrixSample s;
    s.t = t;
    s.g1 = std::acos(o.cg);  // (0, pi): sin g1 > 0 branch
    s.G1 = p.Gamma * std::sqrt(5.0 / 3.0) * o.R / o.ch;
    s.gamma1 = -2.0 * p.Gamma * t / (p.L1 * p.L1);
    s.gamma2 = std::atan(std::tanh(o.k.A2 * t) / o.k.chi);
    s.gamma = gamma0 + s.gamma1 + s.gamma2;
    return s;
}

double separatrix_residual(double t, double gamma0, const SecularParams& p) {
    const OrbitTerms o = orbit_terms(t, p);
    const SeparatrixSample s = separatrix_sample(t, gamma0, p);
    const double chi2 = o.k.chi * o.k.chi;
    // Analytic time derivatives of the closed forms (d/dtau, then * A2).
    const double dg1_dtau =
        -std::sqrt(3.0 / 5.0) * chi2 * o.ch / (o.D * o.D * o.D * o.sg);
    const double dG1_dtau = p.Gamma * std::sqrt(5.0 / 3.0) * o.sh *
                            (0.6 * std::pow(p.L1 / p.Gamma, 2) - 1.0) /
                            (o.R * o.ch * o.ch);
    const double dgamma_dt = -2.0 * p.Gamma / (p.L1 * p.L1) +
                             o.k.A2 * o.k.chi / (o.D * o.D);
    const DelaunayState d{s.g1, s.G1, s.gamma, p.Gamma};
    const std::array<double, 4> v = h0_vector_field(d, p.L1);
    return std::max({std::fabs(o.k.A2 * dg1_dtau - v[0]),
                     std::fabs(o.k.A2 * dG1_dtau - v[1]),
                     std::fabs(dgamma_dt - v[2])});
}

double g1_closed_ode_check(double g1, const SecularParams& p) {
    const SeparatrixConstants k = derive_separatrix_constants(p);
    const double u = std::cos(g1), sg = std::sin(g1);
    const double m = 1.0 - (5.0 / 3.0) * u * u;
    if (!(m > 0) || !(1.0 - (5.0 / 3.0) * (1.0 + k.chi * k.chi) * u * u > 0))
        throw DomainError("g1_closed_ode_check: g1 outside the swept interval");
    // Eliminate G1 via the orbit equation G1 = Gamma sqrt(5/3) sin g1 / sqrt(m).
    const double G1 = p.Gamma * std::sqrt(5.0 / 3.0) * sg / std::sqrt(m);
    const DelaunayState d{g1, G1, 0.0, p.Gamma};
    const double g1dot = h0_vector_field(d, p.L1)[0];
    // The orbit runs g1_max -> g1_min (g1dot < 0); the closed ODE therefore
    // carries the opposite sign from the source lemma's display.
    const double closed = -k.A1 *
                          (1.0 - (5.0 / 3.0) * (1.0 + k.chi * k.chi) * u * u) *
                          std::sqrt(m) / sg;
    return std::fabs(g1dot - closed);
}

DelaunayState periodic_orbit(bool use_max, double t, double gamma0,
                             const SecularParams& p) {
    const FixedPoints fp = fixed_points(p);
    DelaunayState s;
    s.g1 = use_max ? fp.g1_max : fp.g1_min;
    s.G1 = p.L1;
    s.gamma = gamma0 - 2.0 * p.Gamma * t / (p.L1 * p.L1);
    s.Gamma = p.Gamma;
    return s;
}

std::array<double, 6> separatrix_identities(double t, const SecularParams& p) {
    const SeparatrixSample s = separatrix_sample(t, 0.0, p);
    const double u = std::cos(s.g1), sg = std::sin(s.g1);
    const double m = 1.0 - (5.0 / 3.0) * u * u;

    const double G1_of_g1 = p.Gamma * std::sqrt(5.0 / 3.0) * sg / std::sqrt(m);
    const double e1_of_g1 = eccentricity(p.L1, G1_of_g1);
    const Inclination inc = mutual_inclination(s.G1, p.Gamma);

    std::array<double, 6> r;
    r[0] = std::fabs(s.G1 - G1_of_g1);
    // e1 identity checked on e1^2 = 1 - G1^2/L1^2: the square is the
    // well-conditioned formulation near the circular endpoint, where
    // d e1/d G1 = -G1/(L1^2 e1) blows up.
    r[1] = std::fabs(std::pow(eccentricity(p.L1, s.G1), 2) -
                     e1_of_g1 * e1_of_g1);
    r[2] = std::fabs(inc.cos_i - std::sqrt(3.0 / 5.0) * std::sqrt(m) / sg);
    r[3] = std::fabs(inc.sin_i - std::sqrt(2.0 / 5.0) / sg);
    r[4] = std::fabs(std::cos(s.gamma2) - std::sqrt(m));
    // Corrected sign: sin gamma2 = +sqrt(5/3) cos g1 (see ledger).
    r[5] = std::fabs(std::sin(s.gamma2) - std::sqrt(5.0 / 3.0) * u);
    return r;
}

}  // namespace secular
