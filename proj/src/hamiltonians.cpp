#include "secular/hamiltonians.hpp"

#include <cmath>

#include "secular/core.hpp"

namespace secular {

double h0(const DelaunayState& s, double L1) {
    if (!(s.G1 > 0)) throw DomainError("h0: G1 must be positive");
    const double q = s.G1 * s.G1 / (L1 * L1);
    const double w = 1.0 - s.Gamma * s.Gamma / (s.G1 * s.G1);
    const double sg = std::sin(s.g1);
    return (1.0 - q) * (2.0 - 5.0 * w * sg * sg) -
           s.Gamma * s.Gamma / (L1 * L1);
}

std::array<double, 4> h0_vector_field(const DelaunayState& s, double L1) {
    if (!(s.G1 > 0)) throw DomainError("h0_vector_field: G1 must be positive");
    const double L1sq = L1 * L1;
    const double q = s.G1 * s.G1 / L1sq;
    const double w = 1.0 - s.Gamma * s.Gamma / (s.G1 * s.G1);
    const double s2 = std::sin(s.g1) * std::sin(s.g1);
    const double g1_dot =
        (2.0 * s.G1 / L1sq) * (5.0 * w * s2 - 2.0) -
        10.0 * (1.0 - q) * (s.Gamma * s.Gamma / std::pow(s.G1, 3)) * s2;
    const double G1_dot = 5.0 * (1.0 - q) * w * std::sin(2.0 * s.g1);
    const double gamma_dot =
        10.0 * (s.Gamma / (s.G1 * s.G1)) * (1.0 - q) * s2 - 2.0 * s.Gamma / L1sq;
    return {g1_dot, G1_dot, gamma_dot, 0.0};
}

double h0_poincare(const PoincareState& s, double L1) {
    const double rho2 = s.xi * s.xi + s.eta * s.eta;
    const double G1 = L1 - 0.5 * rho2;
    if (!(G1 > 0)) throw DomainError("h0_poincare: outside chart domain");
    const double w = 1.0 - s.Gamma * s.Gamma / (G1 * G1);
    const double k = (L1 + G1) / (2.0 * L1 * L1);
    return k * (2.0 * rho2 - 5.0 * w * s.eta * s.eta) -
           s.Gamma * s.Gamma / (L1 * L1);
}

std::array<double, 3> h0_poincare_gradient(const PoincareState& s, double L1) {
    const double rho2 = s.xi * s.xi + s.eta * s.eta;
    const double G1 = L1 - 0.5 * rho2;
    if (!(G1 > 0)) throw DomainError("h0_poincare_gradient: outside chart domain");
    const double L1sq = L1 * L1;
    const double w = 1.0 - s.Gamma * s.Gamma / (G1 * G1);
    const double wG1 = 2.0 * s.Gamma * s.Gamma / std::pow(G1, 3);
    const double k = (L1 + G1) / (2.0 * L1sq);
    const double bracket = 2.0 * rho2 - 5.0 * w * s.eta * s.eta;
    // dG1/dxi = -xi, dG1/deta = -eta; dk/dG1 = 1/(2 L1^2).
    const double dxi =
        -s.xi * bracket / (2.0 * L1sq) +
        k * (4.0 * s.xi + 5.0 * wG1 * s.eta * s.eta * s.xi);
    const double deta =
        -s.eta * bracket / (2.0 * L1sq) +
        k * (4.0 * s.eta - 10.0 * w * s.eta + 5.0 * wG1 * std::pow(s.eta, 3));
    const double dGamma =
        k * (10.0 * s.Gamma / (G1 * G1)) * s.eta * s.eta - 2.0 * s.Gamma / L1sq;
    return {dxi, deta, dGamma};
}

namespace {

// Shared intermediates of H2 and its partials.
struct H2Terms {
    double q, w, ci, e1, u, sg, A, B;
};

H2Terms h2_terms(const DelaunayState& s, double L1) {
    if (!(s.G1 > 0) || s.G1 > L1 || std::fabs(s.Gamma) > s.G1)
        throw DomainError("h2: require 0 < |Gamma| <= G1 <= L1");
    H2Terms t;
    t.q = s.G1 * s.G1 / (L1 * L1);
    t.ci = s.Gamma / s.G1;
    t.w = 1.0 - t.ci * t.ci;
    t.e1 = std::sqrt(std::fmax(0.0, 1.0 - t.q));
    t.u = std::cos(s.g1);
    t.sg = std::sin(s.g1);
    const double u2 = t.u * t.u, s2 = t.sg * t.sg;
    t.A = t.q * (5.0 * t.w * (6.0 - 7.0 * u2) - 3.0) - 35.0 * s2 * t.w + 7.0;
    t.B = t.q * (5.0 * t.w * (7.0 * u2 - 4.0) + 3.0) + 35.0 * s2 * t.w - 7.0;
    return t;
}

}  // namespace

double h2(const DelaunayState& s, double L1, const OctupoleConstants& oct) {
    const H2Terms t = h2_terms(s, L1);
    return oct.A_oct * t.e1 *
           (t.u * std::cos(s.gamma) * t.A +
            t.sg * std::sin(s.gamma) * t.ci * t.B);
}

complexd h2_plus(const DelaunayState& s, double L1, const OctupoleConstants& oct) {
    const H2Terms t = h2_terms(s, L1);
    return 0.5 * oct.A_oct * t.e1 * complexd(t.u * t.A, -t.sg * t.ci * t.B);
}

std::array<double, 4> h2_partials(const DelaunayState& s, double L1,
                                  const OctupoleConstants& oct) {
    const H2Terms t = h2_terms(s, L1);
    const double cg = std::cos(s.gamma), sgm = std::sin(s.gamma);
    const double L1sq = L1 * L1;
    const double u2 = t.u * t.u, s2 = t.sg * t.sg;

    // d/dg1: dA/dg1 = 70 u s w (q - 1), dB/dg1 = 70 u s w (1 - q).
    const double dA_dg1 = 70.0 * t.u * t.sg * t.w * (t.q - 1.0);
    const double dB_dg1 = -dA_dg1;
    const double dH_dg1 =
        oct.A_oct * t.e1 *
        (cg * (-t.sg * t.A + t.u * dA_dg1) +
         sgm * t.ci * (t.u * t.B + t.sg * dB_dg1));

    // d/dG1: q' = 2 G1/L1^2, ci' = -Gamma/G1^2, w' = 2 Gamma^2/G1^3,
    //        e1' = -G1/(L1^2 e1)  (Delaunay chart boundary at e1 = 0).
    const double qp = 2.0 * s.G1 / L1sq;
    const double cip = -s.Gamma / (s.G1 * s.G1);
    const double wp = 2.0 * s.Gamma * s.Gamma / std::pow(s.G1, 3);
    if (t.e1 == 0.0)
        throw DomainError("h2_partials: chart singular at G1 = L1");
    const double e1p = -s.G1 / (L1sq * t.e1);
    const double dA_dG1 = qp * (5.0 * t.w * (6.0 - 7.0 * u2) - 3.0) +
                          t.q * 5.0 * wp * (6.0 - 7.0 * u2) - 35.0 * s2 * wp;
    const double dB_dG1 = qp * (5.0 * t.w * (7.0 * u2 - 4.0) + 3.0) +
                          t.q * 5.0 * wp * (7.0 * u2 - 4.0) + 35.0 * s2 * wp;
    const double inner = t.u * cg * t.A + t.sg * sgm * t.ci * t.B;
    const double dH_dG1 =
        oct.A_oct *
        (e1p * inner +
         t.e1 * (t.u * cg * dA_dG1 +
                 t.sg * sgm * (cip * t.B + t.ci * dB_dG1)));

    const double dH_dgamma =
        oct.A_oct * t.e1 * (-t.u * sgm * t.A + t.sg * cg * t.ci * t.B);

    // d/dGamma: dci/dGamma = 1/G1, dw/dGamma = -2 Gamma/G1^2.
    const double wG = -2.0 * s.Gamma / (s.G1 * s.G1);
    const double dA_dGamma = t.q * 5.0 * wG * (6.0 - 7.0 * u2) - 35.0 * s2 * wG;
    const double dB_dGamma = t.q * 5.0 * wG * (7.0 * u2 - 4.0) + 35.0 * s2 * wG;
    const double dH_dGamma =
        oct.A_oct * t.e1 *
        (t.u * cg * dA_dGamma +
         t.sg * sgm * (t.B / s.G1 + t.ci * dB_dGamma));

    return {dH_dg1, dH_dG1, dH_dgamma, dH_dGamma};
}

std::array<double, 4> perturbed_vector_field(const DelaunayState& s, double mu,
                                             double L1,
                                             const OctupoleConstants& oct) {
    std::array<double, 4> v = h0_vector_field(s, L1);
    if (mu != 0.0) {
        const std::array<double, 4> d = h2_partials(s, L1, oct);
        v[0] += mu * d[1];   // g1'     += mu dH2/dG1
        v[1] -= mu * d[0];   // G1'     -= mu dH2/dg1
        v[2] += mu * d[3];   // gamma'  += mu dH2/dGamma
        v[3] -= mu * d[2];   // Gamma'  -= mu dH2/dgamma
    }
    return v;
}

std::array<double, 4> perturbed_vector_field_poincare(
    const PoincareState& s, double mu, double L1, const OctupoleConstants& oct) {
    PoincareState ps = s;
    double rho2 = ps.xi * ps.xi + ps.eta * ps.eta;
    // The H2 chain-rule terms have a direction-dependent limit at the exact
    // origin; evaluate a nudged state instead. The nudge must keep
    // e1^2 = 1 - G1^2/L1^2 representable (rho^2/L1 well above machine
    // epsilon), hence 1e-7 rather than anything smaller.
    if (mu != 0.0 && rho2 < 1e-14 * L1) {
        ps.xi = 1e-7 * std::sqrt(L1);
        ps.eta = 0.0;
        rho2 = ps.xi * ps.xi;
    }
    const std::array<double, 3> g0 = h0_poincare_gradient(ps, L1);
    double dxi = g0[0], deta = g0[1], dGamma = g0[2], dgamma = 0.0;
    if (mu != 0.0) {
        const DelaunayResult d = poincare_to_delaunay(ps, L1);
        const std::array<double, 4> h2d = h2_partials(d.state, L1, oct);
        // Chain rule: dg1/dxi = eta/rho^2, dg1/deta = -xi/rho^2,
        //             dG1/dxi = -xi,      dG1/deta = -eta.
        dxi += mu * (h2d[0] * ps.eta / rho2 - h2d[1] * ps.xi);
        deta += mu * (-h2d[0] * ps.xi / rho2 - h2d[1] * ps.eta);
        dgamma += mu * h2d[2];
        dGamma += mu * h2d[3];
    }
    // xi' = -dH/deta, eta' = +dH/dxi, gamma' = +dH/dGamma, Gamma' = -dH/dgamma.
    return {-deta, dxi, dGamma, -dgamma};
}

}  // namespace secular
