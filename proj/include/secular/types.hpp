#pragma once

#include <complex>
#include <stdexcept>
#include <string>

// Core value types for the secular three-body machinery: mass parameters,
// the secular action set (L1, L2, Gamma, ...), the two charts on the reduced
// phase space, and the derived constants used by the separatrix / Melnikov
// layers. All types are immutable values; every operation on them is a pure
// function, safe to call concurrently.

namespace secular {

using complexd = std::complex<double>;

// ---- typed errors -----------------------------------------------------------

// Invalid physical/parameter input (non-positive mass, Gamma out of range, ...).
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

// A numeric procedure failed to converge or reconcile (quadrature error bound
// exceeded, residue/quadrature disagreement, root-finder failure).
struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// Trajectory/dynamics failures: chart-domain exit, step failure, escape.
struct DynamicsError : std::runtime_error {
    explicit DynamicsError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration file problems (missing/invalid keys, constraint violations).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// ---- parameters -------------------------------------------------------------

// Masses and the reduced masses / barycentric weights of the hierarchical
// three-body setup: M0 = m0, M1 = m0 + m1, 1/mu1 = 1/M0 + 1/m1,
// 1/mu2 = 1/M1 + 1/m2, sigma_j = m_j / M1.
struct SystemParams {
    double m0 = 0, m1 = 0, m2 = 0;
    double M0 = 0, M1 = 0;
    double mu1 = 0, mu2 = 0;
    double sigma0 = 0, sigma1 = 0;
};

// The secular action set. L1, L2 are the inner/outer Delaunay actions,
// C = delta * L2 the (conserved) total angular momentum scale, Gamma the
// reduced vertical action with 0 < Gamma < L1*sqrt(3/5), e2 the outer
// eccentricity treated as an independent parameter e2 = sqrt(1 - delta^2).
// a1, a2 are the semimajor axes from L_i = mu_i * sqrt(M_i * a_i).
struct SecularParams {
    SystemParams sys;
    double L1 = 0, L2 = 0;
    double delta = 0, C = 0;
    double Gamma = 0;
    double e2 = 0;
    double a1 = 0, a2 = 0;
    double alpha1 = 0;   // reporting-only scale (see design notes)

    double gamma_tilde_sq() const { return 1.0 - Gamma * Gamma / (L1 * L1); }
};

// Constants of the closed-form heteroclinic orbit and of the closed-form
// Melnikov expression.
//
// NOTE: the source lemma's A1, A2 are misprinted (dimensionally inconsistent
// and failing Hamilton's equations); the values here are the corrected ones,
//   A2 = 2*sqrt(6)*sqrt(1 - (5/3)Gamma^2/L1^2) / L1,
//   A1 = (6*sqrt(3)/sqrt(5)) * (1 - (5/3)Gamma^2/L1^2) / Gamma,
// which satisfy A2 = sqrt(5/3)*A1*chi exactly and match the linearization
// eigenvalue sqrt(8(3 - 5 Gamma^2/L1^2))/L1 of the Poincare-chart Hessian.
struct SeparatrixConstants {
    double chi = 0;        // sqrt(2/3) * (Gamma/L1) / sqrt(1 - (5/3)Gamma^2/L1^2)
    double A1 = 0;         // rate
    double A2 = 0;         // rate (hyperbolic eigenvalue)
    double alpha = 0;      // pi * Gamma / (A2 * L1^2)
    double beta = 0;       // (alpha/pi) * asin(chiHat)
    double gamma_hat = 0;  // Gamma / L1
    double chi_hat = 0;    // chi / sqrt(1 + chi^2)
};

// Scales of the octupolar Hamiltonian and of its on-separatrix forms.
// K := (a1^3/a2^4) * e2 / (1-e2^2)^(5/2) is the common prefactor.
struct OctupoleConstants {
    double K = 0;
    double A_oct = 0;    // -(15/64) * K
    double C1 = 0;       // (105/32) * K * f^(3/2),          f = 1 - (5/3)Gamma^2/L1^2
    double C2 = 0;       // (15/64) * sqrt(5/3) * K * f^(1/2)
    double C1tilde = 0;  // -(15/(16*sqrt(10))) * K * (Gamma/L1) * f
};

// ---- charts -----------------------------------------------------------------

// Delaunay chart on the reduced secular phase space: (g1, G1) conjugate,
// (gamma, Gamma) conjugate. Singular at circular inner ellipses G1 = L1.
struct DelaunayState {
    double g1 = 0;
    double G1 = 0;
    double gamma = 0;
    double Gamma = 0;
};

// Poincare chart regularizing G1 = L1:
//   xi = sqrt(2(L1-G1)) cos g1,  eta = -sqrt(2(L1-G1)) sin g1.
struct PoincareState {
    double xi = 0;
    double eta = 0;
    double gamma = 0;
    double Gamma = 0;
};

}  // namespace secular
