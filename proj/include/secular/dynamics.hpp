#pragma once

#include <array>
#include <string>
#include <vector>

#include "secular/melnikov.hpp"
#include "secular/types.hpp"

// Perturbed-flow integration, Poincare return map on the section {gamma = g0},
// invariant-manifold growth and separatrix-splitting measurement (module
// "dynamics"). The perturbation knob is H = H0 + mu H2.
//
// Strong hyperbolicity dictates the numerics here: at (L1, Gamma) = (1, 0.3)
// the return-map multiplier is lambda_u = e^{A2 pi L1^2 / Gamma} ~ 3.5e20, so
//  - the fixed point is found by multiple shooting on the energy-reduced
//    system (gamma as independent variable, Gamma solved from H = h), never by
//    Newton on (return_map - id);
//  - map linearizations are composed from short-segment finite-difference
//    Jacobians; det(monodromy) is the product of segment determinants;
//  - manifolds are grown by flowing seeds placed along the whole periodic
//    orbit at distance r0 from it, not by iterating a fundamental domain.

namespace secular {

struct IntegratorConfig {
    enum class Method { Adaptive, SymplecticMidpoint };
    Method method = Method::Adaptive;
    double abs_tol = 1e-12;      // adaptive: absolute tolerance
    double rel_tol = 1e-12;      // adaptive: relative tolerance
    double dt = 1e-3;            // initial (adaptive) or fixed (symplectic) step
    double chart_switch = 0.99;  // use Poincare chart when G1/L1 > this
    long max_steps = 2000000;
    double energy_drift_budget = 1e-10;  // declared budget per unit time
};

struct TrajectoryPoint {
    double t = 0;
    PoincareState state;  // reported uniformly in the global Poincare chart
    double energy = 0;
};

struct Trajectory {
    std::vector<TrajectoryPoint> points;
    double energy_drift_rate = 0;  // max |H - H(0)| / max(1, elapsed time)
};

// Flow of H0 + mu H2 from t0 to t1 with automatic Delaunay<->Poincare chart
// switching around G1/L1 = chart_switch. Throws DynamicsError on step failure,
// chart-domain exit (G1 -> 0), or max_steps.
Trajectory integrate(const PoincareState& s0, double t0, double t1, double mu,
                     const SecularParams& p, const IntegratorConfig& cfg);

// ---- section machinery ------------------------------------------------------

// The section Sigma_{gamma0} = {gamma = gamma0 (mod 2 pi)} on the energy level
// h = H(origin) = -Gamma^2/L1^2 (H2 vanishes at the circular point).
struct SectionDef {
    double gamma0 = 0;
    double h = 0;
    double mu = 0;
    SecularParams p;
    OctupoleConstants oct;
    IntegratorConfig cfg;
};

SectionDef make_section(double gamma0, double mu, const SecularParams& p,
                        const IntegratorConfig& cfg);

// Gamma on the energy level: solves H(xi, eta, gamma, Gamma) = sec.h by 1D
// Newton from Gamma = p.Gamma (d H/d Gamma ~ -2 Gamma/L1^2 != 0 nearby).
double energy_adjust_gamma_action(const SectionDef& sec, double xi, double eta,
                                  double gamma);

struct ReturnResult {
    std::array<double, 2> image;  // (xi, eta) at the next section crossing
    double return_time = 0;       // flow time, located to 1e-12
};

// First forward return to the section (gamma decreases by 2 pi), by t-flow
// with event root-finding; Gamma is adjusted onto the energy level at entry.
// Section transversality (gamma_dot < 0) is verified along the way.
ReturnResult return_map(const SectionDef& sec, const std::array<double, 2>& x);

// d(return map) at x, composed from `segments` short-arc finite-difference
// Jacobians of the energy-reduced flow. det is returned as the product of the
// segment determinants (see module notes).
struct MapJacobian {
    std::array<std::array<double, 2>, 2> M{{{0, 0}, {0, 0}}};
    double det = 0;
};
MapJacobian return_map_jacobian(const SectionDef& sec,
                                const std::array<double, 2>& x, int segments);

// ---- fixed point / periodic orbit ------------------------------------------

struct FixedPointResult {
    std::array<double, 2> x{0, 0};  // on the section, energy level h
    double lambda_u = 0, lambda_s = 0;
    std::array<double, 2> ev_u{0, 0}, ev_s{0, 0};  // unit eigenvectors
    MapJacobian monodromy;
    int shooting_nodes = 0;
    double gamma0_base = 0;  // phase of nodes[0] (the solving section's gamma0)
    // Periodic-orbit nodes at phases gamma0_base - 2 pi k/m, k = 0..m-1 (the
    // data needed to seed manifolds anywhere along the orbit). The orbit does
    // not depend on the section phase, so one solve serves every section.
    std::vector<std::array<double, 2>> nodes;
};

// Multiple-shooting Newton for the hyperbolic periodic orbit through the
// section; mu = 0 returns the origin. Throws DynamicsError on divergence.
FixedPointResult find_fixed_point(const SectionDef& sec, int shooting_nodes = 48);

// Periodic-orbit point at section phase `gamma` (integrated from the nearest
// shooting node).
std::array<double, 2> orbit_point(const SectionDef& sec,
                                  const FixedPointResult& fp, double gamma);

// ---- manifolds and splitting ------------------------------------------------

struct ManifoldPoint {
    double s = 0;  // arc length from the first collected point
    double xi = 0, eta = 0;
};

struct ManifoldCurve {
    bool stable = false;
    std::vector<ManifoldPoint> pts;  // ordered along the manifold
};

// Trace of W^u (stable = false) or W^s (stable = true) on the section, grown
// by t-flowing seeds orbit_point + r0 * eigenvector (seed phases spread over
// one full period of the orbit) and collecting every crossing of
// {gamma = gamma0 (mod 2 pi)} through the primary excursion; covers the
// primary lobe past {xi = 0}. The section plane is *not* globally transverse
// to the flow (gamma_dot changes sign out on the lobe), so crossings of both
// orientations belong to the trace. r0 defaults to 1e-6 * L1 when passed as 0.
ManifoldCurve grow_manifold(const SectionDef& sec, const FixedPointResult& fp,
                            bool stable, double r0, int seeds_per_period = 160);

// eta-coordinate of the primary crossing of {xi = 0, eta < 0} of the given
// manifold branch with the section: the seed phase s is solved (toms748) so
// that the deep xi = 0 passage happens exactly at gamma = gamma0 (mod 2 pi).
// At mu = 0, gamma-equivariance makes the phase condition exactly linear in s.
double primary_crossing_eta(const SectionDef& sec, const FixedPointResult& fp,
                            bool stable, double r0 = 0);

struct SplittingZero {
    double gamma0 = 0;  // zero of d
    double slope = 0;   // d'(zero), by central difference
};

struct SplittingMuRun {
    double mu = 0;
    std::array<double, 2> fixed_point{0, 0};
    std::vector<double> gamma0_samples;
    std::vector<double> d_samples;  // d = eta_u - eta_s along {xi = 0}
    std::vector<SplittingZero> zeros;
    double max_abs_d = 0;
};

struct SplittingReport {
    double L1 = 0, Gamma = 0;
    double abs_Lplus = 0;                 // Melnikov amplitude for comparison
    std::vector<double> melnikov_zeros;   // critical points of L(gamma0)
    std::vector<SplittingMuRun> runs;
    double loglog_slope = 0;  // fit of log max|d| vs log mu (mu > 0 runs)
    double loglog_r2 = 0;
    double certificate_threshold_factor = 0.1;  // |d'| > factor*mu*|L''|/norm
    double normalization = 1.0;  // |grad H0| at the unperturbed crossing
};

struct SplittingConfig {
    std::vector<double> mu_values;
    int n_gamma0 = 24;         // sweep resolution in gamma0
    double r0 = 0;             // 0 = default 1e-6 * L1
    int jobs = 0;              // 0 = all cores, 1 = serial
    IntegratorConfig integ;
};

// Full splitting experiment: per mu, fixed point, d(gamma0) sweep, zeros with
// slopes; plus the Melnikov comparison and the mu-scaling fit.
SplittingReport measure_splitting(const SecularParams& p,
                                  const SplittingConfig& cfg);

struct Certificate {
    bool granted = false;
    bool inconclusive = false;
    double margin = 0;  // min over zeros of |d'| / threshold
    std::string detail;
};

// Transversality certificate: |d'(zero)| > factor * mu * |L''(gamma0*)| / norm
// at every zero, for every mu > 0 run. d below noise floor -> inconclusive.
Certificate transversality_certificate(const SplittingReport& report);

}  // namespace secular
