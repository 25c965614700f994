#pragma once

#include <string>
#include <vector>

#include "secular/types.hpp"

// The Melnikov potential of the octupolar perturbation along the heteroclinic
// orbit, computed two independent ways (adaptive quadrature of the on-orbit
// harmonics, and a residue-calculus closed form), plus critical-point location
// and parameter-set scans (module "melnikov").
//
// Harmonic decomposition: L(gamma0) = Lplus e^{i gamma0} + conj, Lplus =
// L1 + i L2 with L_j = (1/2) \int F_j(t) e^{-2 i Gamma t / L1^2} dt.
//
// On-orbit harmonic forms (tau = A2 t; these correct sign/coefficient errors
// in the source lemmas, validated against H2+ e^{i gamma2} on the orbit and
// against direct time-domain quadrature):
//   F1(tau) = 5 C1tilde sinh(tau)/cosh^2(tau),
//   F2(tau) = (C2/5) [(5 GammaHat^2 + 3) sinh^2 tau + 21 - 25 GammaHat^2]
//             / cosh^3 tau.
// Both extend meromorphically with poles only at the zeros of cosh, so the
// only pole in the strip -pi < Im tau < 0 is a0 = -i pi/2; the candidate
// square-root singularities a1, a2 of the g1-chart forms have zero residue.

namespace secular {

struct ResidueTerm {
    complexd pole;     // location in the tau strip -pi < Im tau < 0
    complexd residue;  // residue of (1/2)(F1 + i F2) e^{-i omega tau} there
};

// The two residue-exponent variants that the reconciliation step arbitrates
// between (the source's residue lemmas disagree internally on the decay rate
// and pole set; quadrature is ground truth).
inline constexpr const char* kVariantCanonical = "canonical-rate-2G/(A2*L1^2)-single-pole";
inline constexpr const char* kVariantLemma = "lemma-stated-three-pole";

struct MelnikovValue {
    complexd L_plus{};           // surviving closed form (or quadrature value)
    complexd L1_part{}, L2_part{};  // L_plus = L1_part + i * L2_part
    std::vector<ResidueTerm> residue_terms;  // canonical variant, poles a0,a1,a2
    complexd quadrature_value{};
    double agreement = -1.0;     // |closed - quad| / |quad|; -1 if not computed
    double tail_bound = 0.0;     // truncation bound of the quadrature
    std::string variant;         // which residue-exponent variant survived
    complexd lemma_variant_value{};   // the rejected lemma-stated assembly
    double lemma_variant_agreement = -1.0;  // its (failing) quadrature agreement
};

// On-orbit harmonics as functions of tau = A2 t (corrected closed forms).
double f1_of_tau(double tau, const SecularParams& p);
double f2_of_tau(double tau, const SecularParams& p);

// Same harmonics as functions of g1 on the separatrix (independent coding via
// the algebraic elimination sinh^2 tau = (5/3) chi^2 cos^2 g1 / m,
// cosh^2 tau = (1 - (5/3) cos^2 g1)/m, m = 1 - (5/3)(1+chi^2) cos^2 g1;
// the sinh branch follows the sign of cos g1, as on the orbit).
double f1_of_g1(double g1, const SecularParams& p);
double f2_of_g1(double g1, const SecularParams& p);

// L1_part, L2_part, L_plus and quadrature_value by adaptive quadrature over
// t in [-T, T], T = 40/A2; reports the exponential tail bound. Throws
// NumericError if the quadrature error estimate exceeds 1e-10 * scale.
MelnikovValue melnikov_quadrature(const SecularParams& p);

// Closed form via residues: computes the pole set {a0, a1, a2}, the residues
// of the canonical variant, assembles L_plus through the
// -2 pi i / (A2 (1 + e^{-2 alpha})) prefactor, evaluates the lemma-stated
// variant for the record, and reconciles both against melnikov_quadrature.
// Throws NumericError if no variant agrees with quadrature to 1e-8 relative.
MelnikovValue melnikov_residues(const SecularParams& p);

// L(gamma0) = 2 Re(L_plus e^{i gamma0}).
double melnikov_potential(double gamma0, const MelnikovValue& v);

// Direct time-domain evaluation bypassing the harmonic decomposition:
//   L(gamma0) = \int [F1(t) cos(gamma1(t)+gamma0) - F2(t) sin(gamma1(t)+gamma0)] dt,
// gamma1(t) = -2 Gamma t / L1^2.
double melnikov_potential_time_domain(double gamma0, const SecularParams& p);

struct CriticalPoints {
    bool degenerate = false;         // |L_plus| below degeneracy threshold
    double gamma0[2] = {0, 0};       // critical angles in [0, 2 pi)
    double second_deriv[2] = {0, 0}; // L''(gamma0[k]) = -+ 2 |L_plus|
};

// The two critical points gamma0 = -arg L_plus (mod pi) of the single-harmonic
// potential; degenerate when |L_plus| < 1e-14 * scale.
CriticalPoints critical_points(const MelnikovValue& v, double scale);

// ---- parameter scan ---------------------------------------------------------

struct ScanSpec {
    double L1_min = 0, L1_max = 0;
    int n_L1 = 0;
    // Gamma sampled as fraction of the cell's upper bound L1*sqrt(3/5):
    double frac_min = 0, frac_max = 0;
    int n_Gamma = 0;
    double margin = 1e-3;  // relative margin enforced against def. of O
};

struct ScanCell {
    double L1 = 0, Gamma = 0;
    double abs_Lplus = 0, arg_Lplus = 0;
    double agreement = -1.0;
    int flag = 0;  // 0 ok, 1 candidate zero, 2 cell error
    std::string error;
    std::string variant;  // surviving residue-exponent variant for this cell
};

struct ParameterScan {
    std::vector<ScanCell> cells;  // row-major, Gamma fastest
    int n_L1 = 0, n_Gamma = 0;
    double max_abs = 0.0;
    std::string variant;  // surviving residue-exponent variant (uniform)
};

// Dual-route scan over the (L1, Gamma) grid; each cell re-derives the secular
// parameter set from (sys, L2, delta). Cells failing the domain or the
// reconciliation are recorded with flag = 2 and the scan continues.
// Parallel over cells with OpenMP when jobs != 1 (jobs <= 0 = all cores);
// each cell writes only its own preallocated slot, so output is deterministic.
ParameterScan scan_parameter_set(const ScanSpec& spec, const SystemParams& sys,
                                 double L2, double delta, int jobs);

// Serial reference implementation (identical results; used by tests and the
// benchmark).
ParameterScan scan_parameter_set_serial(const ScanSpec& spec,
                                        const SystemParams& sys, double L2,
                                        double delta);

}  // namespace secular
