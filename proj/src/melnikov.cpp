#include "secular/melnikov.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <sstream>

#include "secular/core.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace secular {

namespace {

struct MelKit {
    SeparatrixConstants k;
    OctupoleConstants oct;
    double gh2;    // (Gamma/L1)^2
    double f;      // 1 - (5/3) gh2
    double omega;  // 2 Gamma / (A2 L1^2) = 2 alpha / pi
};

MelKit mel_kit(const SecularParams& p) {
    MelKit m;
    m.k = derive_separatrix_constants(p);
    m.oct = derive_octupole_constants(p);
    m.gh2 = m.k.gamma_hat * m.k.gamma_hat;
    m.f = 1.0 - (5.0 / 3.0) * m.gh2;
    m.omega = 2.0 * p.Gamma / (m.k.A2 * p.L1 * p.L1);
    return m;
}

double f1_tau(double tau, const MelKit& m) {
    const double ch = std::cosh(tau);
    return 5.0 * m.oct.C1tilde * std::sinh(tau) / (ch * ch);
}

double f2_tau(double tau, const MelKit& m) {
    const double sh = std::sinh(tau), ch = std::cosh(tau);
    return (m.oct.C2 / 5.0) *
           ((5.0 * m.gh2 + 3.0) * sh * sh + 21.0 - 25.0 * m.gh2) /
           (ch * ch * ch);
}

// sup_t |F_j| for error scales and tail bounds.
double f_sup(const MelKit& m) {
    double s = 0.0;
    for (int i = 0; i <= 200; ++i) {
        const double tau = -5.0 + 0.05 * i;
        s = std::max({s, std::fabs(f1_tau(tau, m)), std::fabs(f2_tau(tau, m))});
    }
    return s;
}

}  // namespace

double f1_of_tau(double tau, const SecularParams& p) {
    return f1_tau(tau, mel_kit(p));
}

double f2_of_tau(double tau, const SecularParams& p) {
    return f2_tau(tau, mel_kit(p));
}

namespace {

// Algebraic elimination of tau in favor of u = cos g1 (independent of the
// tau-route coding): sinh tau = sqrt(5/3) chi u / sqrt(m),
// cosh tau = sqrt((1 - (5/3) u^2)/m), m = 1 - (5/3)(1 + chi^2) u^2.
struct HyperbolicOfG1 {
    double sh, ch;
};

HyperbolicOfG1 hyp_of_g1(double g1, const MelKit& mk) {
    const double u = std::cos(g1);
    const double chi2 = mk.k.chi * mk.k.chi;
    const double m = 1.0 - (5.0 / 3.0) * (1.0 + chi2) * u * u;
    if (!(m > 0))
        throw DomainError("f_of_g1: g1 outside the separatrix range");
    return {std::sqrt(5.0 / 3.0) * mk.k.chi * u / std::sqrt(m),
            std::sqrt((1.0 - (5.0 / 3.0) * u * u) / m)};
}

}  // namespace

double f1_of_g1(double g1, const SecularParams& p) {
    const MelKit mk = mel_kit(p);
    const HyperbolicOfG1 h = hyp_of_g1(g1, mk);
    return 5.0 * mk.oct.C1tilde * h.sh / (h.ch * h.ch);
}

double f2_of_g1(double g1, const SecularParams& p) {
    const MelKit mk = mel_kit(p);
    const HyperbolicOfG1 h = hyp_of_g1(g1, mk);
    return (mk.oct.C2 / 5.0) *
           ((5.0 * mk.gh2 + 3.0) * h.sh * h.sh + 21.0 - 25.0 * mk.gh2) /
           (h.ch * h.ch * h.ch);
}

MelnikovValue melnikov_quadrature(const SecularParams& p) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    const MelKit mk = mel_kit(p);
    const double A2 = mk.k.A2;
    const double T = 40.0 / A2;
    const double b = 2.0 * p.Gamma / (p.L1 * p.L1);  // gamma1(t) = -b t
    const double sup = f_sup(mk);
    const double err_budget = 1e-10 * std::max(sup / A2, 1e-300);

    double worst = 0.0;
    auto integ = [&](auto&& f) {
        double err = 0.0;
        const double v = quad::integrate(f, -T, T, 15, 1e-13, &err);
        worst = std::max(worst, err);
        return v;
    };
    const double I1c = integ([&](double t) { return f1_tau(A2 * t, mk) * std::cos(b * t); });
    const double I1s = integ([&](double t) { return f1_tau(A2 * t, mk) * std::sin(b * t); });
    const double I2c = integ([&](double t) { return f2_tau(A2 * t, mk) * std::cos(b * t); });
    const double I2s = integ([&](double t) { return f2_tau(A2 * t, mk) * std::sin(b * t); });
    if (worst > err_budget) {
        std::ostringstream os;
        os << "melnikov_quadrature: error estimate " << worst
           << " exceeds budget " << err_budget << " at (L1, Gamma) = ("
           << p.L1 << ", " << p.Gamma << ")";
        throw NumericError(os.str());
    }

    MelnikovValue v;
    // e^{i gamma1} = cos(b t) - i sin(b t); L_j carries the 1/2 factor.
    v.L1_part = 0.5 * complexd(I1c, -I1s);
    v.L2_part = 0.5 * complexd(I2c, -I2s);
    v.quadrature_value = v.L1_part + complexd(0.0, 1.0) * v.L2_part;
    v.L_plus = v.quadrature_value;
    v.tail_bound = std::exp(-40.0) * sup;
    return v;
}

MelnikovValue melnikov_residues(const SecularParams& p) {
    const MelKit mk = mel_kit(p);
    MelnikovValue v = melnikov_quadrature(p);

    const double A2 = mk.k.A2, alpha = mk.k.alpha, omega = mk.omega;
    const double chi = mk.k.chi, chi2 = chi * chi;
    const double ea = std::exp(-alpha);
    const complexd pref =
        complexd(0.0, -2.0 * M_PI) / (A2 * (1.0 + std::exp(-2.0 * alpha)));
    const double theta1 = std::asin(mk.k.chi_hat);

    // Canonical variant: the meromorphic continuations of F1, F2 have poles
    // only at the zeros of cosh, so a0 = -i pi/2 is the sole pole in the
    // strip; the residues of the g1-chart square-root points a1, a2 vanish.
    const double S = 9.0 * mk.f * (1.0 + omega * omega) + 3.0 + 5.0 * mk.gh2;
    const complexd res1_a0 = 5.0 * mk.oct.C1tilde * omega * ea;          // F1 e^{-i w tau}
    const complexd res2_a0 = complexd(0.0, mk.oct.C2 / 5.0) * S * ea;    // F2 e^{-i w tau}
    const complexd r0 = 0.5 * (res1_a0 + complexd(0.0, 1.0) * res2_a0);
    v.residue_terms = {{complexd(0.0, -M_PI / 2.0), r0},
                       {complexd(0.0, -theta1), complexd(0.0, 0.0)},
                       {complexd(0.0, -(M_PI - theta1)), complexd(0.0, 0.0)}};
    complexd canonical = pref * r0;
    v.L1_part = pref * 0.5 * res1_a0;
    v.L2_part = pref * 0.5 * res2_a0;

    // Lemma-stated variant (three active poles, the source's residue values),
    // kept for the reconciliation record.
    const double eb = std::exp(-2.0 * mk.k.beta);
    const double eab = std::exp(-2.0 * (alpha - mk.k.beta));
    const double sq = std::sqrt(1.0 + chi2);
    const complexd r10(-omega * ea, 0.0);
    const complexd r11((7.0 + chi2) / (2.0 * sq) * eb, 0.0);
    const complexd r12(-(7.0 + chi2) / (2.0 * sq) * eab, 0.0);
    const complexd r20(0.0, (-6.0 * mk.gh2 * (omega * omega - 1.0) -
                             chi2 * (21.0 - 41.0 * mk.gh2)) *
                                ea / (5.0 * chi2));
    const double c2coef = 3.0 * chi * (7.0 - 11.0 * mk.gh2) / (5.0 * sq);
    const complexd r21(0.0, c2coef * eb);
    const complexd r22(0.0, c2coef * eab);
    const complexd Ip1 = pref * A2 * (r10 + r11 + r12);  // tau-integral
    const complexd Ip2 = pref * A2 * (r20 + r21 + r22);
    v.lemma_variant_value = (mk.oct.C1tilde * Ip1 +
                             complexd(0.0, 1.0) * mk.oct.C2 * Ip2) /
                            (2.0 * A2);

    const double qn = std::abs(v.quadrature_value);
    const double agr_canonical = std::abs(canonical - v.quadrature_value) / qn;
    v.lemma_variant_agreement =
        std::abs(v.lemma_variant_value - v.quadrature_value) / qn;

    if (agr_canonical <= 1e-8) {
        v.L_plus = canonical;
        v.agreement = agr_canonical;
        v.variant = kVariantCanonical;
    } else if (v.lemma_variant_agreement <= 1e-8) {
        v.L_plus = v.lemma_variant_value;
        v.agreement = v.lemma_variant_agreement;
        v.variant = kVariantLemma;
    } else {
        std::ostringstream os;
        os << "melnikov_residues: reconciliation failed at (L1, Gamma) = ("
           << p.L1 << ", " << p.Gamma << "): quadrature " << v.quadrature_value
           << ", canonical " << canonical << " (rel " << agr_canonical
           << "), lemma variant " << v.lemma_variant_value << " (rel "
           << v.lemma_variant_agreement << ")";
        throw NumericError(os.str());
    }
    return v;
}

double melnikov_potential(double gamma0, const MelnikovValue& v) {
    return 2.0 * std::real(v.L_plus * std::polar(1.0, gamma0));
}

double melnikov_potential_time_domain(double gamma0, const SecularParams& p) {
    using quad = boost::math::quadrature::gauss_kronrod<double, 61>;
    const MelKit mk = mel_kit(p);
    const double A2 = mk.k.A2;
    const double T = 40.0 / A2;
    const double b = 2.0 * p.Gamma / (p.L1 * p.L1);
    double err = 0.0;
    const double val = quad::integrate(
        [&](double t) {
            const double ph = -b * t + gamma0;
            return f1_tau(A2 * t, mk) * std::cos(ph) -
                   f2_tau(A2 * t, mk) * std::sin(ph);
        },
        -T, T, 15, 1e-13, &err);
    if (err > 1e-9 * std::max(f_sup(mk) / A2, 1e-300))
        throw NumericError("melnikov_potential_time_domain: quadrature did not converge");
    return val;
}

CriticalPoints critical_points(const MelnikovValue& v, double scale) {
    CriticalPoints c;
    const double amp = std::abs(v.L_plus);
    if (amp < 1e-14 * scale) {
        c.degenerate = true;
        return c;
    }
    double g = -std::arg(v.L_plus);
    g = std::fmod(g, 2.0 * M_PI);
    if (g < 0) g += 2.0 * M_PI;
    c.gamma0[0] = g;  // maximum: L = 2|L+| cos(gamma0 + arg L+)
    c.gamma0[1] = std::fmod(g + M_PI, 2.0 * M_PI);
    c.second_deriv[0] = -2.0 * amp;
    c.second_deriv[1] = 2.0 * amp;
    return c;
}

namespace {

ScanCell scan_cell(double L1, double frac, const SystemParams& sys, double L2,
                   double delta) {
    ScanCell c;
    c.L1 = L1;
    c.Gamma = frac * L1 * std::sqrt(3.0 / 5.0);
    try {
        const SecularParams p = make_secular(sys, L1, L2, delta, c.Gamma);
        const MelnikovValue v = melnikov_residues(p);
        c.abs_Lplus = std::abs(v.L_plus);
        c.arg_Lplus = std::arg(v.L_plus);
        c.agreement = v.agreement;
        c.variant = v.variant;
    } catch (const std::exception& e) {
        c.flag = 2;
        c.error = e.what();
    }
    return c;
}

ParameterScan scan_impl(const ScanSpec& spec, const SystemParams& sys,
                        double L2, double delta, int jobs, bool parallel) {
    if (spec.n_L1 < 1 || spec.n_Gamma < 1)
        throw DomainError("scan_parameter_set: grid dimensions must be >= 1");
    if (!(spec.L1_min > 0) || spec.L1_max < spec.L1_min)
        throw DomainError("scan_parameter_set: invalid L1 range");
    if (!(spec.frac_min >= spec.margin) ||
        !(spec.frac_max <= 1.0 - spec.margin) || spec.frac_max < spec.frac_min)
        throw DomainError(
            "scan_parameter_set: Gamma fractions must respect the margin "
            "against 0 < Gamma < L1*sqrt(3/5)");

    ParameterScan scan;
    scan.n_L1 = spec.n_L1;
    scan.n_Gamma = spec.n_Gamma;
    scan.cells.resize(static_cast<size_t>(spec.n_L1) * spec.n_Gamma);
    const double dL = spec.n_L1 > 1
                          ? (spec.L1_max - spec.L1_min) / (spec.n_L1 - 1)
                          : 0.0;
    const double df = spec.n_Gamma > 1
                          ? (spec.frac_max - spec.frac_min) / (spec.n_Gamma - 1)
                          : 0.0;
    const int total = spec.n_L1 * spec.n_Gamma;

#ifdef _OPENMP
    const int nthreads = parallel ? (jobs > 0 ? jobs : omp_get_max_threads()) : 1;
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#else
    (void)jobs;
    (void)parallel;
#endif
    for (int idx = 0; idx < total; ++idx) {
        const int i = idx / spec.n_Gamma, j = idx % spec.n_Gamma;
        scan.cells[idx] = scan_cell(spec.L1_min + i * dL,
                                    spec.frac_min + j * df, sys, L2, delta);
    }

    for (const ScanCell& c : scan.cells)
        if (c.flag == 0) scan.max_abs = std::max(scan.max_abs, c.abs_Lplus);
    for (ScanCell& c : scan.cells) {
        if (c.flag == 0 && c.abs_Lplus < 1e-12 * scan.max_abs) c.flag = 1;
        if (scan.variant.empty() && !c.variant.empty()) scan.variant = c.variant;
    }
    return scan;
}

}  // namespace

ParameterScan scan_parameter_set(const ScanSpec& spec, const SystemParams& sys,
                                 double L2, double delta, int jobs) {
    return scan_impl(spec, sys, L2, delta, jobs, jobs != 1);
}

ParameterScan scan_parameter_set_serial(const ScanSpec& spec,
                                        const SystemParams& sys, double L2,
                                        double delta) {
    return scan_impl(spec, sys, L2, delta, 1, false);
}

}  // namespace secular
