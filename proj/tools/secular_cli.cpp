// Batch front-end: separatrix dumps, Melnikov evaluations and scans,
// splitting experiments, and phase-portrait grids. All outputs are
// deterministic (fixed %.17g formatting, fixed iteration orders) and carry a
// metadata header with the config hash, tolerances, and the
// residue-reconciliation outcome.
//
// Exit codes: 0 success, 2 config error, 3 numeric reconciliation failure,
// 4 dynamics failure.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <sstream>

#include "secular/core.hpp"
#include "secular/dynamics.hpp"
#include "secular/hamiltonians.hpp"
#include "secular/io.hpp"
#include "secular/melnikov.hpp"
#include "secular/separatrix.hpp"

using namespace secular;

namespace {

struct RunContext {
    Config cfg;
    std::string out_dir;
    int jobs = 0;
    bool quadrature_only = false;
    unsigned long long seed = 12345;
    SecularParams params;
    IntegratorConfig integ;
    std::string reconciliation;  // surviving residue variant (or status text)
};

SecularParams params_from_config(const Config& c) {
    const SystemParams sys =
        derive_system(c.get_double("system.m0", 1.0),
                      c.get_double("system.m1", 1.0),
                      c.get_double("system.m2", 1.0));
    const double L1 = c.get_double("secular.L1", 1.0);
    const double L2 = c.get_double("secular.L2", 2.0);
    const double delta = c.get_double("secular.delta", 0.5);
    double Gamma;
    if (c.has("secular.Gamma_frac")) {
        // Fraction of the admissible range (0, L1*sqrt(3/5)).
        Gamma = c.require_double("secular.Gamma_frac") * L1 *
                std::sqrt(3.0 / 5.0);
    } else {
        Gamma = c.get_double("secular.Gamma", 0.3);
    }
    return make_secular(sys, L1, L2, delta, Gamma);
}

IntegratorConfig integ_from_config(const Config& c) {
    IntegratorConfig ic;
    const std::string m = c.get_string("integrator.method", "adaptive");
    if (m == "adaptive") {
        ic.method = IntegratorConfig::Method::Adaptive;
    } else if (m == "midpoint") {
        ic.method = IntegratorConfig::Method::SymplecticMidpoint;
    } else {
        throw ConfigError("integrator.method: expected 'adaptive' or "
                          "'midpoint', got '" + m + "'");
    }
    ic.abs_tol = c.get_double("integrator.abs_tol", ic.abs_tol);
    ic.rel_tol = c.get_double("integrator.rel_tol", ic.rel_tol);
    ic.dt = c.get_double("integrator.dt", ic.dt);
    ic.chart_switch = c.get_double("integrator.chart_switch", ic.chart_switch);
    ic.max_steps = c.get_int("integrator.max_steps",
                             static_cast<int>(ic.max_steps));
    if (!(ic.abs_tol > 0) || !(ic.rel_tol > 0) || !(ic.dt > 0))
        throw ConfigError("integrator tolerances and dt must be positive");
    return ic;
}

std::string header(const RunContext& rc, const std::string& tool) {
    return metadata_block(
        {{"generated-by", "secular-cli " + tool},
         {"config-hash", config_hash(rc.cfg)},
         {"seed", std::to_string(rc.seed)},
         {"tolerances",
          "abs_tol=" + format_g17(rc.integ.abs_tol) +
              " rel_tol=" + format_g17(rc.integ.rel_tol) +
              " residue_agreement_tol=1e-08"},
         {"residue-reconciliation", rc.reconciliation}});
}

std::string path_in(const RunContext& rc, const std::string& name) {
    return (std::filesystem::path(rc.out_dir) / name).string();
}

// ---- separatrix -------------------------------------------------------------

void cmd_separatrix(const RunContext& rc) {
    const SecularParams& p = rc.params;
    const SeparatrixConstants k = derive_separatrix_constants(p);
    const int n = rc.cfg.get_int("separatrix.n_samples", 201);
    const double span = rc.cfg.get_double("separatrix.span", 30.0);
    if (n < 2 || span <= 0)
        throw ConfigError("separatrix.n_samples must be >= 2 and span > 0");

    std::ostringstream csv;
    csv << header(rc, "separatrix")
        << "t,g1,G1,gamma,xi,eta,energy_residual\n";
    std::ostringstream idcsv;
    idcsv << header(rc, "separatrix")
          << "t,G1_of_g1,e1_sq,cos_i,sin_i,cos_gamma2,sin_gamma2\n";
    for (int i = 0; i < n; ++i) {
        const double tau = -span + 2.0 * span * i / (n - 1);
        const double t = tau / k.A2;
        const SeparatrixSample s = separatrix_sample(t, 0.0, p);
        const DelaunayState d{s.g1, s.G1, s.gamma, p.Gamma};
        const PoincareState q = delaunay_to_poincare(d, p.L1);
        const double eres =
            std::fabs(h0(d, p.L1) + p.Gamma * p.Gamma / (p.L1 * p.L1));
        csv << format_g17(t) << ',' << format_g17(s.g1) << ','
            << format_g17(s.G1) << ',' << format_g17(s.gamma) << ','
            << format_g17(q.xi) << ',' << format_g17(q.eta) << ','
            << format_g17(eres) << '\n';
        const auto r = separatrix_identities(t, p);
        idcsv << format_g17(t);
        for (double v : r) idcsv << ',' << format_g17(v);
        idcsv << '\n';
    }
    write_file(path_in(rc, "separatrix.csv"), csv.str());
    write_file(path_in(rc, "identities.csv"), idcsv.str());

    const FixedPoints fp = fixed_points(p);
    std::ostringstream fpcsv;
    fpcsv << header(rc, "separatrix") << "g1_min,g1_max,G1,energy_level\n"
          << format_g17(fp.g1_min) << ',' << format_g17(fp.g1_max) << ','
          << format_g17(p.L1) << ','
          << format_g17(-p.Gamma * p.Gamma / (p.L1 * p.L1)) << '\n';
    write_file(path_in(rc, "fixed_points.csv"), fpcsv.str());

    // Randomized spot checks across the admissible parameter set.
    const int nsets = rc.cfg.get_int("separatrix.n_param_sets", 10);
    std::mt19937_64 rng(rc.seed);
    std::uniform_real_distribution<double> uL1(0.7, 1.4), ufrac(0.05, 0.95);
    std::ostringstream chk;
    chk << header(rc, "separatrix")
        << "L1,Gamma,max_hamilton_residual,max_identity_residual\n";
    for (int s = 0; s < nsets; ++s) {
        const double L1 = uL1(rng);
        const double Gamma = ufrac(rng) * L1 * std::sqrt(3.0 / 5.0);
        const SecularParams ps =
            make_secular(p.sys, L1, 2.0 * L1 + 1.0, p.delta, Gamma);
        const SeparatrixConstants ks = derive_separatrix_constants(ps);
        double rmax = 0, imax = 0;
        for (int i = 0; i <= 40; ++i) {
            const double t = (-20.0 + i) / ks.A2;
            rmax = std::max(rmax, separatrix_residual(t, 0.0, ps));
            for (double v : separatrix_identities(t, ps))
                imax = std::max(imax, v);
        }
        chk << format_g17(L1) << ',' << format_g17(Gamma) << ','
            << format_g17(rmax) << ',' << format_g17(imax) << '\n';
    }
    write_file(path_in(rc, "param_checks.csv"), chk.str());
}

// ---- melnikov / scan --------------------------------------------------------

std::string complex_json(const complexd& z) {
    return "{\"re\": " + format_g17(z.real()) + ", \"im\": " +
           format_g17(z.imag()) + "}";
}

void cmd_melnikov_single(const RunContext& rc) {
    const SecularParams& p = rc.params;
    std::ostringstream js;
    js << header(rc, "melnikov") << "{\n"
       << "  \"L1\": " << format_g17(p.L1) << ",\n"
       << "  \"Gamma\": " << format_g17(p.Gamma) << ",\n";
    const MelnikovValue q = melnikov_quadrature(p);
    js << "  \"quadrature\": {\"value\": " << complex_json(q.quadrature_value)
       << ", \"tail_bound\": " << format_g17(q.tail_bound) << "},\n";
    MelnikovValue v = q;
    if (!rc.quadrature_only) {
        v = melnikov_residues(p);
        js << "  \"residues\": {\"value\": " << complex_json(v.L_plus)
           << ", \"variant\": \"" << v.variant << "\", \"terms\": [";
        for (size_t i = 0; i < v.residue_terms.size(); ++i) {
            if (i) js << ", ";
            js << "{\"pole\": " << complex_json(v.residue_terms[i].pole)
               << ", \"residue\": " << complex_json(v.residue_terms[i].residue)
               << "}";
        }
        js << "]},\n"
           << "  \"agreement\": " << format_g17(v.agreement) << ",\n"
           << "  \"lemma_variant\": {\"value\": "
           << complex_json(v.lemma_variant_value)
           << ", \"agreement\": " << format_g17(v.lemma_variant_agreement)
           << "},\n";
    }
    const complexd L = rc.quadrature_only ? q.quadrature_value : v.L_plus;
    js << "  \"L_plus\": {\"value\": " << complex_json(L)
       << ", \"abs\": " << format_g17(std::abs(L))
       << ", \"arg\": " << format_g17(std::arg(L)) << "},\n";
    const CriticalPoints cp = critical_points(v, std::abs(L));
    js << "  \"critical_points\": {\"degenerate\": "
       << (cp.degenerate ? "true" : "false");
    if (!cp.degenerate) {
        js << ", \"gamma0\": [" << format_g17(cp.gamma0[0]) << ", "
           << format_g17(cp.gamma0[1]) << "], \"second_derivative\": ["
           << format_g17(cp.second_deriv[0]) << ", "
           << format_g17(cp.second_deriv[1]) << "]";
    }
    js << "}\n}\n";
    write_file(path_in(rc, "melnikov.json"), js.str());
    std::printf("L_plus: abs=%s arg=%s agreement=%s\n",
                format_g17(std::abs(L)).c_str(),
                format_g17(std::arg(L)).c_str(),
                format_g17(rc.quadrature_only ? -1.0 : v.agreement).c_str());
}

ScanSpec scan_spec_from_config(const Config& c) {
    ScanSpec s;
    s.L1_min = c.get_double("scan.L1_min", 0.8);
    s.L1_max = c.get_double("scan.L1_max", 1.3);
    s.n_L1 = c.get_int("scan.n_L1", 20);
    s.frac_min = c.get_double("scan.frac_min", 0.05);
    s.frac_max = c.get_double("scan.frac_max", 0.95);
    s.n_Gamma = c.get_int("scan.n_Gamma", 20);
    s.margin = c.get_double("scan.margin", s.margin);
    return s;
}

void emit_scan(const RunContext& rc, const std::string& tool) {
    const ScanSpec spec = scan_spec_from_config(rc.cfg);
    const double L2 = rc.cfg.get_double("secular.L2", 2.0);
    const double delta = rc.cfg.get_double("secular.delta", 0.5);

    ParameterScan scan;
    if (rc.quadrature_only) {
        // Quadrature route only: no reconciliation record per cell.
        scan.n_L1 = spec.n_L1;
        scan.n_Gamma = spec.n_Gamma;
        scan.variant = "quadrature-only";
        for (int i = 0; i < spec.n_L1; ++i)
            for (int j = 0; j < spec.n_Gamma; ++j) {
                ScanCell cell;
                cell.L1 = spec.n_L1 == 1
                              ? spec.L1_min
                              : spec.L1_min + (spec.L1_max - spec.L1_min) * i /
                                                  (spec.n_L1 - 1);
                const double frac =
                    spec.n_Gamma == 1
                        ? spec.frac_min
                        : spec.frac_min + (spec.frac_max - spec.frac_min) * j /
                                              (spec.n_Gamma - 1);
                cell.Gamma = frac * cell.L1 * std::sqrt(3.0 / 5.0);
                const SecularParams ps = make_secular(
                    rc.params.sys, cell.L1, L2, delta, cell.Gamma);
                const MelnikovValue mv = melnikov_quadrature(ps);
                cell.abs_Lplus = std::abs(mv.quadrature_value);
                cell.arg_Lplus = std::arg(mv.quadrature_value);
                cell.agreement = -1.0;
                cell.variant = "quadrature-only";
                scan.max_abs = std::max(scan.max_abs, cell.abs_Lplus);
                scan.cells.push_back(cell);
            }
        for (ScanCell& cell : scan.cells)
            cell.flag = cell.abs_Lplus < 1e-12 * scan.max_abs ? 1 : 0;
    } else {
        scan = scan_parameter_set(spec, rc.params.sys, L2, delta, rc.jobs);
    }

    std::ostringstream csv;
    csv << header(rc, tool) << "L1,Gamma,abs_Lplus,arg_Lplus,agreement,flag\n";
    for (const ScanCell& cell : scan.cells)
        csv << format_g17(cell.L1) << ',' << format_g17(cell.Gamma) << ','
            << format_g17(cell.abs_Lplus) << ',' << format_g17(cell.arg_Lplus)
            << ',' << format_g17(cell.agreement) << ',' << cell.flag << '\n';
    write_file(path_in(rc, "scan.csv"), csv.str());

    std::ostringstream js;
    js << header(rc, tool) << "{\n  \"n_L1\": " << scan.n_L1
       << ", \"n_Gamma\": " << scan.n_Gamma << ",\n  \"variant\": \""
       << scan.variant << "\",\n  \"cells\": [\n";
    for (size_t c = 0; c < scan.cells.size(); ++c) {
        const ScanCell& cell = scan.cells[c];
        js << "    {\"L1\": " << format_g17(cell.L1)
           << ", \"Gamma\": " << format_g17(cell.Gamma)
           << ", \"abs\": " << format_g17(cell.abs_Lplus)
           << ", \"arg\": " << format_g17(cell.arg_Lplus)
           << ", \"agreement\": " << format_g17(cell.agreement)
           << ", \"flag\": " << cell.flag;
        if (!rc.quadrature_only) {
            const SecularParams ps = make_secular(rc.params.sys, cell.L1, L2,
                                                  delta, cell.Gamma);
            const MelnikovValue mv = melnikov_residues(ps);
            js << ", \"residues\": [";
            for (size_t i = 0; i < mv.residue_terms.size(); ++i) {
                if (i) js << ", ";
                js << "{\"pole\": " << complex_json(mv.residue_terms[i].pole)
                   << ", \"residue\": "
                   << complex_json(mv.residue_terms[i].residue) << "}";
            }
            js << "]";
        }
        js << "}" << (c + 1 < scan.cells.size() ? "," : "") << "\n";
    }
    js << "  ]\n}\n";
    write_file(path_in(rc, "scan.json"), js.str());
}

void cmd_melnikov(const RunContext& rc) {
    if (rc.cfg.has("scan.n_L1") || rc.cfg.has("scan.n_Gamma"))
        emit_scan(rc, "melnikov");
    else
        cmd_melnikov_single(rc);
}

// ---- splitting --------------------------------------------------------------

void cmd_splitting(const RunContext& rc) {
    const SecularParams& p = rc.params;
    SplittingConfig sc;
    sc.mu_values =
        rc.cfg.get_double_list("splitting.mu", {0.0, 1e-4, 3e-4, 1e-3});
    sc.n_gamma0 = rc.cfg.get_int("splitting.n_gamma0", 24);
    sc.r0 = rc.cfg.get_double("splitting.r0", 0.0);
    sc.jobs = rc.jobs;
    sc.integ = rc.integ;
    const SplittingReport rep = measure_splitting(p, sc);
    const Certificate cert = transversality_certificate(rep);

    std::ostringstream js;
    js << header(rc, "splitting") << "{\n"
       << "  \"L1\": " << format_g17(rep.L1)
       << ", \"Gamma\": " << format_g17(rep.Gamma) << ",\n"
       << "  \"abs_Lplus\": " << format_g17(rep.abs_Lplus) << ",\n"
       << "  \"normalization\": " << format_g17(rep.normalization) << ",\n"
       << "  \"melnikov_zeros\": [";
    for (size_t i = 0; i < rep.melnikov_zeros.size(); ++i)
        js << (i ? ", " : "") << format_g17(rep.melnikov_zeros[i]);
    js << "],\n  \"loglog_slope\": " << format_g17(rep.loglog_slope)
       << ", \"loglog_r2\": " << format_g17(rep.loglog_r2) << ",\n"
       << "  \"certificate\": {\"verdict\": \""
       << (cert.inconclusive ? "inconclusive"
                             : (cert.granted ? "granted" : "denied"))
       << "\", \"margin\": " << format_g17(cert.margin)
       << ", \"threshold_factor\": "
       << format_g17(rep.certificate_threshold_factor) << "},\n"
       << "  \"runs\": [\n";
    for (size_t r = 0; r < rep.runs.size(); ++r) {
        const SplittingMuRun& run = rep.runs[r];
        js << "    {\"mu\": " << format_g17(run.mu)
           << ", \"fixed_point\": [" << format_g17(run.fixed_point[0]) << ", "
           << format_g17(run.fixed_point[1])
           << "], \"max_abs_d\": " << format_g17(run.max_abs_d)
           << ", \"below_noise_floor\": "
           << (run.max_abs_d <= 1e-8 ? "true" : "false") << ",\n"
           << "     \"gamma0\": [";
        for (size_t i = 0; i < run.gamma0_samples.size(); ++i)
            js << (i ? ", " : "") << format_g17(run.gamma0_samples[i]);
        js << "],\n     \"d\": [";
        for (size_t i = 0; i < run.d_samples.size(); ++i)
            js << (i ? ", " : "") << format_g17(run.d_samples[i]);
        js << "],\n     \"zeros\": [";
        for (size_t i = 0; i < run.zeros.size(); ++i)
            js << (i ? ", " : "") << "{\"gamma0\": "
               << format_g17(run.zeros[i].gamma0)
               << ", \"slope\": " << format_g17(run.zeros[i].slope) << "}";
        js << "]}" << (r + 1 < rep.runs.size() ? "," : "") << "\n";
    }
    js << "  ]\n}\n";
    write_file(path_in(rc, "splitting.json"), js.str());

    // Manifold polylines at the largest mu in the list.
    const double mu_man =
        *std::max_element(sc.mu_values.begin(), sc.mu_values.end());
    const SectionDef sec = make_section(0.0, mu_man, p, rc.integ);
    const FixedPointResult fp = find_fixed_point(sec);
    std::ostringstream man;
    man << header(rc, "splitting") << "branch,s,xi,eta\n";
    for (bool stable : {false, true}) {
        const ManifoldCurve mc = grow_manifold(sec, fp, stable, sc.r0);
        for (const ManifoldPoint& q : mc.pts)
            man << (stable ? "stable" : "unstable") << ','
                << format_g17(q.s) << ',' << format_g17(q.xi) << ','
                << format_g17(q.eta) << '\n';
    }
    write_file(path_in(rc, "manifolds.csv"), man.str());

    for (const SplittingMuRun& run : rep.runs) {
        std::string verdict = "inconclusive";
        if (run.mu > 0 && run.max_abs_d > 1e-8 && !run.zeros.empty()) {
            const double threshold = rep.certificate_threshold_factor *
                                     run.mu * 2.0 * rep.abs_Lplus /
                                     rep.normalization;
            verdict = "granted";
            for (const SplittingZero& z : run.zeros)
                if (std::fabs(z.slope) <= threshold) verdict = "denied";
        }
        std::printf("mu=%s zeros=%zu max|d|=%s verdict=%s\n",
                    format_g17(run.mu).c_str(), run.zeros.size(),
                    format_g17(run.max_abs_d).c_str(), verdict.c_str());
    }
}

// ---- portrait ---------------------------------------------------------------

void cmd_portrait(const RunContext& rc) {
    const SecularParams& p = rc.params;
    const int ng = rc.cfg.get_int("portrait.n_g1", 121);
    const int nG = rc.cfg.get_int("portrait.n_G1", 121);
    const int nx = rc.cfg.get_int("portrait.n_xi", 121);
    if (ng < 2 || nG < 2 || nx < 2)
        throw ConfigError("portrait grid sizes must be >= 2");

    std::ostringstream del;
    del << header(rc, "portrait")
        << "# separatrix-level: "
        << format_g17(-p.Gamma * p.Gamma / (p.L1 * p.L1)) << "\n"
        << "g1,G1,H0\n";
    for (int i = 0; i < ng; ++i) {
        const double g1 = 2.0 * M_PI * i / (ng - 1);
        for (int j = 0; j < nG; ++j) {
            const double G1 =
                p.Gamma + (p.L1 - p.Gamma) * (j + 1.0) / nG;
            del << format_g17(g1) << ',' << format_g17(G1) << ','
                << format_g17(h0({g1, G1, 0.0, p.Gamma}, p.L1)) << '\n';
        }
    }
    write_file(path_in(rc, "portrait_delaunay.csv"), del.str());

    std::ostringstream poi;
    poi << header(rc, "portrait")
        << "# separatrix-level: "
        << format_g17(-p.Gamma * p.Gamma / (p.L1 * p.L1)) << "\n"
        << "xi,eta,H0\n";
    const double r = 0.98 * std::sqrt(2.0 * (p.L1 - p.Gamma));
    for (int i = 0; i < nx; ++i) {
        const double xi = -r + 2.0 * r * i / (nx - 1);
        for (int j = 0; j < nx; ++j) {
            const double eta = -r + 2.0 * r * j / (nx - 1);
            if (xi * xi + eta * eta > r * r) continue;
            poi << format_g17(xi) << ',' << format_g17(eta) << ','
                << format_g17(h0_poincare({xi, eta, 0.0, p.Gamma}, p.L1))
                << '\n';
        }
    }
    write_file(path_in(rc, "portrait_poincare.csv"), poi.str());

    // Equilibria: hyperbolic points at G1 = L1, sin^2 g1 = 2/(5 GammaTilde^2);
    // elliptic points at sin g1 = +-1 with G1 a real root of the quartic
    // 6 G1^4 - 10 Gamma^2 L1^2 = 0 (stationarity of H0 in G1).
    std::ostringstream eq;
    eq << header(rc, "portrait") << "type,g1,G1,xi,eta\n";
    const FixedPoints fp = fixed_points(p);
    for (double g1 : {fp.g1_min, fp.g1_max}) {
        eq << "hyperbolic," << format_g17(g1) << ',' << format_g17(p.L1)
           << ",0,0\n";
    }
    const double G1e = std::pow(10.0 * p.Gamma * p.Gamma * p.L1 * p.L1 / 6.0,
                                0.25);
    if (G1e >= p.Gamma && G1e <= p.L1) {
        const double rho = std::sqrt(2.0 * (p.L1 - G1e));
        eq << "elliptic," << format_g17(M_PI / 2) << ',' << format_g17(G1e)
           << ",0," << format_g17(-rho) << '\n';
        eq << "elliptic," << format_g17(3.0 * M_PI / 2) << ','
           << format_g17(G1e) << ",0," << format_g17(rho) << '\n';
    }
    write_file(path_in(rc, "equilibria.csv"), eq.str());
}

int dispatch(const std::string& cmd, RunContext& rc) {
    rc.params = params_from_config(rc.cfg);
    rc.integ = integ_from_config(rc.cfg);
    // Residue-reconciliation outcome recorded in every header.
    if (rc.quadrature_only) {
        rc.reconciliation = "skipped (--quadrature-only)";
    } else {
        try {
            rc.reconciliation = melnikov_residues(rc.params).variant;
        } catch (const NumericError& e) {
            rc.reconciliation = std::string("failed: ") + e.what();
            if (cmd == "melnikov" || cmd == "scan") throw;
        }
    }
    std::filesystem::create_directories(rc.out_dir);
    if (cmd == "separatrix") cmd_separatrix(rc);
    else if (cmd == "melnikov") cmd_melnikov(rc);
    else if (cmd == "scan") emit_scan(rc, "scan");
    else if (cmd == "splitting") cmd_splitting(rc);
    else if (cmd == "portrait") cmd_portrait(rc);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secular three-body machinery: separatrix, Melnikov "
                 "potential, separatrix splitting"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand
    std::string config_path, out_dir = ".";
    int jobs = 0;
    bool quadrature_only = false;
    unsigned long long seed = 12345;
    app.add_option("--config", config_path, "Parameter file (key = value)");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--jobs", jobs, "Worker threads (0 = all cores)");
    app.add_flag("--quadrature-only", quadrature_only,
                 "Skip the residue route and its reconciliation");
    app.add_option("--seed", seed, "Seed for randomized test-point sampling");
    for (const char* name :
         {"separatrix", "melnikov", "splitting", "portrait", "scan"})
        app.add_subcommand(name);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    RunContext rc;
    rc.out_dir = out_dir;
    rc.jobs = jobs;
    rc.quadrature_only = quadrature_only;
    rc.seed = seed;
    try {
        if (!config_path.empty()) rc.cfg = load_config_file(config_path);
        return dispatch(app.get_subcommands().front()->get_name(), rc);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "reconciliation failure: %s\n", e.what());
        return 3;
    } catch (const DynamicsError& e) {
        std::fprintf(stderr, "dynamics failure: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
