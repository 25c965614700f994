#include "secular/dynamics.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <sstream>

#include "secular/core.hpp"
#include "secular/hamiltonians.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace secular {

namespace {

namespace odeint = boost::numeric::odeint;
using arr2 = std::array<double, 2>;
using arr4 = std::array<double, 4>;

double h_full(const SectionDef& sec, double xi, double eta, double gamma,
              double Gamma) {
    const PoincareState q{xi, eta, gamma, Gamma};
    double H = h0_poincare(q, sec.p.L1);
    if (sec.mu != 0.0) {
        PoincareState qn = q;
        if (qn.xi * qn.xi + qn.eta * qn.eta < 1e-28) qn.xi = 1e-14;
        const DelaunayResult d = poincare_to_delaunay(qn, sec.p.L1);
        H += sec.mu * h2(d.state, sec.p.L1, sec.oct);
    }
    return H;
}

}  // namespace

SectionDef make_section(double gamma0, double mu, const SecularParams& p,
                        const IntegratorConfig& cfg) {
    SectionDef s;
    s.gamma0 = gamma0;
    s.mu = mu;
    s.p = p;
    s.oct = derive_octupole_constants(p);
    s.cfg = cfg;
    s.h = -p.Gamma * p.Gamma / (p.L1 * p.L1);  // H at the circular point
    return s;
}

double energy_adjust_gamma_action(const SectionDef& sec, double xi, double eta,
                                  double gamma) {
    double Gamma = sec.p.Gamma;
    const double scale = std::max(1.0, std::fabs(sec.h));
    for (int it = 0; it < 50; ++it) {
        PoincareState q{xi, eta, gamma, Gamma};
        if (sec.mu != 0.0 && xi * xi + eta * eta < 1e-28) q.xi = 1e-14;
        const double F = h_full(sec, q.xi, q.eta, gamma, Gamma) - sec.h;
        if (std::fabs(F) < 1e-15 * scale) return Gamma;
        double dF = h0_poincare_gradient(q, sec.p.L1)[2];
        // The mu-term of dF is O(e1) and is skipped near the origin, where
        // h2_partials is chart-singular.
        if (sec.mu != 0.0 && xi * xi + eta * eta > 1e-14 * sec.p.L1) {
            const DelaunayResult d = poincare_to_delaunay(q, sec.p.L1);
            dF += sec.mu * h2_partials(d.state, sec.p.L1, sec.oct)[3];
        }
        if (dF == 0.0)
            throw DynamicsError("energy_adjust: dH/dGamma vanished");
        Gamma -= F / dF;
    }
    throw DynamicsError("energy_adjust: Newton did not converge");
}

// ---- t-flow integration -----------------------------------------------------

namespace {

enum class Chart { Poincare, Delaunay };

arr4 to_delaunay_vec(const arr4& q, double L1) {
    const DelaunayResult d =
        poincare_to_delaunay({q[0], q[1], q[2], q[3]}, L1);
    return {d.state.g1, d.state.G1, d.state.gamma, d.state.Gamma};
}

arr4 to_poincare_vec(const arr4& d, double L1) {
    const PoincareState q =
        delaunay_to_poincare({d[0], d[1], d[2], d[3]}, L1);
    return {q.xi, q.eta, q.gamma, q.Gamma};
}

struct FlowSystem {
    const SectionDef* sec;
    Chart chart;
    void operator()(const arr4& x, arr4& dxdt, double) const {
        const double L1 = sec->p.L1;
        if (chart == Chart::Poincare) {
            const double rho2 = x[0] * x[0] + x[1] * x[1];
            if (rho2 >= 2.0 * L1 * (1.0 - 1e-12))
                throw DynamicsError("integrate: chart-domain exit (G1 -> 0)");
            dxdt = perturbed_vector_field_poincare({x[0], x[1], x[2], x[3]},
                                                   sec->mu, L1, sec->oct);
        } else {
            if (x[1] <= 1e-8 * L1)
                throw DynamicsError("integrate: chart-domain exit (G1 -> 0)");
            dxdt = perturbed_vector_field({x[0], x[1], x[2], x[3]}, sec->mu,
                                          L1, sec->oct);
        }
    }
};

using controlled78 =
    odeint::controlled_runge_kutta<odeint::runge_kutta_fehlberg78<arr4>>;

// One accepted adaptive step, honoring a step-size cap.
void accepted_step(controlled78& stepper, const FlowSystem& sys, arr4& x,
                   double& t, double& dt, double dt_cap) {
    for (int tries = 0; tries < 60; ++tries) {
        if (std::fabs(dt) > std::fabs(dt_cap)) dt = dt_cap;
        if (stepper.try_step(sys, x, t, dt) == odeint::success) return;
        if (std::fabs(dt) < 1e-15)
            throw DynamicsError("integrate: step size underflow");
    }
    throw DynamicsError("integrate: repeated step rejection");
}

// Fixed-step implicit midpoint (symplectic; Poincare chart only).
void midpoint_step(const FlowSystem& sys, arr4& x, double& t, double dt) {
    arr4 x1 = x, f{};
    for (int it = 0; it < 100; ++it) {
        arr4 mid;
        for (int i = 0; i < 4; ++i) mid[i] = 0.5 * (x[i] + x1[i]);
        sys(mid, f, t);
        double delta = 0.0;
        arr4 xn;
        for (int i = 0; i < 4; ++i) {
            xn[i] = x[i] + dt * f[i];
            delta = std::max(delta, std::fabs(xn[i] - x1[i]));
        }
        x1 = xn;
        if (delta < 1e-15) break;
    }
    x = x1;
    t += dt;
}

}  // namespace

Trajectory integrate(const PoincareState& s0, double t0, double t1, double mu,
                     const SecularParams& p, const IntegratorConfig& cfg) {
    const SectionDef sec = make_section(s0.gamma, mu, p, cfg);
    const double dir = t1 >= t0 ? 1.0 : -1.0;
    const double L1 = p.L1;

    Chart chart = Chart::Poincare;
    arr4 x{s0.xi, s0.eta, s0.gamma, s0.Gamma};
    // Start in the Delaunay chart when well away from the circular point.
    {
        const double G1 = L1 - 0.5 * (x[0] * x[0] + x[1] * x[1]);
        if (G1 / L1 < cfg.chart_switch - 0.005 && G1 > 0) {
            chart = Chart::Delaunay;
            x = to_delaunay_vec(x, L1);
        }
    }

    Trajectory traj;
    double t = t0;
    double dt = dir * std::fabs(cfg.dt);
    controlled78 stepper = odeint::make_controlled<
        odeint::runge_kutta_fehlberg78<arr4>>(cfg.abs_tol, cfg.rel_tol);

    const double H0v = chart == Chart::Poincare
                           ? h_full(sec, x[0], x[1], x[2], x[3])
                           : h_full(sec, to_poincare_vec(x, L1)[0],
                                    to_poincare_vec(x, L1)[1], x[2], x[3]);
    double max_drift = 0.0;

    auto record = [&] {
        const arr4 q = chart == Chart::Poincare ? x : to_poincare_vec(x, L1);
        const double H = h_full(sec, q[0], q[1], q[2], q[3]);
        max_drift = std::max(max_drift, std::fabs(H - H0v));
        traj.points.push_back({t, {q[0], q[1], q[2], q[3]}, H});
    };
    record();

    long steps = 0;
    while (dir * (t1 - t) > 1e-14 * std::max(1.0, std::fabs(t1))) {
        if (++steps > cfg.max_steps)
            throw DynamicsError("integrate: max_steps exceeded");
        const double dt_cap = t1 - t;
        FlowSystem sys{&sec, chart};
        if (cfg.method == IntegratorConfig::Method::SymplecticMidpoint) {
            if (chart == Chart::Delaunay) {  // midpoint runs in the global chart
                x = to_poincare_vec(x, L1);
                chart = Chart::Poincare;
                sys.chart = chart;
            }
            const double h = dir * std::min(std::fabs(cfg.dt), std::fabs(dt_cap));
            midpoint_step(sys, x, t, h);
        } else {
            accepted_step(stepper, sys, x, t, dt, dt_cap);
        }
        // Chart policy with hysteresis around chart_switch.
        if (cfg.method == IntegratorConfig::Method::Adaptive) {
            const double G1 = chart == Chart::Poincare
                                  ? L1 - 0.5 * (x[0] * x[0] + x[1] * x[1])
                                  : x[1];
            if (chart == Chart::Delaunay && G1 / L1 > cfg.chart_switch) {
                x = to_poincare_vec(x, L1);
                chart = Chart::Poincare;
                stepper = odeint::make_controlled<
                    odeint::runge_kutta_fehlberg78<arr4>>(cfg.abs_tol,
                                                          cfg.rel_tol);
            } else if (chart == Chart::Poincare &&
                       G1 / L1 < cfg.chart_switch - 0.005 && G1 > 0) {
                x = to_delaunay_vec(x, L1);
                chart = Chart::Delaunay;
                stepper = odeint::make_controlled<
                    odeint::runge_kutta_fehlberg78<arr4>>(cfg.abs_tol,
                                                          cfg.rel_tol);
            }
        }
        record();
    }
    traj.energy_drift_rate =
        max_drift / std::max(1.0, std::fabs(t1 - t0));
    return traj;
}

// ---- energy-reduced flow (gamma as independent variable) --------------------

namespace {

struct ReducedSystem {
    const SectionDef* sec;
    double gamma_from;
    double dir;  // gamma = gamma_from + dir * sigma
    void operator()(const arr2& x, arr2& dxds, double sigma) const {
        const double gamma = gamma_from + dir * sigma;
        const double Gamma =
            energy_adjust_gamma_action(*sec, x[0], x[1], gamma);
        const arr4 v = perturbed_vector_field_poincare(
            {x[0], x[1], gamma, Gamma}, sec->mu, sec->p.L1, sec->oct);
        if (!(v[2] < 0.0))
            throw DynamicsError(
                "reduced flow: section transversality lost (gamma_dot >= 0)");
        dxds[0] = dir * v[0] / v[2];
        dxds[1] = dir * v[1] / v[2];
    }
};

using controlled78_2 =
    odeint::controlled_runge_kutta<odeint::runge_kutta_fehlberg78<arr2>>;

// Flow x from gamma_from to gamma_from + dgamma (dgamma of either sign).
arr2 reduced_step(const SectionDef& sec, const arr2& x0, double gamma_from,
                  double dgamma) {
    if (dgamma == 0.0) return x0;
    const double dir = dgamma > 0 ? 1.0 : -1.0;
    ReducedSystem sys{&sec, gamma_from, dir};
    arr2 x = x0;
    controlled78_2 stepper = odeint::make_controlled<
        odeint::runge_kutta_fehlberg78<arr2>>(sec.cfg.abs_tol,
                                              sec.cfg.rel_tol);
    odeint::integrate_adaptive(stepper, sys, x, 0.0, std::fabs(dgamma),
                               std::min(0.05, std::fabs(dgamma)));
    return x;
}

// Central-difference Jacobian of reduced_step over one segment.
MapJacobian segment_jacobian(const SectionDef& sec, const arr2& x,
                             double gamma_from, double dgamma) {
    const double h = 1e-6;
    MapJacobian J;
    for (int c = 0; c < 2; ++c) {
        arr2 xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const arr2 fp = reduced_step(sec, xp, gamma_from, dgamma);
        const arr2 fm = reduced_step(sec, xm, gamma_from, dgamma);
        J.M[0][c] = (fp[0] - fm[0]) / (2.0 * h);
        J.M[1][c] = (fp[1] - fm[1]) / (2.0 * h);
    }
    J.det = J.M[0][0] * J.M[1][1] - J.M[0][1] * J.M[1][0];
    return J;
}

MapJacobian compose(const MapJacobian& A, const MapJacobian& B) {
    // A after B.
    MapJacobian C;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            C.M[i][j] = A.M[i][0] * B.M[0][j] + A.M[i][1] * B.M[1][j];
    C.det = A.det * B.det;  // product of segment dets, not det of the product
    return C;
}

}  // namespace

ReturnResult return_map(const SectionDef& sec, const arr2& x) {
    const double L1 = sec.p.L1;
    arr4 q{x[0], x[1], sec.gamma0,
           energy_adjust_gamma_action(sec, x[0], x[1], sec.gamma0)};
    FlowSystem sys{&sec, Chart::Poincare};
    controlled78 stepper = odeint::make_controlled<
        odeint::runge_kutta_fehlberg78<arr4>>(sec.cfg.abs_tol,
                                              sec.cfg.rel_tol);
    const double target = sec.gamma0 - 2.0 * M_PI;
    double t = 0.0, dt = 1e-3;
    arr4 prev = q;
    double t_prev = 0.0;
    long steps = 0;
    while (q[2] > target) {
        if (++steps > sec.cfg.max_steps)
            throw DynamicsError("return_map: orbit did not return");
        prev = q;
        t_prev = t;
        accepted_step(stepper, sys, q, t, dt, 100.0);
        arr4 f{};
        sys(q, f, t);
        if (!(f[2] < 0.0))
            throw DynamicsError("return_map: transversality lost on section");
    }
    // Root-find the crossing time within [t_prev, t] to 1e-12.
    auto gamma_at = [&](double tc) {
        if (tc <= t_prev) return prev[2] - target;
        arr4 y = prev;
        controlled78 st = odeint::make_controlled<
            odeint::runge_kutta_fehlberg78<arr4>>(sec.cfg.abs_tol,
                                                  sec.cfg.rel_tol);
        odeint::integrate_adaptive(st, sys, y, t_prev, tc,
                                   std::min(1e-3, tc - t_prev));
        return y[2] - target;
    };
    std::uintmax_t it = 200;
    auto r = boost::math::tools::toms748_solve(
        gamma_at, t_prev, t,
        [](double a, double b) { return std::fabs(b - a) < 1e-12; }, it);
    const double tc = 0.5 * (r.first + r.second);
    arr4 y = prev;
    if (tc > t_prev) {
        controlled78 st = odeint::make_controlled<
            odeint::runge_kutta_fehlberg78<arr4>>(sec.cfg.abs_tol,
                                                  sec.cfg.rel_tol);
        odeint::integrate_adaptive(st, sys, y, t_prev, tc,
                                   std::min(1e-3, tc - t_prev));
    }
    (void)L1;
    return {{y[0], y[1]}, tc};
}

MapJacobian return_map_jacobian(const SectionDef& sec, const arr2& x,
                                int segments) {
    const double dg = -2.0 * M_PI / segments;
    arr2 node = x;
    double gamma = sec.gamma0;
    MapJacobian M;
    M.M = {{{1, 0}, {0, 1}}};
    M.det = 1.0;
    for (int k = 0; k < segments; ++k) {
        const MapJacobian Jk = segment_jacobian(sec, node, gamma, dg);
        M = compose(Jk, M);
        node = reduced_step(sec, node, gamma, dg);
        gamma += dg;
    }
    return M;
}

namespace {

struct EigenPair {
    double lu, ls;
    arr2 vu, vs;
};

EigenPair eigen_of(const MapJacobian& M) {
    const double tr = M.M[0][0] + M.M[1][1];
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * M.det));
    double lu = 0.5 * (tr + (tr > 0 ? disc : -disc));
    if (std::fabs(lu) < 1.0) lu = 0.5 * (tr - (tr > 0 ? disc : -disc));
    const double ls = M.det / lu;
    auto evec = [&](double lam) {
        // Rows of (M - lam I) are proportional; null vector from the larger row.
        const arr2 r0{M.M[0][0] - lam, M.M[0][1]};
        const arr2 r1{M.M[1][0], M.M[1][1] - lam};
        const double n0 = std::hypot(r0[0], r0[1]), n1 = std::hypot(r1[0], r1[1]);
        arr2 v = n0 > n1 ? arr2{-r0[1], r0[0]} : arr2{-r1[1], r1[0]};
        const double n = std::hypot(v[0], v[1]);
        v[0] /= n;
        v[1] /= n;
        if (v[1] < 0 || (v[1] == 0 && v[0] < 0)) {  // fixed orientation
            v[0] = -v[0];
            v[1] = -v[1];
        }
        return v;
    };
    return {lu, ls, evec(lu), evec(ls)};
}

}  // namespace

FixedPointResult find_fixed_point(const SectionDef& sec, int m) {
    if (m < 4) throw DynamicsError("find_fixed_point: too few shooting nodes");
    const double dg = -2.0 * M_PI / m;
    std::vector<arr2> nodes(m, arr2{0.0, 0.0});

    std::vector<MapJacobian> J(m);
    const double tol = 1e-12;
    bool converged = false;
    for (int iter = 0; iter < 30 && !converged; ++iter) {
        // Residuals r_k = step(x_k) - x_{k+1} and segment Jacobians.
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        Eigen::VectorXd rhs(2 * m);
        double rmax = 0.0;
        for (int k = 0; k < m; ++k) {
            const double gk = sec.gamma0 + k * dg;
            const arr2 img = reduced_step(sec, nodes[k], gk, dg);
            const int k1 = (k + 1) % m;
            const arr2 r{img[0] - nodes[k1][0], img[1] - nodes[k1][1]};
            rmax = std::max({rmax, std::fabs(r[0]), std::fabs(r[1])});
            J[k] = segment_jacobian(sec, nodes[k], gk, dg);
            for (int i = 0; i < 2; ++i) {
                rhs(2 * k + i) = -r[i];
                for (int j = 0; j < 2; ++j) A(2 * k + i, 2 * k + j) = J[k].M[i][j];
                A(2 * k + i, 2 * k1 + i) -= 1.0;
            }
        }
        if (rmax < tol) {
            converged = true;
            break;
        }
        const Eigen::VectorXd dx = A.partialPivLu().solve(rhs);
        double step_norm = 0.0;
        for (int k = 0; k < m; ++k) {
            nodes[k][0] += dx(2 * k);
            nodes[k][1] += dx(2 * k + 1);
            step_norm = std::max({step_norm, std::fabs(dx(2 * k)),
                                  std::fabs(dx(2 * k + 1))});
        }
        if (step_norm > 0.5 * sec.p.L1)
            throw DynamicsError("find_fixed_point: Newton diverged");
    }
    if (!converged)
        throw DynamicsError("find_fixed_point: Newton did not converge");

    // Monodromy as the ordered product of the segment Jacobians.
    MapJacobian M;
    M.M = {{{1, 0}, {0, 1}}};
    M.det = 1.0;
    for (int k = 0; k < m; ++k) M = compose(J[k], M);

    FixedPointResult fp;
    fp.x = nodes[0];
    fp.monodromy = M;
    const EigenPair e = eigen_of(M);
    fp.lambda_u = e.lu;
    fp.lambda_s = e.ls;
    fp.ev_u = e.vu;
    fp.ev_s = e.vs;
    fp.shooting_nodes = m;
    fp.gamma0_base = sec.gamma0;
    fp.nodes = std::move(nodes);
    return fp;
}

std::array<double, 2> orbit_point(const SectionDef& sec,
                                  const FixedPointResult& fp, double gamma) {
    const int m = fp.shooting_nodes;
    const double dg = 2.0 * M_PI / m;
    // Phase offset below the node base, reduced to [0, 2 pi).
    double r = std::fmod(fp.gamma0_base - gamma, 2.0 * M_PI);
    if (r < 0) r += 2.0 * M_PI;
    const int k = std::min(m - 1, static_cast<int>(r / dg));
    const double excess = r - k * dg;  // flow this much further down
    return reduced_step(sec, fp.nodes[k], fp.gamma0_base - k * dg, -excess);
}

// ---- manifolds --------------------------------------------------------------

namespace {

// mu = 0 eigen-directions of the section-map linearization at the origin,
// oriented toward the eta < 0 homoclinic lobe. These equal the fixed-angle
// rays g1 = g1_max (unstable) and g1 = g1_min (stable) of the separatrix.
struct LobeDirections {
    arr2 u, s;
};

LobeDirections lobe_directions(const SecularParams& p) {
    const double b = 3.0 - 5.0 * p.Gamma * p.Gamma / (p.L1 * p.L1);
    const double n = std::hypot(std::sqrt(b / 2.0), 1.0);
    return {{-std::sqrt(b / 2.0) / n, -1.0 / n},
            {std::sqrt(b / 2.0) / n, -1.0 / n}};
}

// Seed at orbit phase gamma_seed, offset r0 along the lobe direction, lifted
// onto the energy level. Flow direction: forward in t for W^u, backward for
// W^s.
arr4 seed_state(const SectionDef& sec, const FixedPointResult& fp, bool stable,
                double r0, double gamma_seed) {
    const LobeDirections dir = lobe_directions(sec.p);
    arr2 x = orbit_point(sec, fp, gamma_seed);
    const arr2& d = stable ? dir.s : dir.u;
    x[0] += r0 * d[0];
    x[1] += r0 * d[1];
    const double G = energy_adjust_gamma_action(sec, x[0], x[1], gamma_seed);
    return {x[0], x[1], gamma_seed, G};
}

// Generous time budget: near-orbit drift (up to ~1.5 periods) plus the
// excursion time ln(scale/r0)/A2, with margin.
double flow_budget(const SectionDef& sec, double r0) {
    const SeparatrixConstants k = derive_separatrix_constants(sec.p);
    const double period = 2.0 * M_PI * sec.p.L1 * sec.p.L1 / (2.0 * sec.p.Gamma);
    return 3.0 * period + (std::log(2.0 * sec.p.L1 / r0) + 30.0) / k.A2;
}

// Re-integrate a short saved arc to an interior time (event refinement).
arr4 flow_arc(const SectionDef& sec, arr4 x, double t0, double t1) {
    if (t1 == t0) return x;
    FlowSystem sys{&sec, Chart::Poincare};
    controlled78 st = odeint::make_controlled<
        odeint::runge_kutta_fehlberg78<arr4>>(sec.cfg.abs_tol,
                                              sec.cfg.rel_tol);
    odeint::integrate_adaptive(st, sys, x, t0, t1,
                               0.1 * (t1 - t0));
    return x;
}

struct DeepCrossing {
    double gamma = 0;  // unwrapped gamma at the crossing
    double eta = 0;
};

// Flow (tdir = +-1) to the first xi = 0 passage deep in the eta < 0 lobe.
// eta_dot vanishes at the lobe bottom, so eta is second-order accurate in the
// located crossing time.
DeepCrossing deep_crossing(const SectionDef& sec, arr4 x, double tdir,
                           double t_max) {
    FlowSystem sys{&sec, Chart::Poincare};
    controlled78 stepper = odeint::make_controlled<
        odeint::runge_kutta_fehlberg78<arr4>>(sec.cfg.abs_tol,
                                              sec.cfg.rel_tol);
    const double eta_deep =
        -0.4 * std::sqrt(2.0 * (sec.p.L1 - sec.p.Gamma * std::sqrt(5.0 / 3.0)));
    double t = 0.0, dt = tdir * 1e-3;
    while (tdir * t < t_max) {
        const arr4 prev = x;
        const double t_prev = t;
        accepted_step(stepper, sys, x, t, dt, tdir * 0.2);
        if (prev[1] < eta_deep && x[1] < eta_deep && prev[0] != x[0] &&
            prev[0] * x[0] <= 0.0) {
            auto xi_at = [&](double tc) {
                return flow_arc(sec, prev, t_prev, tc)[0];
            };
            std::uintmax_t it = 100;
            const auto rb = boost::math::tools::toms748_solve(
                xi_at, std::min(t_prev, t), std::max(t_prev, t),
                [](double u, double v) { return std::fabs(v - u) < 1e-11; },
                it);
            const arr4 y =
                flow_arc(sec, prev, t_prev, 0.5 * (rb.first + rb.second));
            return {y[2], y[1]};
        }
    }
    throw DynamicsError(
        "deep_crossing: no primary excursion within the time budget");
}

}  // namespace

ManifoldCurve grow_manifold(const SectionDef& sec, const FixedPointResult& fp,
                            bool stable, double r0, int seeds_per_period) {
    if (r0 <= 0) r0 = 1e-6 * sec.p.L1;
    const double tdir = stable ? -1.0 : 1.0;
    const double t_max = flow_budget(sec, r0);
    const double rho2_sep =
        2.0 * (sec.p.L1 - sec.p.Gamma * std::sqrt(5.0 / 3.0));

    std::vector<arr2> raw;
    for (int i = 0; i < seeds_per_period; ++i) {
        const double s = 2.0 * M_PI * i / seeds_per_period;
        const double gamma_seed =
            stable ? sec.gamma0 + s : sec.gamma0 - s;
        arr4 x = seed_state(sec, fp, stable, r0, gamma_seed);
        FlowSystem sys{&sec, Chart::Poincare};
        controlled78 stepper = odeint::make_controlled<
            odeint::runge_kutta_fehlberg78<arr4>>(sec.cfg.abs_tol,
                                                  sec.cfg.rel_tol);
        double t = 0.0, dt = tdir * 1e-3;
        bool excursion = false;
        while (tdir * t < t_max) {
            const arr4 prev = x;
            const double t_prev = t;
            accepted_step(stepper, sys, x, t, dt, tdir * 0.2);
            // Record every crossing of gamma = gamma0 (mod 2 pi) within this
            // step (gamma_dot can reach either sign out on the lobe).
            const double u0 = (prev[2] - sec.gamma0) / (2.0 * M_PI);
            const double u1 = (x[2] - sec.gamma0) / (2.0 * M_PI);
            const long k0 = static_cast<long>(std::floor(u0));
            const long k1 = static_cast<long>(std::floor(u1));
            for (long k = std::min(k0, k1) + 1; k <= std::max(k0, k1); ++k) {
                const double level = sec.gamma0 + 2.0 * M_PI * k;
                auto g_at = [&](double tc) {
                    return flow_arc(sec, prev, t_prev, tc)[2] - level;
                };
                std::uintmax_t it = 100;
                const auto rb = boost::math::tools::toms748_solve(
                    g_at, std::min(t_prev, t), std::max(t_prev, t),
                    [](double a, double b) { return std::fabs(b - a) < 1e-11; },
                    it);
                const arr4 y =
                    flow_arc(sec, prev, t_prev, 0.5 * (rb.first + rb.second));
                raw.push_back({y[0], y[1]});
            }
            const double rho2 = x[0] * x[0] + x[1] * x[1];
            if (rho2 > 0.5 * rho2_sep) excursion = true;
            if (excursion && rho2 < 0.01 * rho2_sep) break;
        }
    }
    if (raw.size() < 8)
        throw DynamicsError("grow_manifold: too few trace points; increase "
                            "seeds_per_period or reduce r0");

    // Order along the manifold: the trace hugs the homoclinic loop, which is
    // star-shaped about (0, eta_sep/2); sort by the winding angle measured
    // from the fixed point. W^u runs into the lobe on the xi < 0 side first,
    // W^s on the xi > 0 side.
    const double cy = -0.5 * std::sqrt(rho2_sep);
    auto phi = [&](const arr2& q) {
        double a = std::atan2(q[1] - cy, q[0]) - M_PI / 2.0;
        a = std::fmod(a, 2.0 * M_PI);
        if (a < 0) a += 2.0 * M_PI;
        return a;
    };
    std::sort(raw.begin(), raw.end(), [&](const arr2& a, const arr2& b) {
        return stable ? phi(a) > phi(b) : phi(a) < phi(b);
    });

    ManifoldCurve curve;
    curve.stable = stable;
    curve.pts.reserve(raw.size());
    for (const arr2& q : raw) curve.pts.push_back({0.0, q[0], q[1]});
    for (size_t i = 1; i < curve.pts.size(); ++i)
        curve.pts[i].s = curve.pts[i - 1].s +
                         std::hypot(curve.pts[i].xi - curve.pts[i - 1].xi,
                                    curve.pts[i].eta - curve.pts[i - 1].eta);
    return curve;
}

double primary_crossing_eta(const SectionDef& sec, const FixedPointResult& fp,
                            bool stable, double r0) {
    if (r0 <= 0) r0 = 1e-6 * sec.p.L1;
    const double tdir = stable ? -1.0 : 1.0;
    const double t_max = flow_budget(sec, r0);

    // gamma at the deep crossing as a function of the seed phase offset s.
    // At mu = 0, gamma-equivariance gives gc(s) = gc(0) -+ s exactly; for
    // small mu the slope stays near -+1, so a short bracket suffices.
    auto gc = [&](double s) {
        const double gamma_seed =
            stable ? sec.gamma0 + s : sec.gamma0 - s;
        return deep_crossing(sec, seed_state(sec, fp, stable, r0, gamma_seed),
                             tdir, t_max);
    };
    const DeepCrossing c0 = gc(0.0);
    double delta0 = stable ? sec.gamma0 - c0.gamma : c0.gamma - sec.gamma0;
    delta0 = std::fmod(delta0, 2.0 * M_PI);
    if (delta0 < 0) delta0 += 2.0 * M_PI;
    const double target =
        stable ? c0.gamma + delta0 : c0.gamma - delta0;  // = gamma0 (mod 2 pi)
    auto f = [&](double s) {
        const double v = gc(s).gamma - target;
        return stable ? v : -v;  // make f increasing in s
    };
    for (double w : {0.5, 1.5, 3.2}) {
        const double lo = delta0 - w, hi = delta0 + w;
        const double flo = f(lo), fhi = f(hi);
        if (flo > 0 || fhi < 0) continue;
        std::uintmax_t it = 100;
        const auto rb = boost::math::tools::toms748_solve(
            f, lo, hi,
            [](double a, double b) { return std::fabs(b - a) < 1e-10; }, it);
        return gc(0.5 * (rb.first + rb.second)).eta;
    }
    throw DynamicsError(
        "primary_crossing_eta: seed-phase bracketing failed for the "
        "gamma-matching condition");
}

// ---- splitting --------------------------------------------------------------

namespace {

// The fixed point / orbit nodes do not depend on the section phase, so one
// shooting solve per mu serves every gamma0.
double measure_d(const SecularParams& p, double mu, double gamma0,
                 const IntegratorConfig& integ, double r0,
                 const FixedPointResult& fp) {
    const SectionDef sec = make_section(gamma0, mu, p, integ);
    const double eu = primary_crossing_eta(sec, fp, false, r0);
    const double es = primary_crossing_eta(sec, fp, true, r0);
    return eu - es;
}

}  // namespace

SplittingReport measure_splitting(const SecularParams& p,
                                  const SplittingConfig& cfg) {
    SplittingReport rep;
    rep.L1 = p.L1;
    rep.Gamma = p.Gamma;

    const MelnikovValue mel = melnikov_residues(p);
    rep.abs_Lplus = std::abs(mel.L_plus);
    const CriticalPoints cp = critical_points(mel, std::abs(mel.L_plus));
    if (!cp.degenerate) {
        rep.melnikov_zeros = {cp.gamma0[0], cp.gamma0[1]};
        std::sort(rep.melnikov_zeros.begin(), rep.melnikov_zeros.end());
    }

    // Normalization: |grad H0| at the unperturbed homoclinic crossing of
    // {xi = 0} (the first-order distance formula divides by it).
    {
        const double eta_sep =
            -std::sqrt(2.0 * (p.L1 - p.Gamma * std::sqrt(5.0 / 3.0)));
        const auto gr = h0_poincare_gradient({0.0, eta_sep, 0.0, p.Gamma}, p.L1);
        rep.normalization = std::hypot(gr[0], gr[1]);
    }

    const double r0 = cfg.r0 > 0 ? cfg.r0 : 1e-6 * p.L1;
    const int n = std::max(8, cfg.n_gamma0);

    for (double mu : cfg.mu_values) {
        SplittingMuRun run;
        run.mu = mu;
        run.gamma0_samples.resize(n);
        run.d_samples.resize(n);
        const SectionDef sec0 = make_section(0.0, mu, p, cfg.integ);
        const FixedPointResult fp0 = find_fixed_point(sec0, 48);
        run.fixed_point = fp0.x;
        std::vector<std::string> errors(n);
#ifdef _OPENMP
        const int nthreads = cfg.jobs > 0 ? cfg.jobs : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
        for (int i = 0; i < n; ++i) {
            const double g0 = 2.0 * M_PI * i / n;
            try {
                run.gamma0_samples[i] = g0;
                run.d_samples[i] = measure_d(p, mu, g0, cfg.integ, r0, fp0);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
        for (const std::string& e : errors)
            if (!e.empty()) throw DynamicsError("measure_splitting: " + e);

        for (double d : run.d_samples)
            run.max_abs_d = std::max(run.max_abs_d, std::fabs(d));

        // Zero crossings (only meaningful above the integrator noise floor).
        if (mu > 0 && run.max_abs_d > 1e-8) {
            for (int i = 0; i < n; ++i) {
                const int j = (i + 1) % n;
                const double di = run.d_samples[i], dj = run.d_samples[j];
                if (di == 0.0 || di * dj >= 0.0) continue;
                double lo = run.gamma0_samples[i];
                double hi = run.gamma0_samples[j] + (j == 0 ? 2.0 * M_PI : 0.0);
                auto f = [&](double g0) {
                    return measure_d(p, mu, std::fmod(g0, 2.0 * M_PI),
                                     cfg.integ, r0, fp0);
                };
                std::uintmax_t it = 80;
                auto rb = boost::math::tools::toms748_solve(
                    f, lo, hi,
                    [](double u, double v) { return std::fabs(v - u) < 1e-6; },
                    it);
                SplittingZero z;
                z.gamma0 = std::fmod(0.5 * (rb.first + rb.second), 2.0 * M_PI);
                const double dg = 0.02;
                z.slope = (f(z.gamma0 + dg) - f(z.gamma0 - dg)) / (2.0 * dg);
                run.zeros.push_back(z);
            }
            std::sort(run.zeros.begin(), run.zeros.end(),
                      [](const SplittingZero& a, const SplittingZero& b) {
                          return a.gamma0 < b.gamma0;
                      });
        }
        rep.runs.push_back(std::move(run));
    }

    // log-log fit of max |d| vs mu over the mu > 0 runs.
    {
        std::vector<double> lx, ly;
        for (const SplittingMuRun& r : rep.runs)
            if (r.mu > 0 && r.max_abs_d > 0) {
                lx.push_back(std::log(r.mu));
                ly.push_back(std::log(r.max_abs_d));
            }
        const size_t k = lx.size();
        if (k >= 2) {
            double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
            for (size_t i = 0; i < k; ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
                syy += ly[i] * ly[i];
            }
            const double denom = k * sxx - sx * sx;
            rep.loglog_slope = (k * sxy - sx * sy) / denom;
            const double r_num = k * sxy - sx * sy;
            const double r_den =
                std::sqrt(denom * (k * syy - sy * sy));
            rep.loglog_r2 = r_den > 0 ? (r_num / r_den) * (r_num / r_den) : 0.0;
        }
    }
    return rep;
}

Certificate transversality_certificate(const SplittingReport& rep) {
    Certificate cert;
    cert.margin = std::numeric_limits<double>::infinity();
    bool any = false;
    std::ostringstream detail;
    for (const SplittingMuRun& run : rep.runs) {
        if (run.mu <= 0) continue;
        if (run.max_abs_d <= 1e-8 || run.zeros.empty()) {
            detail << "mu=" << run.mu << ": below noise floor or no zeros; ";
            continue;
        }
        const double threshold = rep.certificate_threshold_factor * run.mu *
                                 2.0 * rep.abs_Lplus / rep.normalization;
        for (const SplittingZero& z : run.zeros) {
            any = true;
            const double m = std::fabs(z.slope) / threshold;
            cert.margin = std::min(cert.margin, m);
            detail << "mu=" << run.mu << " zero@" << z.gamma0
                   << " |d'|=" << std::fabs(z.slope) << " margin=" << m << "; ";
        }
    }
    if (!any) {
        cert.inconclusive = true;
        cert.margin = 0.0;
        detail << "no measurable zeros (integrable or degenerate case)";
    } else {
        cert.granted = cert.margin > 1.0;
        cert.inconclusive = false;
    }
    cert.detail = detail.str();
    return cert;
}

}  // namespace secular
