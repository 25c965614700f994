#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "secular/hamiltonians.hpp"
#include "secular/core.hpp"
#include "test_common.hpp"

using namespace secular;

namespace {

// Central finite difference of a scalar function of one coordinate.
template <class F>
double fd(F&& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

const double L1 = 1.0;

}  // namespace

TEST_CASE("h0 value and invariances") {
    const DelaunayState s{0.8, 0.7, 1.3, 0.3};
    // Direct formula.
    const double q = 0.49, w = 1.0 - 0.09 / 0.49;
    const double expect =
        (1.0 - q) * (2.0 - 5.0 * w * std::sin(0.8) * std::sin(0.8)) - 0.09;
    CHECK(h0(s, L1) == doctest::Approx(expect).epsilon(1e-15));
    // gamma-independence.
    CHECK(h0({0.8, 0.7, -2.0, 0.3}, L1) == h0(s, L1));
    // Circular equilibria level: H0(G1 = L1) = -Gamma^2/L1^2.
    CHECK(h0({0.4, 1.0, 0.0, 0.3}, L1) == doctest::Approx(-0.09).epsilon(1e-14));
}

TEST_CASE("h0 vector field vs finite differences") {
    const DelaunayState s{0.8, 0.7, 1.3, 0.3};
    const auto v = h0_vector_field(s, L1);
    const double h = 1e-6;
    const double dg1 = fd([&](double x) { return h0({x, s.G1, s.gamma, s.Gamma}, L1); }, s.g1, h);
    const double dG1 = fd([&](double x) { return h0({s.g1, x, s.gamma, s.Gamma}, L1); }, s.G1, h);
    const double dGam = fd([&](double x) { return h0({s.g1, s.G1, s.gamma, x}, L1); }, s.Gamma, h);
    CHECK(v[0] == doctest::Approx(dG1).epsilon(1e-8));
    CHECK(v[1] == doctest::Approx(-dg1).epsilon(1e-8));
    CHECK(v[2] == doctest::Approx(dGam).epsilon(1e-8));
    CHECK(v[3] == 0.0);
}

TEST_CASE("poincare chart h0 agrees with delaunay h0") {
    const DelaunayState d{0.8, 0.7, 1.3, 0.3};
    const PoincareState q = delaunay_to_poincare(d, L1);
    CHECK(h0_poincare(q, L1) == doctest::Approx(h0(d, L1)).epsilon(1e-14));
    // Value at the chart origin (circular inner ellipse).
    CHECK(h0_poincare({0.0, 0.0, 0.0, 0.3}, L1) == doctest::Approx(-0.09).epsilon(1e-15));
}

TEST_CASE("poincare gradient vs finite differences and origin Hessian") {
    const PoincareState s{0.4, -0.6, 0.9, 0.3};
    const auto g = h0_poincare_gradient(s, L1);
    const double h = 1e-6;
    CHECK(g[0] == doctest::Approx(fd([&](double x) { return h0_poincare({x, s.eta, s.gamma, s.Gamma}, L1); }, s.xi, h)).epsilon(1e-8));
    CHECK(g[1] == doctest::Approx(fd([&](double x) { return h0_poincare({s.xi, x, s.gamma, s.Gamma}, L1); }, s.eta, h)).epsilon(1e-8));
    CHECK(g[2] == doctest::Approx(fd([&](double x) { return h0_poincare({s.xi, s.eta, s.gamma, x}, L1); }, s.Gamma, h)).epsilon(1e-8));

    // Hessian at the origin: diag(4/L1, -2(3 - 5 Gamma^2/L1^2)/L1).
    const double Gamma = 0.3, eps = 1e-5;
    auto H = [&](double xi, double eta) {
        return h0_poincare({xi, eta, 0.0, Gamma}, L1);
    };
    const double hxx = (H(eps, 0) - 2 * H(0, 0) + H(-eps, 0)) / (eps * eps);
    const double hee = (H(0, eps) - 2 * H(0, 0) + H(0, -eps)) / (eps * eps);
    const double hxe = (H(eps, eps) - H(eps, -eps) - H(-eps, eps) + H(-eps, -eps)) / (4 * eps * eps);
    CHECK(hxx == doctest::Approx(4.0 / L1).epsilon(1e-5));
    CHECK(hee == doctest::Approx(-2.0 * (3.0 - 5.0 * Gamma * Gamma) / L1).epsilon(1e-5));
    CHECK(hxe == doctest::Approx(0.0).epsilon(1e-5));
}

TEST_CASE("h2 harmonic decomposition") {
    const SecularParams p = test_params();
    const OctupoleConstants oct = derive_octupole_constants(p);
    for (double g1 : {0.5, 1.2, 2.8}) {
        for (double gamma : {0.0, 0.9, 2.2, -1.0}) {
            const DelaunayState s{g1, 0.7, gamma, 0.3};
            const complexd hp = h2_plus(s, p.L1, oct);
            const double recomposed =
                2.0 * std::real(hp * std::polar(1.0, gamma));
            CHECK(h2(s, p.L1, oct) == doctest::Approx(recomposed).epsilon(1e-13));
        }
    }
}

TEST_CASE("h2 partials vs finite differences") {
    const SecularParams p = test_params();
    const OctupoleConstants oct = derive_octupole_constants(p);
    const DelaunayState s{0.8, 0.7, 1.3, 0.3};
    const auto d = h2_partials(s, p.L1, oct);
    const double h = 1e-6;
    CHECK(d[0] == doctest::Approx(fd([&](double x) { return h2({x, s.G1, s.gamma, s.Gamma}, p.L1, oct); }, s.g1, h)).epsilon(1e-7));
    CHECK(d[1] == doctest::Approx(fd([&](double x) { return h2({s.g1, x, s.gamma, s.Gamma}, p.L1, oct); }, s.G1, h)).epsilon(1e-7));
    CHECK(d[2] == doctest::Approx(fd([&](double x) { return h2({s.g1, s.G1, x, s.Gamma}, p.L1, oct); }, s.gamma, h)).epsilon(1e-7));
    CHECK(d[3] == doctest::Approx(fd([&](double x) { return h2({s.g1, s.G1, s.gamma, x}, p.L1, oct); }, s.Gamma, h)).epsilon(1e-7));
    CHECK_THROWS_AS(h2_partials({0.3, p.L1, 0.0, 0.3}, p.L1, oct), DomainError);
}

TEST_CASE("perturbed poincare field matches canonical equations of full H") {
    const SecularParams p = test_params();
    const OctupoleConstants oct = derive_octupole_constants(p);
    const double mu = 1e-3;
    auto Hfull = [&](const PoincareState& q) {
        const DelaunayResult d = poincare_to_delaunay(q, p.L1);
        return h0_poincare(q, p.L1) + mu * h2(d.state, p.L1, oct);
    };
    const PoincareState s{0.5, -0.8, 0.7, 0.3};
    const auto v = perturbed_vector_field_poincare(s, mu, p.L1, oct);
    const double h = 1e-6;
    const double dxi = fd([&](double x) { return Hfull({x, s.eta, s.gamma, s.Gamma}); }, s.xi, h);
    const double deta = fd([&](double x) { return Hfull({s.xi, x, s.gamma, s.Gamma}); }, s.eta, h);
    const double dgam = fd([&](double x) { return Hfull({s.xi, s.eta, x, s.Gamma}); }, s.gamma, h);
    const double dGam = fd([&](double x) { return Hfull({s.xi, s.eta, s.gamma, x}); }, s.Gamma, h);
    CHECK(v[0] == doctest::Approx(-deta).epsilon(1e-7));
    CHECK(v[1] == doctest::Approx(dxi).epsilon(1e-7));
    CHECK(v[2] == doctest::Approx(dGam).epsilon(1e-7));
    CHECK(v[3] == doctest::Approx(-dgam).epsilon(1e-7));

    // mu = 0 reduces to the H0 field; the origin is then an equilibrium in
    // (xi, eta) with gamma winding at -2 Gamma / L1^2.
    const auto v0 = perturbed_vector_field_poincare({0.0, 0.0, 0.0, 0.3}, 0.0, p.L1, oct);
    CHECK(v0[0] == 0.0);
    CHECK(v0[1] == 0.0);
    CHECK(v0[2] == doctest::Approx(-2.0 * 0.3).epsilon(1e-15));
}

TEST_CASE("delaunay perturbed field consistency with poincare field") {
    const SecularParams p = test_params();
    const OctupoleConstants oct = derive_octupole_constants(p);
    const double mu = 5e-3;
    const DelaunayState d{0.8, 0.7, 1.3, 0.3};
    const auto vd = perturbed_vector_field(d, mu, p.L1, oct);
    const PoincareState q = delaunay_to_poincare(d, p.L1);
    const auto vq = perturbed_vector_field_poincare(q, mu, p.L1, oct);
    // Push (g1', G1') through the chart differential and compare.
    const double r = std::sqrt(2.0 * (p.L1 - d.G1));
    const double rdot = -vd[1] / r;
    const double xi_dot = rdot * std::cos(d.g1) - r * std::sin(d.g1) * vd[0];
    const double eta_dot = -rdot * std::sin(d.g1) - r * std::cos(d.g1) * vd[0];
    CHECK(vq[0] == doctest::Approx(xi_dot).epsilon(1e-11));
    CHECK(vq[1] == doctest::Approx(eta_dot).epsilon(1e-11));
    CHECK(vq[2] == doctest::Approx(vd[2]).epsilon(1e-12));
    CHECK(vq[3] == doctest::Approx(vd[3]).epsilon(1e-12));
}
