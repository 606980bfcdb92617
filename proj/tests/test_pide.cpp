#include <doctest.h>

#include <cmath>

#include "levy2b/paths.hpp"
#include "levy2b/pide.hpp"
#include "levy2b/value2.hpp"

using namespace levy2b;

namespace {

SpaceTimeGrid auto_grid(const ControlGrid& controls, double x_lo, double x_hi, int nx,
                        double T) {
    SpaceTimeGrid g;
    g.x_min = x_lo;
    g.x_max = x_hi;
    g.nx = nx;
    g.horizon = T;
    double bound = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < controls.size(); ++c)
        bound = std::min(bound, cfl_max_dt(controls[c], g.dx()));
    g.nt = static_cast<int>(std::ceil(T / (0.9 * bound)));
    return g;
}

int node_at(const SpaceTimeGrid& g, double x) {
    return static_cast<int>(std::llround((x - g.x_min) / g.dx()));
}

double route_sup_diff(const ValueField& a, const ValueField& b) {
    double sup = 0.0;
    for (std::size_t i = 0; i < a.data().size(); ++i)
        sup = std::max(sup, std::abs(a.data()[i] - b.data()[i]));
    return sup;
}

}  // namespace

TEST_CASE("constant and affine terminals are preserved") {
    ControlGrid single({{1.0, LevyMeasure({{1.0, 0.5}})}});
    SpaceTimeGrid g = auto_grid(single, -8.0, 8.0, 321, 1.0);

    PIDESolution c3 = solve_pide(single, GeneratorSpec::zero(), Expr::parse("3"), g);
    for (double v : c3.u.data()) CHECK(v == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c3.cfl_margin >= 0.0);

    PIDESolution ident = solve_pide(single, GeneratorSpec::zero(), Expr::parse("x"), g);
    for (int i = node_at(g, -2.0); i <= node_at(g, 2.0); ++i)
        CHECK(std::abs(ident.u.at(0, i) - g.x(i)) <= 5e-3);
}

TEST_CASE("singleton jump case reproduces the second-moment closed form") {
    ControlGrid single({{1.0, LevyMeasure({{1.0, 0.5}})}});
    SpaceTimeGrid g = auto_grid(single, -8.0, 8.0, 321, 1.0);
    PIDESolution sol = solve_pide(single, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    CHECK(std::abs(sol.u.at(0, node_at(g, 0.0)) - 1.5) <= 2e-2);
}

TEST_CASE("the two routes are the same map under a single control") {
    ControlPoint c{1.0, LevyMeasure({{1.0, 0.5}})};
    ControlGrid single({c});
    SpaceTimeGrid g = auto_grid(single, -8.0, 8.0, 321, 1.0);

    PIDESolution pide = solve_pide(single, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    FieldSolution prob = solve_bsdej(c, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    CHECK(route_sup_diff(pide.u, prob.y) <= 1e-12);

    // identity must survive a full Lipschitz driver (y, z and jump terms)
    GeneratorSpec drv(0.7, 0.4, 0.3, 0.5, Expr::parse("sin(x)"));
    PIDESolution pide_d = solve_pide(single, drv, Expr::parse("x^2"), g);
    FieldSolution prob_d = solve_bsdej(c, drv, Expr::parse("x^2"), g);
    CHECK(route_sup_diff(pide_d.u, prob_d.y) <= 1e-12);
}

TEST_CASE("compare_fields basics") {
    SpaceTimeGrid g;
    g.x_min = -2.0;
    g.x_max = 2.0;
    g.nx = 5;
    g.horizon = 1.0;
    g.nt = 2;
    ValueField u1(3, 5), u2(3, 5);
    for (std::size_t i = 0; i < u1.data().size(); ++i) u1.data()[i] = 0.5 * i;
    u2 = u1;
    FieldDiff same = compare_fields(u1, u2, g, -2.0, 2.0);
    CHECK(same.sup_diff == 0.0);
    CHECK(same.l2_diff == 0.0);

    for (double& v : u2.data()) v += 1.0;
    FieldDiff one = compare_fields(u1, u2, g, -2.0, 2.0);
    CHECK(one.sup_diff == doctest::Approx(1.0));

    ValueField wrong(3, 7);
    CHECK_THROWS_AS(compare_fields(u1, wrong, g, -2, 2), SpecError);
}

TEST_CASE("analytic route tracks the dynamic route on the convex case") {
    ControlGrid two({{1.0, LevyMeasure::none()}, {2.0, LevyMeasure::none()}});
    SpaceTimeGrid g = auto_grid(two, -8.0, 8.0, 321, 1.0);
    PIDESolution pide = solve_pide(two, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    DynamicSolution dyn = solve_dynamic(two, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    FieldDiff diff = compare_fields(pide.u, dyn.u, g, -2.0, 2.0);
    CHECK(diff.sup_diff <= 2e-2);
    CHECK(std::abs(pide.u.at(0, node_at(g, 0.0)) - 2.0) <= 2e-2);
}

TEST_CASE("kinked convex terminal: routes agree and match Monte Carlo") {
    // max(x, 0) is convex, so the max-variance control is optimal and the
    // simulated optimal model supplies an independent value oracle
    ControlGrid two({{1.0, LevyMeasure::none()}, {2.0, LevyMeasure::none()}});
    SpaceTimeGrid g = auto_grid(two, -8.0, 8.0, 321, 1.0);
    Expr term = Expr::parse("max(x, 0)");
    DynamicSolution dyn = solve_dynamic(two, GeneratorSpec::zero(), term, g);
    PIDESolution pide = solve_pide(two, GeneratorSpec::zero(), term, g);
    FieldDiff diff = compare_fields(pide.u, dyn.u, g, -2.0, 2.0);
    CHECK(diff.sup_diff <= 2e-2);
    StaticSolution stat = solve_static(two, GeneratorSpec::zero(), term, g);
    for (int i = node_at(g, -2.0); i <= node_at(g, 2.0); ++i)
        CHECK(std::abs(stat.sup_at_t0[static_cast<std::size_t>(i)] - dyn.u.at(0, i)) <= 1e-2);

    McStats mc = mc_terminal(two[1], term, 0.0, 0.0, 1.0, 0.01, 100000, 31337);
    CHECK(std::abs(dyn.u.at(0, node_at(g, 0.0)) - mc.mean) <= 3.0 * mc.std_error + 5e-3);
}

TEST_CASE("gradient coupling in the driver has the documented scale") {
    // driver = kappa_z * sqrt(a) * z with an affine terminal keeps slope one,
    // so u(0, x) = x + kappa_z * sqrt(a) * T
    ControlPoint c{1.44, LevyMeasure::none()};
    ControlGrid single({c});
    SpaceTimeGrid g = auto_grid(single, -8.0, 8.0, 321, 1.0);
    GeneratorSpec drv(0.0, 0.5, 0.0, 0.5, Expr::constant(0.0));
    PIDESolution sol = solve_pide(single, drv, Expr::parse("x"), g);
    double expected = 0.5 * 1.2 * 1.0;  // kappa_z * sqrt(a) * T
    CHECK(std::abs(sol.u.at(0, node_at(g, 0.0)) - expected) <= 5e-3);
    FieldSolution prob = solve_bsdej(c, drv, Expr::parse("x"), g);
    CHECK(std::abs(prob.y.at(0, node_at(g, 0.0)) - expected) <= 5e-3);
}

TEST_CASE("scheme is monotone in the terminal condition") {
    ControlGrid two({{1.0, LevyMeasure({{0.6, 0.8}})}, {1.7, LevyMeasure::none()}});
    SpaceTimeGrid g = auto_grid(two, -6.0, 6.0, 121, 0.5);
    PIDESolution lo = solve_pide(two, GeneratorSpec::zero(), Expr::parse("cos(x)"), g);
    PIDESolution hi =
        solve_pide(two, GeneratorSpec::zero(), Expr::parse("cos(x) + abs(x)/8"), g);
    for (int n = 0; n <= g.nt; ++n)
        for (int i = 0; i < g.nx; ++i) CHECK(lo.u.at(n, i) <= hi.u.at(n, i));
}

TEST_CASE("halving dx cuts the closed-form error by at least 1.5x on both routes") {
    // off-grid mark: the two-node interpolation carries the O(dx^2) error
    ControlPoint c{1.0, LevyMeasure({{0.73, 0.5}})};
    ControlGrid single({c});
    const double closed0 = (1.0 + 0.5 * 0.73 * 0.73) * 1.0;  // u(0,0)

    auto sup_err = [&](int nx, bool analytic_route) {
        SpaceTimeGrid g = auto_grid(single, -8.0, 8.0, nx, 1.0);
        ValueField u = analytic_route
                           ? solve_pide(single, GeneratorSpec::zero(), Expr::parse("x^2"), g).u
                           : solve_bsdej(c, GeneratorSpec::zero(), Expr::parse("x^2"), g).y;
        double sup = 0.0;
        for (int i = node_at(g, -2.0); i <= node_at(g, 2.0); ++i) {
            double x = g.x(i);
            double exact = x * x + closed0;
            sup = std::max(sup, std::abs(u.at(0, i) - exact));
        }
        return sup;
    };
    for (bool analytic : {false, true}) {
        double coarse = sup_err(321, analytic);
        double fine = sup_err(641, analytic);
        MESSAGE("route ", analytic ? "pide" : "prob", ": coarse ", coarse, " fine ", fine);
        CHECK(coarse / fine >= 1.5);
    }
}

TEST_CASE("viscosity audit: smooth solutions pass, corruption is flagged") {
    ControlGrid single({{1.0, LevyMeasure({{1.0, 0.5}})}});
    SpaceTimeGrid g = auto_grid(single, -8.0, 8.0, 321, 1.0);
    PIDESolution sol = solve_pide(single, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    double tol = 1e-3 + 5.0 * (g.dt() + g.dx());
    TestFunctionFamily family;

    ViscosityReport clean =
        viscosity_audit(sol.u, g, family, single, GeneratorSpec::zero(), tol);
    CHECK(clean.violations.empty());

    ValueField bad = sol.u;
    int node = node_at(g, 0.0);
    int step = g.nt / 2;
    bad.at(step, node) += 0.5;
    ViscosityReport flagged =
        viscosity_audit(bad, g, family, single, GeneratorSpec::zero(), tol);
    bool found = false;
    for (const ViscosityViolation& v : flagged.violations)
        if (!v.super_side && std::abs(v.x - g.x(node)) <= 2 * g.dx() &&
            std::abs(v.t - g.t(step)) <= 2 * g.dt())
            found = true;
    CHECK(found);
}

TEST_CASE("viscosity audit of a genuinely two-control value field") {
    ControlGrid two({{1.0, LevyMeasure::none()}, {2.0, LevyMeasure::none()}});
    SpaceTimeGrid g = auto_grid(two, -8.0, 8.0, 321, 1.0);
    PIDESolution sol = solve_pide(two, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    double tol = 1e-3 + 5.0 * (g.dt() + g.dx());
    TestFunctionFamily family;
    ViscosityReport rep = viscosity_audit(sol.u, g, family, two, GeneratorSpec::zero(), tol);
    CHECK(rep.violations.empty());
}

TEST_CASE("viscosity audit: constant fields raise no flags") {
    ControlGrid single({{1.0, LevyMeasure::none()}});
    SpaceTimeGrid g = auto_grid(single, -4.0, 4.0, 81, 0.25);
    ValueField flat(g.nt + 1, g.nx);
    for (double& v : flat.data()) v = 5.0;
    TestFunctionFamily family;
    ViscosityReport rep =
        viscosity_audit(flat, g, family, single, GeneratorSpec::zero(), 1e-9);
    CHECK(rep.violations.empty());
}
