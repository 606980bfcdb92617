#include <doctest.h>

#include <cmath>
#include <random>

#include "levy2b/bsdej.hpp"
#include "levy2b/kernel.hpp"
#include "levy2b/paths.hpp"

using namespace levy2b;

namespace {

SpaceTimeGrid make_grid(double x_lo, double x_hi, int nx, double T, int nt) {
    SpaceTimeGrid g;
    g.x_min = x_lo;
    g.x_max = x_hi;
    g.nx = nx;
    g.horizon = T;
    g.nt = nt;
    return g;
}

// auto time mesh at 90% of the stability bound
SpaceTimeGrid auto_grid(const ControlPoint& c, double x_lo, double x_hi, int nx, double T) {
    SpaceTimeGrid g = make_grid(x_lo, x_hi, nx, T, 1);
    g.nt = static_cast<int>(std::ceil(T / (0.9 * cfl_max_dt(c, g.dx()))));
    return g;
}

const SpaceTimeGrid kRefGrid = make_grid(-8.0, 8.0, 321, 1.0, 900);

}  // namespace

TEST_CASE("cfl bound formula") {
    CHECK(cfl_max_dt({1.0, LevyMeasure::none()}, 0.1) == doctest::Approx(0.01));
    CHECK(cfl_max_dt({1.0, LevyMeasure({{0.01, 100.0}})}, 0.1) == doctest::Approx(1.0 / 200.0));
    CHECK(cfl_max_dt({2.0, LevyMeasure::none()}, 0.1) == doctest::Approx(0.005));
}

TEST_CASE("kernel rows: trinomial weights, jump interpolation, stochasticity") {
    SpaceTimeGrid g = make_grid(-8.0, 8.0, 161, 1.0, 200);  // dx = 0.1, dt = 0.005
    ControlPoint diff_only{1.0, LevyMeasure::none()};
    TransitionKernel k = build_kernel(diff_only, g);
    auto row = k.row(80);
    CHECK(row.size() == 3);
    CHECK(row[79] == doctest::Approx(0.25));
    CHECK(row[80] == doctest::Approx(0.5));
    CHECK(row[81] == doctest::Approx(0.25));

    // jump e = 0.15 on a dx = 0.1 grid: mass split 0.5/0.5 between +0.1, +0.2
    ControlPoint with_jump{1.0, LevyMeasure({{0.15, 2.0}})};
    SpaceTimeGrid gj = auto_grid(with_jump, -8.0, 8.0, 161, 1.0);
    TransitionKernel kj = build_kernel(with_jump, gj);
    REQUIRE(kj.legs().size() == 1);
    CHECK(kj.legs()[0].offset == 1);
    CHECK(kj.legs()[0].w_lo == doctest::Approx(0.5));
    CHECK(kj.legs()[0].w_hi == doctest::Approx(0.5));

    // rows are probability distributions with zero mean in the clamp-free interior
    ControlPoint mixed{1.3, LevyMeasure({{0.15, 0.5}, {-0.34, 1.2}})};
    SpaceTimeGrid gm = auto_grid(mixed, -8.0, 8.0, 161, 1.0);
    TransitionKernel km = build_kernel(mixed, gm);
    for (int i = 1; i < gm.nx - 1; ++i) {
        auto r = km.row(i);
        double total = 0.0;
        double mean = 0.0;
        bool clamped = false;
        for (auto [j, p] : r) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
            total += p;
            mean += p * (gm.x(j) - gm.x(i));
            if (j == 0 || j == gm.nx - 1) clamped = true;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        if (!clamped) CHECK(std::abs(mean) <= 1e-12);
    }
}

TEST_CASE("kernel apply agrees with materialized rows") {
    ControlPoint c{0.9, LevyMeasure({{0.73, 0.8}, {-0.2, 2.0}})};
    SpaceTimeGrid g = auto_grid(c, -4.0, 4.0, 81, 0.5);
    TransitionKernel k = build_kernel(c, g);
    std::vector<double> src(81), dst(81);
    for (int i = 0; i < 81; ++i) src[static_cast<std::size_t>(i)] = std::sin(0.3 * i) + 0.01 * i * i;
    k.apply(src, dst);
    for (int i = 0; i < 81; ++i) {
        double expect = 0.0;
        for (auto [j, p] : k.row(i)) expect += p * src[static_cast<std::size_t>(j)];
        CHECK(dst[static_cast<std::size_t>(i)] == doctest::Approx(expect).epsilon(1e-13));
    }
}

TEST_CASE("CFL violations are configuration errors naming the bound") {
    ControlPoint c{1.0, LevyMeasure::none()};
    SpaceTimeGrid g = make_grid(-8.0, 8.0, 161, 1.0, 50);  // dt = 0.02 > 0.01
    CHECK_THROWS_AS(build_kernel(c, g), ConfigError);
    try {
        build_kernel(c, g);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("max admissible") != std::string::npos);
    }

    // Dt-independent monotonicity limit: |sum lambda e| > a/dx
    ControlPoint drifty{0.1, LevyMeasure({{2.0, 1.0}})};
    SpaceTimeGrid gd = auto_grid(drifty, -8.0, 8.0, 161, 1.0);
    CHECK_THROWS_AS(build_kernel(drifty, gd), ConfigError);
}

TEST_CASE("backward_step building blocks") {
    ControlPoint c{1.0, LevyMeasure({{0.3, 1.0}})};
    SpaceTimeGrid g = auto_grid(c, -8.0, 8.0, 161, 1.0);

    // zero driver keeps constants
    std::vector<double> sevens(static_cast<std::size_t>(g.nx), 7.0);
    StepResult r = backward_step(GeneratorSpec::zero(), c, sevens, 0.5, g);
    for (double v : r.y) CHECK(v == doctest::Approx(7.0).epsilon(1e-12));

    // driver == 1 advances interior nodes by dt; boundary rows are held
    GeneratorSpec one(0.0, 0.0, 0.0, 0.5, Expr::parse("1"));
    std::vector<double> zeros(static_cast<std::size_t>(g.nx), 0.0);
    StepResult r1 = backward_step(one, c, zeros, 0.5, g);
    for (int i = 1; i < g.nx - 1; ++i)
        CHECK(r1.y[static_cast<std::size_t>(i)] == doctest::Approx(g.dt()).epsilon(1e-12));
    CHECK(r1.y.front() == 0.0);
    CHECK(r1.y.back() == 0.0);

    // mean-zero rows preserve affine slices away from boundary clamping
    std::vector<double> ident(static_cast<std::size_t>(g.nx));
    for (int i = 0; i < g.nx; ++i) ident[static_cast<std::size_t>(i)] = g.x(i);
    StepResult r2 = backward_step(GeneratorSpec::zero(), c, ident, 0.5, g);
    TransitionKernel kernel = build_kernel(c, g);
    int reach = 0;
    for (const auto& leg : kernel.legs()) reach = std::max(reach, std::abs(leg.offset) + 2);
    for (int i = reach; i < g.nx - reach; ++i)
        CHECK(r2.y[static_cast<std::size_t>(i)] ==
              doctest::Approx(g.x(i)).epsilon(1e-12).scale(1.0));

    // z is the central difference of the next slice, u the jump read
    std::vector<double> quad(static_cast<std::size_t>(g.nx));
    for (int i = 0; i < g.nx; ++i) quad[static_cast<std::size_t>(i)] = g.x(i) * g.x(i);
    StepResult r3 = backward_step(GeneratorSpec::zero(), c, quad, 0.5, g);
    int mid = g.nx / 2;
    CHECK(r3.z[static_cast<std::size_t>(mid)] == doctest::Approx(2.0 * g.x(mid)));
    REQUIRE(r3.u.size() == 1);
    double read = interp_clamped(quad, g, g.x(mid) + 0.3);
    CHECK(r3.u[0][static_cast<std::size_t>(mid)] ==
          doctest::Approx(read - quad[static_cast<std::size_t>(mid)]).epsilon(1e-12));
}

TEST_CASE("backward_step equals the kernel-apply + driver composition") {
    // independent assembly: apply the materialized kernel, read z/u off the
    // next slice, then add dt * driver with the same Picard refreshes
    ControlPoint c{1.3, LevyMeasure({{0.73, 0.6}, {-0.4, 1.1}})};
    SpaceTimeGrid g = auto_grid(c, -6.0, 6.0, 121, 0.5);
    GeneratorSpec drv(0.8, -0.4, 0.3, 0.5, Expr::parse("sin(x) + t/2"));
    TransitionKernel kernel = build_kernel(c, g);

    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    std::vector<double> next(static_cast<std::size_t>(g.nx));
    for (double& v : next) v = d(rng);
    const double t = 0.125;

    for (int n_picard : {1, 2, 3}) {
        StepResult got = backward_step(drv, c, next, t, g, n_picard);

        std::vector<double> base(next.size());
        kernel.apply(next, base);
        std::vector<double> manual = base;
        std::vector<double> y_arg = next;
        for (int pass = 0; pass < n_picard; ++pass) {
            for (int i = 1; i + 1 < g.nx; ++i) {
                auto idx = static_cast<std::size_t>(i);
                double z = (next[idx + 1] - next[idx - 1]) / (2.0 * g.dx());
                std::vector<double> u_vals;
                for (const LevyAtom& at : c.nu.atoms())
                    u_vals.push_back(interp_clamped(next, g, g.x(i) + at.mark) - next[idx]);
                manual[idx] = base[idx] + g.dt() * eval_generator(drv, t, g.x(i), y_arg[idx],
                                                                 z, u_vals, c);
            }
            y_arg = manual;
        }
        manual.front() = next.front();
        manual.back() = next.back();
        for (std::size_t i = 0; i < next.size(); ++i)
            CHECK(got.y[i] == doctest::Approx(manual[i]).epsilon(1e-13).scale(1.0));
    }
}

TEST_CASE("solve_bsdej martingale and affine identities") {
    ControlPoint c{1.0, LevyMeasure({{1.0, 0.5}})};
    FieldSolution affine = solve_bsdej(c, GeneratorSpec::zero(), Expr::parse("x"), kRefGrid);
    CHECK(std::abs(affine.y.at(0, 160)) <= 5e-3);  // x = 0

    FieldSolution quad = solve_bsdej(c, GeneratorSpec::zero(), Expr::parse("x^2"), kRefGrid);
    CHECK(std::abs(quad.y.at(0, 160) - 1.5) <= 2e-2);  // (a + sum lambda e^2) T
}

TEST_CASE("solve_bsdej linear-in-y driver grows exponentially") {
    // driver = y: value e^{kappa_y T} * E[g]; for a=1, g=x^2, T=1 this is e
    ControlPoint c{1.0, LevyMeasure::none()};
    GeneratorSpec lin(1.0, 0.0, 0.0, 0.5, Expr::constant(0.0));
    SpaceTimeGrid g = auto_grid(c, -8.0, 8.0, 321, 1.0);
    FieldSolution sol = solve_bsdej(c, lin, Expr::parse("x^2"), g);
    CHECK(std::abs(sol.y.at(0, 160) - std::exp(1.0)) <= 3e-2);
}

TEST_CASE("solve_bsdej agrees with Monte Carlo for a zero driver") {
    ControlPoint c{1.0, LevyMeasure({{1.0, 0.5}})};
    FieldSolution sol = solve_bsdej(c, GeneratorSpec::zero(), Expr::parse("x^2"), kRefGrid);
    McStats mc = mc_terminal(c, Expr::parse("x^2"), 0.0, 0.0, 1.0, 0.01, 50000, 2026);
    CHECK(std::abs(sol.y.at(0, 160) - mc.mean) <= 3.0 * mc.std_error + 1e-2);
}

TEST_CASE("the driver integrates h0 at the left endpoint of each step") {
    // f = h0(t) = t with an affine terminal: the accrued integral is the
    // left-endpoint sum dt^2 * (0 + 1 + ... + nt-1) = T^2/2 * (1 - 1/nt),
    // exact up to an exponentially small boundary influence
    ControlPoint c{1.0, LevyMeasure::none()};
    SpaceTimeGrid g = auto_grid(c, -8.0, 8.0, 321, 1.0);
    GeneratorSpec drv(0.0, 0.0, 0.0, 0.5, Expr::parse("t"));
    FieldSolution sol = solve_bsdej(c, drv, Expr::parse("x"), g);
    double expected = 0.5 * (1.0 - 1.0 / g.nt);
    CHECK(std::abs(sol.y.at(0, 160) - expected) <= 1e-8);
}

TEST_CASE("comparison and constant-shift structure") {
    ControlPoint c{1.0, LevyMeasure({{0.4, 1.0}})};
    SpaceTimeGrid g = auto_grid(c, -6.0, 6.0, 121, 0.5);

    Expr g1 = Expr::parse("max(x, 0)");
    Expr g2 = Expr::parse("max(x, 0) + 1 + abs(sin(3*x))");
    FieldSolution lo = solve_bsdej(c, GeneratorSpec::zero(), g1, g);
    FieldSolution hi = solve_bsdej(c, GeneratorSpec::zero(), g2, g);
    for (int n = 0; n <= g.nt; ++n)
        for (int i = 0; i < g.nx; ++i) CHECK(lo.y.at(n, i) <= hi.y.at(n, i));

    // monotonicity survives a y-dependent Lipschitz driver
    GeneratorSpec drv(0.8, 0.0, 0.0, 0.5, Expr::constant(0.0));
    FieldSolution lo_d = solve_bsdej(c, drv, g1, g);
    FieldSolution hi_d = solve_bsdej(c, drv, g2, g);
    for (int i = 0; i < g.nx; ++i) CHECK(lo_d.y.at(0, i) <= hi_d.y.at(0, i));

    FieldSolution shifted = solve_bsdej(
        c, GeneratorSpec::zero(), Expr::parse("max(x, 0) + 5"), g);
    for (int n = 0; n <= g.nt; ++n)
        for (int i = 0; i < g.nx; ++i)
            CHECK(shifted.y.at(n, i) - lo.y.at(n, i) == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("stored u-field satisfies the reconstruction identity") {
    ControlPoint c{1.0, LevyMeasure({{0.73, 0.6}, {-0.4, 1.1}})};
    SpaceTimeGrid g = auto_grid(c, -6.0, 6.0, 121, 0.5);
    FieldSolution sol = solve_bsdej(c, GeneratorSpec::zero(), Expr::parse("x^2"), g);
    REQUIRE(sol.u.size() == 2);
    for (int n = 0; n <= g.nt; n += g.nt / 4) {
        auto y = sol.y.slice(n);
        for (int i = 0; i < g.nx; ++i) {
            for (std::size_t k = 0; k < sol.u.size(); ++k) {
                double mark = c.nu.atoms()[k].mark;
                double expect = interp_clamped(y, g, g.x(i) + mark) -
                                y[static_cast<std::size_t>(i)];
                CHECK(sol.u[k].at(n, i) == doctest::Approx(expect).epsilon(1e-11).scale(1.0));
            }
        }
    }
}

TEST_CASE("solution obeys the explicit a priori bound") {
    // sup|y| <= e^{LT}(sup|g| + T sup|h0|) with L = max(|kappa_y|, |kappa_z|)
    ControlPoint c{1.0, LevyMeasure({{0.5, 0.8}})};
    SpaceTimeGrid g = auto_grid(c, -8.0, 8.0, 161, 1.0);
    GeneratorSpec drv(0.5, 0.3, 0.2, 0.5, Expr::parse("sin(x) + 0.5*t"));
    FieldSolution sol = solve_bsdej(c, drv, Expr::parse("max(x, 0)"), g);
    double sup_y = 0.0;
    for (double v : sol.y.data()) sup_y = std::max(sup_y, std::abs(v));
    double bound = std::exp(0.5 * 1.0) * (8.0 + 1.0 * 1.5);
    CHECK(sup_y <= bound * (1.0 + 1e-9));
}
