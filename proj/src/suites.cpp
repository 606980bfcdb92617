#include "levy2b/suites.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "levy2b/bsdej.hpp"
#include "levy2b/kernel.hpp"
#include "levy2b/paths.hpp"
#include "levy2b/pide.hpp"
#include "levy2b/value2.hpp"

namespace levy2b {

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(12);
    ss << v;
    return ss.str();
}

/// Widened copy of the grid (same dx, same dt) for the boundary-influence
/// diagnostic: pad each side by ~25% of the width, rounded to whole steps.
SpaceTimeGrid widened(const SpaceTimeGrid& grid) {
    double dx = grid.dx();
    int pad = static_cast<int>(std::ceil(0.25 * (grid.x_max - grid.x_min) / dx));
    SpaceTimeGrid wide = grid;
    wide.x_min = grid.x_min - pad * dx;
    wide.x_max = grid.x_max + pad * dx;
    wide.nx = grid.nx + 2 * pad;
    return wide;
}

double region_slice_sup_diff(std::span<const double> base, const SpaceTimeGrid& grid,
                             std::span<const double> wide_slice, const SpaceTimeGrid& wide,
                             double lo, double hi) {
    int offset = static_cast<int>(std::llround((grid.x_min - wide.x_min) / grid.dx()));
    double sup = 0.0;
    for (int i = 0; i < grid.nx; ++i) {
        double x = grid.x(i);
        if (x < lo || x > hi) continue;
        sup = std::max(sup, std::abs(base[static_cast<std::size_t>(i)] -
                                     wide_slice[static_cast<std::size_t>(i + offset)]));
    }
    return sup;
}

double interp_at(std::span<const double> slice, const SpaceTimeGrid& grid, double x) {
    return interp_clamped(slice, grid, x);
}

void export_field_csv(const std::string& path, const ValueField& u, const SpaceTimeGrid& grid) {
    std::vector<std::vector<double>> rows;
    rows.reserve(static_cast<std::size_t>(u.n_slices()) * static_cast<std::size_t>(grid.nx));
    for (int n = 0; n < u.n_slices(); ++n)
        for (int i = 0; i < grid.nx; ++i)
            rows.push_back({grid.t(n), grid.x(i), u.at(n, i)});
    write_csv(path, {"t", "x", "y"}, rows);
}

void probe_verdicts(RunReport& report, const std::string& case_name,
                    const ProblemConfig& cfg, const ValueField& u) {
    for (std::size_t k = 0; k < cfg.probe_x.size(); ++k) {
        double value = interp_at(u.slice(0), cfg.grid, cfg.probe_x[k]);
        double err = std::abs(value - cfg.probe_expected[k]);
        report.case_values(case_name)["probe_" + fmt(cfg.probe_x[k])] = value;
        report.verdict(case_name, "probe_x=" + fmt(cfg.probe_x[k]), err <= cfg.probe_tol,
                       "value " + fmt(value) + " vs expected " + fmt(cfg.probe_expected[k]) +
                           " (|err| = " + fmt(err) + ", tol " + fmt(cfg.probe_tol) + ")");
    }
}

void run_solve_prob(const ProblemConfig& cfg, RunReport& report, const std::string& csv_dir) {
    const std::string cs = "solve-prob";
    DynamicSolution dyn = solve_dynamic(cfg.controls, cfg.generator, cfg.terminal, cfg.grid,
                                        cfg.n_picard);
    StaticSolution stat = solve_static(cfg.controls, cfg.generator, cfg.terminal, cfg.grid,
                                       cfg.n_picard);

    std::vector<double> term = sample_on_grid(cfg.terminal, cfg.grid, cfg.grid.horizon);
    double term_err = 0.0;
    for (int i = 0; i < cfg.grid.nx; ++i)
        term_err = std::max(term_err, std::abs(dyn.u.at(cfg.grid.nt, i) -
                                               term[static_cast<std::size_t>(i)]));
    report.verdict(cs, "terminal_slice_exact", term_err == 0.0, "sup diff " + fmt(term_err));

    double sandwich_violation = 0.0;
    for (int i = 0; i < cfg.grid.nx; ++i) {
        double stat_sup = stat.sup_at_t0[static_cast<std::size_t>(i)];
        for (const FieldSolution& fs : stat.per_control)
            sandwich_violation = std::max(sandwich_violation, fs.y.at(0, i) - stat_sup);
        sandwich_violation = std::max(sandwich_violation, stat_sup - dyn.u.at(0, i));
    }
    report.verdict(cs, "sandwich_per_control<=static<=dynamic", sandwich_violation <= 1e-10,
                   "max violation " + fmt(sandwich_violation));

    SpaceTimeGrid wide = widened(cfg.grid);
    DynamicSolution dyn_wide =
        solve_dynamic(cfg.controls, cfg.generator, cfg.terminal, wide, cfg.n_picard);
    double binfl = region_slice_sup_diff(dyn.u.slice(0), cfg.grid, dyn_wide.u.slice(0), wide,
                                         cfg.region_lo, cfg.region_hi);
    report.case_values(cs)["boundary_influence"] = binfl;
    report.verdict(cs, "boundary_influence", binfl <= cfg.tol_boundary,
                   "solution change under domain widening " + fmt(binfl) + " (tol " +
                       fmt(cfg.tol_boundary) + ")");

    report.case_values(cs)["u_t0_at_x0"] = interp_at(dyn.u.slice(0), cfg.grid, cfg.x0);
    probe_verdicts(report, cs, cfg, dyn.u);

    if (!csv_dir.empty()) {
        export_field_csv(csv_dir + "/solve_prob_dynamic.csv", dyn.u, cfg.grid);
        std::vector<std::vector<double>> rows;
        for (int n = 0; n < cfg.grid.nt; ++n)
            for (int i = 0; i < cfg.grid.nx; ++i)
                rows.push_back({cfg.grid.t(n), cfg.grid.x(i),
                                static_cast<double>(dyn.argmax_at(n, i, cfg.grid.nx))});
        write_csv(csv_dir + "/solve_prob_argmax.csv", {"t", "x", "control"}, rows);
        for (std::size_t c = 0; c < stat.per_control.size(); ++c) {
            const FieldSolution& fs = stat.per_control[c];
            std::vector<std::vector<double>> field_rows;
            for (int n = 0; n <= cfg.grid.nt; ++n)
                for (int i = 0; i < cfg.grid.nx; ++i)
                    field_rows.push_back(
                        {cfg.grid.t(n), cfg.grid.x(i), fs.y.at(n, i), fs.z.at(n, i)});
            write_csv(csv_dir + "/solve_prob_control" + std::to_string(c) + ".csv",
                      {"t", "x", "y", "z"}, field_rows);
        }
    }
}

void run_solve_pide(const ProblemConfig& cfg, RunReport& report, const std::string& csv_dir) {
    const std::string cs = "solve-pide";
    PIDESolution sol =
        solve_pide(cfg.controls, cfg.generator, cfg.terminal, cfg.grid, cfg.n_picard);

    std::vector<double> term = sample_on_grid(cfg.terminal, cfg.grid, cfg.grid.horizon);
    double term_err = 0.0;
    for (int i = 0; i < cfg.grid.nx; ++i)
        term_err = std::max(term_err, std::abs(sol.u.at(cfg.grid.nt, i) -
                                               term[static_cast<std::size_t>(i)]));
    report.verdict(cs, "terminal_slice_exact", term_err == 0.0, "sup diff " + fmt(term_err));
    report.case_values(cs)["cfl_margin"] = sol.cfl_margin;
    report.verdict(cs, "cfl_margin_nonnegative", sol.cfl_margin >= 0.0,
                   "margin " + fmt(sol.cfl_margin));

    SpaceTimeGrid wide = widened(cfg.grid);
    PIDESolution sol_wide =
        solve_pide(cfg.controls, cfg.generator, cfg.terminal, wide, cfg.n_picard);
    double binfl = region_slice_sup_diff(sol.u.slice(0), cfg.grid, sol_wide.u.slice(0), wide,
                                         cfg.region_lo, cfg.region_hi);
    report.case_values(cs)["boundary_influence"] = binfl;
    report.verdict(cs, "boundary_influence", binfl <= cfg.tol_boundary,
                   "solution change under domain widening " + fmt(binfl) + " (tol " +
                       fmt(cfg.tol_boundary) + ")");

    report.case_values(cs)["u_t0_at_x0"] = interp_at(sol.u.slice(0), cfg.grid, cfg.x0);
    probe_verdicts(report, cs, cfg, sol.u);

    if (!csv_dir.empty()) export_field_csv(csv_dir + "/solve_pide.csv", sol.u, cfg.grid);
}

void run_compare(const ProblemConfig& cfg, RunReport& report, const std::string& csv_dir) {
    const std::string cs = "compare";
    DynamicSolution dyn = solve_dynamic(cfg.controls, cfg.generator, cfg.terminal, cfg.grid,
                                        cfg.n_picard);
    PIDESolution pide =
        solve_pide(cfg.controls, cfg.generator, cfg.terminal, cfg.grid, cfg.n_picard);
    FieldDiff diff = compare_fields(pide.u, dyn.u, cfg.grid, cfg.region_lo, cfg.region_hi);
    report.case_values(cs)["sup_diff"] = diff.sup_diff;
    report.case_values(cs)["l2_diff"] = diff.l2_diff;
    report.case_values(cs)["sup_at_t"] = diff.at_t;
    report.case_values(cs)["sup_at_x"] = diff.at_x;
    report.verdict(cs, "cross_route_sup_diff", diff.sup_diff <= cfg.tol_compare,
                   "sup diff " + fmt(diff.sup_diff) + " at (t=" + fmt(diff.at_t) +
                       ", x=" + fmt(diff.at_x) + "), tol " + fmt(cfg.tol_compare));

    for (std::size_t k = 0; k < cfg.probe_x.size(); ++k) {
        double xv = cfg.probe_x[k];
        double expected = cfg.probe_expected[k];
        double v_prob = interp_at(dyn.u.slice(0), cfg.grid, xv);
        double v_pide = interp_at(pide.u.slice(0), cfg.grid, xv);
        report.case_values(cs)["probe_prob_" + fmt(xv)] = v_prob;
        report.case_values(cs)["probe_pide_" + fmt(xv)] = v_pide;
        double err = std::max(std::abs(v_prob - expected), std::abs(v_pide - expected));
        report.verdict(cs, "probe_x=" + fmt(xv), err <= cfg.probe_tol,
                       "prob " + fmt(v_prob) + ", pide " + fmt(v_pide) + ", expected " +
                           fmt(expected) + " (tol " + fmt(cfg.probe_tol) + ")");
    }

    if (!csv_dir.empty()) {
        export_field_csv(csv_dir + "/compare_prob.csv", dyn.u, cfg.grid);
        export_field_csv(csv_dir + "/compare_pide.csv", pide.u, cfg.grid);
    }
}

void run_simulate(const ProblemConfig& cfg, RunReport& report, const std::string& csv_dir) {
    for (std::size_t c = 0; c < cfg.controls.size(); ++c) {
        const ControlPoint& ctrl = cfg.controls[c];
        const std::string cs = "simulate.control" + std::to_string(c);

        Expr identity = Expr::parse("x");
        McStats mart = mc_terminal(ctrl, identity, cfg.x0, 0.0, cfg.grid.horizon, cfg.mc_dt,
                                   cfg.n_paths, cfg.master_seed);
        report.case_values(cs)["terminal_mean"] = mart.mean;
        report.case_values(cs)["terminal_se"] = mart.std_error;
        double dev = std::abs(mart.mean - cfg.x0);
        report.verdict(cs, "martingale_3se", dev <= 3.0 * mart.std_error,
                       "|mean - x0| = " + fmt(dev) + ", 3*SE = " + fmt(3.0 * mart.std_error));

        McStats gstat = mc_terminal(ctrl, cfg.terminal, cfg.x0, 0.0, cfg.grid.horizon,
                                    cfg.mc_dt, cfg.n_paths, cfg.master_seed + 1);
        report.case_values(cs)["terminal_g_mean"] = gstat.mean;
        report.case_values(cs)["terminal_g_se"] = gstat.std_error;

        const GeneratorSpec& g = cfg.generator;
        auto gamma = [&g](double e) { return g.slope(e); };
        bool gamma_ok = true;
        for (const LevyAtom& at : ctrl.nu.atoms())
            gamma_ok = gamma_ok && gamma(at.mark) > -1.0;
        if (gamma_ok) {
            McStats dol = mc_doleans(ctrl, cfg.doleans_eta, gamma, cfg.grid.horizon,
                                     cfg.mc_dt, cfg.n_paths, cfg.master_seed + 2);
            report.case_values(cs)["doleans_mean"] = dol.mean;
            report.case_values(cs)["doleans_se"] = dol.std_error;
            report.verdict(cs, "doleans_martingale_3se",
                           std::abs(dol.mean - 1.0) <= 3.0 * dol.std_error,
                           "|mean - 1| = " + fmt(std::abs(dol.mean - 1.0)) +
                               ", 3*SE = " + fmt(3.0 * dol.std_error));
        } else {
            report.verdict(cs, "doleans_martingale_3se", false,
                           "generator slope not > -1 on every atom");
        }

        // moment bound across nested gaps, constant calibrated at the coarsest
        const std::vector<double> gaps = {0.1, 0.2, 0.4, 0.8};
        std::int64_t n_exc = std::min<std::int64_t>(cfg.n_paths, 20000);
        std::vector<McStats> est;
        est.reserve(gaps.size());
        for (std::size_t gi = 0; gi < gaps.size(); ++gi)
            est.push_back(mc_sup_excursion(ctrl, 0.0, gaps[gi], 2e-3, n_exc,
                                           cfg.master_seed + 10 + gi));
        double cal = (est.back().mean + 3.0 * est.back().std_error) / gaps.back();
        bool fits = true;
        std::string detail = "C = " + fmt(cal);
        for (std::size_t gi = 0; gi + 1 < gaps.size(); ++gi) {
            double bound = cal * gaps[gi] + 3.0 * est[gi].std_error;
            fits = fits && est[gi].mean <= bound;
            detail += "; gap " + fmt(gaps[gi]) + ": " + fmt(est[gi].mean) + " <= " + fmt(bound);
        }
        report.case_values(cs)["moment_constant"] = cal;
        report.verdict(cs, "moment_estimate_linear_bound", fits, detail);

        if (!csv_dir.empty() && c == 0) {
            std::vector<std::vector<double>> rows;
            std::int64_t n_rows = std::min<std::int64_t>(cfg.n_paths, 10000);
            for (std::int64_t i = 0; i < n_rows; ++i) {
                PathSample p = simulate_path(ctrl, cfg.x0, 0.0, cfg.grid.horizon, cfg.mc_dt,
                                             {cfg.master_seed, static_cast<std::uint64_t>(i)});
                QvBreakdown qv = pathwise_qv(p);
                rows.push_back({static_cast<double>(i), p.terminal_state(),
                                static_cast<double>(p.jumps().size()), qv.total_qv,
                                qv.jump_qv, qv.continuous_density_est});
            }
            write_csv(csv_dir + "/simulate_paths.csv",
                      {"path", "terminal", "n_jumps", "total_qv", "jump_qv", "density_est"},
                      rows);
        }
    }
    if (!csv_dir.empty()) {
        std::vector<std::vector<double>> agg;
        for (std::size_t c = 0; c < cfg.controls.size(); ++c) {
            const std::string cs = "simulate.control" + std::to_string(c);
            const auto& vals = report.case_values(cs);
            agg.push_back({static_cast<double>(c), vals["terminal_mean"].get<double>(),
                           vals["terminal_se"].get<double>(),
                           vals["terminal_g_mean"].get<double>(),
                           vals["terminal_g_se"].get<double>()});
        }
        write_csv(csv_dir + "/simulate_aggregates.csv",
                  {"control", "terminal_mean", "terminal_se", "g_mean", "g_se"}, agg);
    }
}

void run_fenchel(const ProblemConfig& cfg, RunReport& report, const std::string&) {
    const std::string cs = "fenchel";

    // quadratic conjugate: h(gamma) = gamma^2/4 has conjugate a^2/4 at gamma = a
    std::vector<double> gamma_grid;
    for (double gamma = -4.0; gamma <= 4.0 + 1e-12; gamma += 1e-3) gamma_grid.push_back(gamma);
    std::vector<std::vector<double>> trivial_vbar = {{}};
    LevyMeasure no_jumps;
    auto h_quad = [](double gamma, std::span<const double>) { return 0.25 * gamma * gamma; };
    bool quad_ok = true;
    std::string quad_detail;
    for (std::size_t c = 0; c < cfg.controls.size(); ++c) {
        double a = cfg.controls[c].a;
        if (a > 4.0) continue;  // grid covers gamma* = a only up to 4
        double got = fenchel_conjugate(h_quad, gamma_grid, trivial_vbar, a, no_jumps);
        double expected = 0.25 * a * a;
        quad_ok = quad_ok && std::abs(got - expected) <= 1e-6;
        quad_detail += "a=" + fmt(a) + ": " + fmt(got) + " vs " + fmt(expected) + "; ";
    }
    report.verdict(cs, "quadratic_conjugate", quad_ok, quad_detail);

    // grid refinement never decreases the supremum (superset grids)
    std::mt19937_64 rng(cfg.master_seed + 77);
    std::uniform_real_distribution<double> alpha_d(0.2, 2.0), beta_d(-1.0, 1.0);
    bool mono_ok = true;
    bool below_closed_form = true;
    for (int trial = 0; trial < 10; ++trial) {
        double alpha = alpha_d(rng);
        double beta = beta_d(rng);
        auto h = [alpha, beta](double gamma, std::span<const double>) {
            return alpha * gamma * gamma + beta * gamma;
        };
        std::vector<double> coarse, fine;
        for (double gamma = -6.0; gamma <= 6.0 + 1e-12; gamma += 0.01) coarse.push_back(gamma);
        fine = coarse;
        for (double gamma = -6.0 + 0.005; gamma <= 6.0; gamma += 0.01) fine.push_back(gamma);
        double a = cfg.controls[trial % cfg.controls.size()].a;
        double f_coarse = fenchel_conjugate(h, coarse, trivial_vbar, a, no_jumps);
        double f_fine = fenchel_conjugate(h, fine, trivial_vbar, a, no_jumps);
        double closed = (0.5 * a - beta) * (0.5 * a - beta) / (4.0 * alpha);
        mono_ok = mono_ok && f_fine >= f_coarse;
        below_closed_form = below_closed_form && f_coarse <= closed + 1e-12 &&
                            f_fine <= closed + 1e-12 && f_fine >= closed - 1e-3;
    }
    report.verdict(cs, "refinement_monotone", mono_ok, "10 randomized convex instances");
    report.verdict(cs, "below_closed_form", below_closed_form,
                   "grid suprema converge to the analytic conjugate from below");

    // convexity in a by midpoint inequality (sup of affine maps)
    auto h_mix = [](double gamma, std::span<const double> vbar) {
        double s = 0.5 * gamma * gamma;
        for (double v : vbar) s += 0.3 * v * v;
        return s;
    };
    const LevyMeasure* nu = &no_jumps;
    for (std::size_t c = 0; c < cfg.controls.size(); ++c)
        if (!cfg.controls[c].nu.empty()) nu = &cfg.controls[c].nu;
    std::vector<std::vector<double>> vbar_grid;
    if (nu->empty())
        vbar_grid = trivial_vbar;
    else {
        for (double v : {-1.0, -0.5, 0.0, 0.5, 1.0})
            vbar_grid.push_back(std::vector<double>(nu->size(), v));
    }
    bool convex_ok = true;
    std::uniform_real_distribution<double> a_d(0.5, 3.0);
    for (int trial = 0; trial < 10; ++trial) {
        double a1 = a_d(rng), a2 = a_d(rng);
        double f1 = fenchel_conjugate(h_mix, gamma_grid, vbar_grid, a1, *nu);
        double f2 = fenchel_conjugate(h_mix, gamma_grid, vbar_grid, a2, *nu);
        double fm = fenchel_conjugate(h_mix, gamma_grid, vbar_grid, 0.5 * (a1 + a2), *nu);
        convex_ok = convex_ok && fm <= 0.5 * (f1 + f2) + 1e-12;
    }
    report.verdict(cs, "convex_in_a_midpoint", convex_ok, "10 randomized midpoint triples");
}

void run_check_viscosity(const ProblemConfig& cfg, RunReport& report, const std::string&) {
    const std::string cs = "check-viscosity";
    PIDESolution sol =
        solve_pide(cfg.controls, cfg.generator, cfg.terminal, cfg.grid, cfg.n_picard);
    double tol = 1e-3 + 5.0 * (cfg.grid.dt() + cfg.grid.dx());
    TestFunctionFamily family;
    ViscosityReport audit =
        viscosity_audit(sol.u, cfg.grid, family, cfg.controls, cfg.generator, tol);
    report.case_values(cs)["tol"] = tol;
    report.case_values(cs)["extrema_checked"] = audit.extrema_checked;
    report.case_values(cs)["violations"] = audit.violations.size();
    nlohmann::json records = nlohmann::json::array();
    for (const ViscosityViolation& v : audit.violations) {
        nlohmann::json rec;
        rec["t"] = v.t;
        rec["x"] = v.x;
        rec["center"] = v.center;
        rec["curvature"] = v.curvature;
        rec["time_slope"] = v.time_slope;
        rec["residual"] = v.residual;
        rec["side"] = v.super_side ? "super" : "sub";
        records.push_back(std::move(rec));
    }
    report.case_values(cs)["violation_records"] = std::move(records);
    report.verdict(cs, "zero_violations", audit.violations.empty(),
                   fmt(static_cast<double>(audit.violations.size())) + " violations at tol " +
                       fmt(tol) + " (" + fmt(static_cast<double>(audit.extrema_checked)) +
                       " touching extrema checked)");

    // detector sanity: a one-node corruption must be flagged at that node
    ValueField corrupted = sol.u;
    int node = static_cast<int>(std::llround((0.0 - cfg.grid.x_min) / cfg.grid.dx()));
    node = std::clamp(node, 1, cfg.grid.nx - 2);
    int step = std::clamp(cfg.grid.nt / 2, 1, cfg.grid.nt - 1);
    corrupted.at(step, node) += 0.5;
    ViscosityReport audit2 =
        viscosity_audit(corrupted, cfg.grid, family, cfg.controls, cfg.generator, tol);
    bool found = false;
    for (const ViscosityViolation& v : audit2.violations)
        if (!v.super_side && std::abs(v.x - cfg.grid.x(node)) <= 2 * cfg.grid.dx() &&
            std::abs(v.t - cfg.grid.t(step)) <= 2 * cfg.grid.dt())
            found = true;
    report.verdict(cs, "corruption_detected", found,
                   "sub-solution violation at the corrupted node (" +
                       fmt(static_cast<double>(audit2.violations.size())) + " flags)");
}

void run_dpp_check(const ProblemConfig& cfg, RunReport& report, const std::string&) {
    const std::string cs = "dpp-check";
    DppReport dpp = dpp_check(cfg.controls, cfg.generator, cfg.terminal, cfg.grid,
                              cfg.resolved_split_time(), cfg.n_picard, cfg.region_lo,
                              cfg.region_hi);
    report.case_values(cs)["split_time"] = dpp.split_time;
    report.case_values(cs)["factorization_sup_diff"] = dpp.factorization_sup_diff;
    report.case_values(cs)["static_excess"] = dpp.static_excess;
    report.case_values(cs)["equality_gap"] = dpp.equality_gap;
    report.verdict(cs, "two_stage_factorization", dpp.factorization_sup_diff <= 1e-12,
                   "sup diff " + fmt(dpp.factorization_sup_diff));
    report.verdict(cs, "static_below_dynamic", dpp.static_excess <= 1e-10,
                   "max excess " + fmt(dpp.static_excess));
    report.verdict(cs, "static_equals_dynamic", dpp.equality_gap <= cfg.tol_dpp_equality,
                   "gap " + fmt(dpp.equality_gap) + " (tol " + fmt(cfg.tol_dpp_equality) + ")");
}

void run_minimality(const ProblemConfig& cfg, RunReport& report, const std::string& csv_dir) {
    const std::string cs = "minimality";
    DynamicSolution dyn = solve_dynamic(cfg.controls, cfg.generator, cfg.terminal, cfg.grid,
                                        cfg.n_picard);
    KIncrementField k = k_increments(dyn, cfg.controls, cfg.generator, cfg.grid, cfg.n_picard);
    MinimalityReport min = minimality_report(k, cfg.grid);
    report.case_values(cs)["max_of_min_defect"] = min.max_of_min_defect;
    report.case_values(cs)["min_defect"] = min.min_defect;
    report.case_values(cs)["negative_violations"] = min.negative_violations;
    for (std::size_t c = 0; c < min.max_total_by_control.size(); ++c)
        report.case_values(cs)["max_total_control" + std::to_string(c)] =
            min.max_total_by_control[c];
    report.verdict(cs, "min_defect_zero", min.max_of_min_defect <= 1e-10,
                   "max over nodes of min over controls = " + fmt(min.max_of_min_defect));
    report.verdict(cs, "no_negative_increments", min.negative_violations == 0,
                   fmt(static_cast<double>(min.negative_violations)) +
                       " increments below -1e-10 (most negative " + fmt(min.min_defect) + ")");
    if (cfg.k_positive_min > 0.0) {
        double best = 0.0;
        for (double v : min.max_total_by_control) best = std::max(best, v);
        report.verdict(cs, "suboptimal_total_positive", best >= cfg.k_positive_min,
                       "max accumulated defect " + fmt(best) + " (required >= " +
                           fmt(cfg.k_positive_min) + ")");
    }
    if (!csv_dir.empty()) {
        std::vector<std::vector<double>> rows;
        for (int i = 0; i < cfg.grid.nx; ++i) {
            std::vector<double> row = {cfg.grid.x(i)};
            for (std::size_t c = 0; c < k.n_controls(); ++c)
                row.push_back(min.total_by_control[c][static_cast<std::size_t>(i)]);
            rows.push_back(std::move(row));
        }
        std::vector<std::string> header = {"x"};
        for (std::size_t c = 0; c < k.n_controls(); ++c)
            header.push_back("total_K_control" + std::to_string(c));
        write_csv(csv_dir + "/minimality_totals.csv", header, rows);
    }
}

}  // namespace

std::optional<Suite> suite_from_name(std::string_view name) {
    if (name == "solve-pide") return Suite::SolvePide;
    if (name == "solve-prob") return Suite::SolveProb;
    if (name == "compare") return Suite::Compare;
    if (name == "simulate") return Suite::Simulate;
    if (name == "fenchel") return Suite::Fenchel;
    if (name == "check-viscosity") return Suite::CheckViscosity;
    if (name == "dpp-check") return Suite::DppCheck;
    if (name == "minimality") return Suite::Minimality;
    if (name == "all") return Suite::All;
    return std::nullopt;
}

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "solve-pide", "solve-prob", "compare",   "simulate",  "fenchel",
        "check-viscosity", "dpp-check", "minimality", "all"};
    return names;
}

RunReport run_suite(const ProblemConfig& cfg, Suite suite, const std::string& csv_dir) {
    const char* suite_name = "";
    switch (suite) {
        case Suite::SolvePide: suite_name = "solve-pide"; break;
        case Suite::SolveProb: suite_name = "solve-prob"; break;
        case Suite::Compare: suite_name = "compare"; break;
        case Suite::Simulate: suite_name = "simulate"; break;
        case Suite::Fenchel: suite_name = "fenchel"; break;
        case Suite::CheckViscosity: suite_name = "check-viscosity"; break;
        case Suite::DppCheck: suite_name = "dpp-check"; break;
        case Suite::Minimality: suite_name = "minimality"; break;
        case Suite::All: suite_name = "all"; break;
    }
    RunReport report(suite_name, cfg.digest, cfg.master_seed);
    auto start = std::chrono::steady_clock::now();

    auto run_one = [&](Suite s) {
        try {
            switch (s) {
                case Suite::SolvePide: run_solve_pide(cfg, report, csv_dir); break;
                case Suite::SolveProb: run_solve_prob(cfg, report, csv_dir); break;
                case Suite::Compare: run_compare(cfg, report, csv_dir); break;
                case Suite::Simulate: run_simulate(cfg, report, csv_dir); break;
                case Suite::Fenchel: run_fenchel(cfg, report, csv_dir); break;
                case Suite::CheckViscosity: run_check_viscosity(cfg, report, csv_dir); break;
                case Suite::DppCheck: run_dpp_check(cfg, report, csv_dir); break;
                case Suite::Minimality: run_minimality(cfg, report, csv_dir); break;
                case Suite::All: break;
            }
        } catch (const std::exception& e) {
            // configuration/spec problems become failed verdicts, not crashes
            report.verdict("suite", "completed_without_errors", false, e.what());
        }
    };

    if (suite == Suite::All) {
        for (Suite s : {Suite::SolveProb, Suite::SolvePide, Suite::Compare, Suite::Simulate,
                        Suite::Fenchel, Suite::CheckViscosity, Suite::DppCheck,
                        Suite::Minimality})
            run_one(s);
    } else {
        run_one(suite);
    }

    auto end = std::chrono::steady_clock::now();
    report.set_wall_time(std::chrono::duration<double>(end - start).count());
    return report;
}

}  // namespace levy2b
