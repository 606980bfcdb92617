#include "levy2b/value2.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "engine.hpp"

namespace levy2b {

DynamicSolution solve_dynamic(const ControlGrid& controls, const GeneratorSpec& g_spec,
                              const Expr& terminal, const SpaceTimeGrid& grid,
                              int n_picard) {
    detail::Engine engine(controls, g_spec, grid, detail::Route::Kernel, n_picard);
    std::vector<double> term = sample_on_grid(terminal, grid, grid.horizon);
    DynamicSolution sol;
    sol.argmax.assign(static_cast<std::size_t>(grid.nt) * static_cast<std::size_t>(grid.nx), 0);
    sol.u = detail::sweep(engine, term, 0, grid.nt, &sol.argmax);
    return sol;
}

StaticSolution solve_static(const ControlGrid& controls, const GeneratorSpec& g_spec,
                            const Expr& terminal, const SpaceTimeGrid& grid, int n_picard) {
    StaticSolution sol;
    sol.per_control.reserve(controls.size());
    for (std::size_t c = 0; c < controls.size(); ++c)
        sol.per_control.push_back(solve_bsdej(controls[c], g_spec, terminal, grid, n_picard));
    sol.sup_at_t0.assign(static_cast<std::size_t>(grid.nx), 0.0);
    sol.argmax_at_t0.assign(static_cast<std::size_t>(grid.nx), 0);
    for (int i = 0; i < grid.nx; ++i) {
        double best = sol.per_control[0].y.at(0, i);
        std::int32_t best_c = 0;
        for (std::size_t c = 1; c < controls.size(); ++c) {
            double v = sol.per_control[c].y.at(0, i);
            if (v > best) {
                best = v;
                best_c = static_cast<std::int32_t>(c);
            }
        }
        sol.sup_at_t0[static_cast<std::size_t>(i)] = best;
        sol.argmax_at_t0[static_cast<std::size_t>(i)] = best_c;
    }
    return sol;
}

KIncrementField::KIncrementField(std::size_t n_controls, int nt, int nx)
    : n_controls_(n_controls), nt_(nt), nx_(nx),
      data_(n_controls * static_cast<std::size_t>(nt) * static_cast<std::size_t>(nx), 0.0) {}

KIncrementField k_increments(const DynamicSolution& dynamic, const ControlGrid& controls,
                             const GeneratorSpec& g_spec, const SpaceTimeGrid& grid,
                             int n_picard) {
    if (dynamic.u.n_slices() != grid.nt + 1 || dynamic.u.nx() != grid.nx)
        throw SpecError("dynamic solution does not match the grid");
    detail::Engine engine(controls, g_spec, grid, detail::Route::Kernel, n_picard);
    KIncrementField k(controls.size(), grid.nt, grid.nx);
    std::vector<std::vector<double>> cands(controls.size(),
                                           std::vector<double>(static_cast<std::size_t>(grid.nx)));
    for (int step = grid.nt - 1; step >= 0; --step) {
        engine.step(dynamic.u.slice(step + 1), grid.t(step), cands);
        for (std::size_t c = 0; c < controls.size(); ++c)
            for (int i = 0; i < grid.nx; ++i)
                k.at(c, step, i) = dynamic.u.at(step, i) - cands[c][static_cast<std::size_t>(i)];
    }
    return k;
}

MinimalityReport minimality_report(const KIncrementField& k, const SpaceTimeGrid& grid) {
    MinimalityReport report;
    report.total_by_control.assign(k.n_controls(),
                                   std::vector<double>(static_cast<std::size_t>(k.nx()), 0.0));
    report.max_total_by_control.assign(k.n_controls(), 0.0);
    double max_of_min = -std::numeric_limits<double>::infinity();
    double min_seen = std::numeric_limits<double>::infinity();
    for (int step = 0; step < k.nt(); ++step) {
        for (int i = 0; i < k.nx(); ++i) {
            double min_over_controls = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < k.n_controls(); ++c) {
                double dk = k.at(c, step, i);
                report.total_by_control[c][static_cast<std::size_t>(i)] += dk;
                min_over_controls = std::min(min_over_controls, dk);
                min_seen = std::min(min_seen, dk);
                if (dk < -1e-10) ++report.negative_violations;
            }
            max_of_min = std::max(max_of_min, min_over_controls);
        }
    }
    report.max_of_min_defect = max_of_min;
    report.min_defect = min_seen;
    for (std::size_t c = 0; c < k.n_controls(); ++c) {
        double best = 0.0;
        for (int i = 1; i + 1 < grid.nx; ++i)
            best = std::max(best, report.total_by_control[c][static_cast<std::size_t>(i)]);
        report.max_total_by_control[c] = best;
    }
    return report;
}

DppReport dpp_check(const ControlGrid& controls, const GeneratorSpec& g_spec,
                    const Expr& terminal, const SpaceTimeGrid& grid, double t1,
                    int n_picard, double x_lo, double x_hi) {
    const double dt = grid.dt();
    const double steps = t1 / dt;
    const int split = static_cast<int>(std::llround(steps));
    if (std::abs(steps - split) > 1e-9 || split <= 0 || split >= grid.nt)
        throw ConfigError("split time " + std::to_string(t1) +
                          " is not an interior mesh time");

    DppReport report;
    report.split_time = t1;
    report.split_step = split;

    DynamicSolution full = solve_dynamic(controls, g_spec, terminal, grid, n_picard);

    // two-stage replay: [t1, T] first, then [0, t1] seeded with the stage-1 slice
    detail::Engine engine(controls, g_spec, grid, detail::Route::Kernel, n_picard);
    std::vector<double> term = sample_on_grid(terminal, grid, grid.horizon);
    ValueField stage1 = detail::sweep(engine, term, split, grid.nt, nullptr);
    ValueField stage2 = detail::sweep(engine, stage1.slice(split), 0, split, nullptr);
    double fact = 0.0;
    for (int i = 0; i < grid.nx; ++i)
        fact = std::max(fact, std::abs(stage2.at(0, i) - full.u.at(0, i)));
    report.factorization_sup_diff = fact;

    // constant controls on [0, t1] against the dynamic value at the split
    SpaceTimeGrid head = grid;
    head.horizon = t1;
    head.nt = split;
    double excess = -std::numeric_limits<double>::infinity();
    double gap = 0.0;
    std::vector<double> static_sup(static_cast<std::size_t>(grid.nx),
                                   -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < controls.size(); ++c) {
        detail::Engine single(ControlGrid({controls[c]}), g_spec, head, detail::Route::Kernel,
                              n_picard);
        ValueField yc = detail::sweep(single, stage1.slice(split), 0, split, nullptr);
        for (int i = 0; i < grid.nx; ++i)
            static_sup[static_cast<std::size_t>(i)] =
                std::max(static_sup[static_cast<std::size_t>(i)], yc.at(0, i));
    }
    for (int i = 0; i < grid.nx; ++i) {
        double diff = static_sup[static_cast<std::size_t>(i)] - full.u.at(0, i);
        excess = std::max(excess, diff);
        double x = grid.x(i);
        if (x >= x_lo && x <= x_hi) gap = std::max(gap, std::abs(diff));
    }
    report.static_excess = excess;
    report.equality_gap = gap;
    return report;
}

}  // namespace levy2b
