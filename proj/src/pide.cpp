#include "levy2b/pide.hpp"

#include <cmath>
#include <limits>

#include "engine.hpp"
#include "levy2b/kernel.hpp"

namespace levy2b {

PIDESolution solve_pide(const ControlGrid& controls, const GeneratorSpec& g_spec,
                        const Expr& terminal, const SpaceTimeGrid& grid, int n_picard) {
    detail::Engine engine(controls, g_spec, grid, detail::Route::Derivative, n_picard);
    std::vector<double> term = sample_on_grid(terminal, grid, grid.horizon);
    PIDESolution sol;
    sol.u = detail::sweep(engine, term, 0, grid.nt, nullptr);
    double margin = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < controls.size(); ++c) {
        double bound = cfl_max_dt(controls[c], grid.dx());
        margin = std::min(margin, (bound - grid.dt()) / bound);
    }
    sol.cfl_margin = margin;
    return sol;
}

FieldDiff compare_fields(const ValueField& u1, const ValueField& u2,
                         const SpaceTimeGrid& grid, double x_lo, double x_hi) {
    if (u1.n_slices() != u2.n_slices() || u1.nx() != u2.nx() || u1.nx() != grid.nx)
        throw SpecError("compare_fields requires fields on the same grid");
    FieldDiff diff;
    double sum_sq = 0.0;
    std::int64_t count = 0;
    for (int n = 0; n < u1.n_slices(); ++n) {
        for (int i = 0; i < grid.nx; ++i) {
            double x = grid.x(i);
            if (x < x_lo || x > x_hi) continue;
            double d = std::abs(u1.at(n, i) - u2.at(n, i));
            sum_sq += d * d;
            ++count;
            if (d > diff.sup_diff) {
                diff.sup_diff = d;
                diff.at_t = grid.t(n);
                diff.at_x = x;
            }
        }
    }
    diff.l2_diff = count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;
    return diff;
}

ViscosityReport viscosity_audit(const ValueField& u, const SpaceTimeGrid& grid,
                                const TestFunctionFamily& family,
                                const ControlGrid& controls, const GeneratorSpec& g_spec,
                                double tol) {
    if (u.n_slices() != grid.nt + 1 || u.nx() != grid.nx)
        throw SpecError("field does not match the grid");
    ViscosityReport report;
    const double dt = grid.dt();
    const int w = std::max(1, family.x_window);
    const int center_reach = static_cast<int>(std::ceil(family.center_radius / grid.dx()));

    // exclude the band where the field is shaped by the boundary policy: any
    // node whose nonlocal reads clamp at the domain edge is not governed by
    // the equation being audited
    double reach_left = 0.0, reach_right = 0.0;
    for (std::size_t c = 0; c < controls.size(); ++c)
        for (const LevyAtom& at : controls[c].nu.atoms()) {
            reach_right = std::max(reach_right, at.mark);
            reach_left = std::max(reach_left, -at.mark);
        }
    const int i_lo =
        1 + w + static_cast<int>(std::ceil(std::max(0.0, reach_left) / grid.dx()));
    const int i_hi =
        grid.nx - 2 - w - static_cast<int>(std::ceil(std::max(0.0, reach_right) / grid.dx()));

    for (double q : family.time_slopes) {
        for (int n = 1; n < grid.nt; ++n) {
            for (int i = i_lo; i <= i_hi; ++i) {
                // time-direction prune, independent of the quadratic part:
                // (u-phi)(n+-1, i) - (u-phi)(n, i) = du_+- -+ q*dt
                const double du_up = u.at(n + 1, i) - u.at(n, i);
                const double du_dn = u.at(n - 1, i) - u.at(n, i);
                const bool max_candidate = (du_up - q * dt < 0.0) && (du_dn + q * dt < 0.0);
                const bool min_candidate = (du_up - q * dt > 0.0) && (du_dn + q * dt > 0.0);
                if (!max_candidate && !min_candidate) continue;

                const double xi = grid.x(i);
                for (double p : family.curvatures) {
                    for (int jc = std::max(0, i - center_reach);
                         jc <= std::min(grid.nx - 1, i + center_reach); ++jc) {
                        const double c = grid.x(jc);
                        auto phi = [&](double x) {
                            double d = x - c;
                            return p * d * d;
                        };
                        // strict extremum over 3 slices x (2w+1) nodes
                        const double ref = u.at(n, i) - phi(xi) - q * grid.t(n);
                        bool is_max = max_candidate;
                        bool is_min = min_candidate;
                        for (int m = n - 1; m <= n + 1 && (is_max || is_min); ++m) {
                            for (int j = std::max(0, i - w);
                                 j <= std::min(grid.nx - 1, i + w); ++j) {
                                if (m == n && j == i) continue;
                                double v = u.at(m, j) - phi(grid.x(j)) - q * grid.t(m);
                                if (v >= ref) is_max = false;
                                if (v <= ref) is_min = false;
                                if (!is_max && !is_min) break;
                            }
                        }
                        if (!is_max && !is_min) continue;
                        ++report.extrema_checked;

                        HamiltonianInput in;
                        in.t = grid.t(n);
                        in.x = xi;
                        in.y = u.at(n, i);  // phi shifted to touch u
                        in.z = 2.0 * p * (xi - c);
                        in.d2 = 2.0 * p;
                        in.jump_delta = [&](double e) { return phi(xi + e) - phi(xi); };
                        in.value_shift = [&](double e) { return phi(xi + e); };
                        double ham = hamiltonian_hat(g_spec, controls, in).value;
                        double residual = -q - ham;
                        if (is_min) {
                            report.worst_super_residual =
                                std::min(report.worst_super_residual, residual);
                            if (residual < -tol) {
                                ++report.super_violations;
                                report.violations.push_back(
                                    {grid.t(n), xi, c, p, q, residual, true});
                            }
                        } else {
                            report.worst_sub_residual =
                                std::max(report.worst_sub_residual, residual);
                            if (residual > tol) {
                                ++report.sub_violations;
                                report.violations.push_back(
                                    {grid.t(n), xi, c, p, q, residual, false});
                            }
                        }
                    }
                }
            }
        }
    }
    return report;
}

}  // namespace levy2b
