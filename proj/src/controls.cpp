#include "levy2b/controls.hpp"

#include <cmath>

namespace levy2b {

LevyMeasure::LevyMeasure(std::vector<LevyAtom> atoms) : atoms_(std::move(atoms)) {
    for (std::size_t k = 0; k < atoms_.size(); ++k) {
        const LevyAtom& at = atoms_[k];
        if (at.mark == 0.0 || !std::isfinite(at.mark))
            throw SpecError("jump mark must be finite and nonzero");
        if (!(at.intensity > 0.0) || !std::isfinite(at.intensity))
            throw SpecError("jump intensity must be finite and strictly positive");
        for (std::size_t j = 0; j < k; ++j)
            if (atoms_[j].mark == at.mark) throw SpecError("duplicate jump mark");
        total_intensity_ += at.intensity;
        second_moment_ += at.intensity * at.mark * at.mark;
        if (std::abs(at.mark) >= 1.0) large_jump_first_moment_ += at.intensity * std::abs(at.mark);
        mean_rate_ += at.intensity * at.mark;
    }
}

ControlGrid::ControlGrid(std::vector<ControlPoint> points) : points_(std::move(points)) {
    if (points_.empty()) throw SpecError("control grid must be non-empty");
    for (const ControlPoint& p : points_) {
        if (!(p.a > 0.0) || !std::isfinite(p.a))
            throw SpecError("volatility level a must be finite and strictly positive");
        uniform_moment_bound_ = std::max(uniform_moment_bound_, p.moment_load());
    }
}

GeneratorSpec::GeneratorSpec() : h0_(Expr::constant(0.0)) {}

GeneratorSpec::GeneratorSpec(double kappa_y, double kappa_z, double jump_slope_c,
                             double jump_slope_delta, Expr inhomogeneity)
    : kappa_y_(kappa_y),
      kappa_z_(kappa_z),
      jump_slope_c_(jump_slope_c),
      jump_slope_delta_(jump_slope_delta),
      h0_(std::move(inhomogeneity)) {
    if (!(jump_slope_delta_ > 0.0)) throw SpecError("jump slope delta must be > 0");
    if (!(jump_slope_c_ >= -1.0 + jump_slope_delta_))
        throw SpecError("jump slope c must exceed -1 + delta");
    h0_is_zero_ =
        h0_.nodes().size() == 1 && h0_.nodes()[0].op == Expr::Op::Constant &&
        h0_.nodes()[0].value == 0.0;
}

double eval_generator(const GeneratorSpec& g, double t, double x, double y, double z,
                      std::span<const double> u_values, const ControlPoint& c) {
    const auto& atoms = c.nu.atoms();
    if (u_values.size() != atoms.size())
        throw SpecError("u_values must cover every atom of the control's jump measure");
    double jump_part = 0.0;
    for (std::size_t k = 0; k < atoms.size(); ++k)
        jump_part += u_values[k] * g.slope(atoms[k].mark) * atoms[k].intensity;
    return g.kappa_y() * y + g.kappa_z() * std::sqrt(c.a) * z + jump_part +
           g.inhomogeneity().eval(t, x);
}

HamiltonianValue hamiltonian_hat(const GeneratorSpec& g, const ControlGrid& grid,
                                 const HamiltonianInput& in) {
    if (grid.size() == 0) throw SpecError("empty control grid");
    double best = 0.0;
    std::size_t best_idx = 0;
    std::vector<double> u_vals;
    for (std::size_t ci = 0; ci < grid.size(); ++ci) {
        const ControlPoint& c = grid[ci];
        const auto& atoms = c.nu.atoms();
        u_vals.clear();
        double nonlocal = 0.0;
        for (const LevyAtom& at : atoms) {
            if (!in.jump_delta) throw SpecError("jump_delta required for a jump control");
            double delta = in.jump_delta(at.mark);
            u_vals.push_back(delta);
            nonlocal += at.intensity * (delta - at.mark * in.z);
        }
        double driver = eval_generator(g, in.t, in.x, in.y, in.z, u_vals, c);
        double candidate = 0.5 * c.a * in.d2 + nonlocal + driver;
        if (ci == 0 || candidate > best) {
            best = candidate;
            best_idx = ci;
        }
    }
    return {best, best_idx};
}

double fenchel_conjugate(
    const std::function<double(double, std::span<const double>)>& h,
    std::span<const double> gamma_grid,
    const std::vector<std::vector<double>>& vbar_grid, double a,
    const LevyMeasure& nu) {
    if (gamma_grid.empty() || vbar_grid.empty())
        throw SpecError("fenchel conjugate needs non-empty grids");
    const auto& atoms = nu.atoms();
    double best = 0.0;
    bool first = true;
    for (double gamma : gamma_grid) {
        for (const std::vector<double>& vbar : vbar_grid) {
            if (vbar.size() != atoms.size())
                throw SpecError("vbar candidate must cover every atom of nu");
            double jump = 0.0;
            for (std::size_t k = 0; k < atoms.size(); ++k)
                jump += vbar[k] * atoms[k].intensity;
            double candidate = 0.5 * a * gamma + jump - h(gamma, vbar);
            if (first || candidate > best) {
                best = candidate;
                first = false;
            }
        }
    }
    return best;
}

ControlGridReport validate_control_grid(const ControlGrid& grid, const ControlBounds& bounds) {
    ControlGridReport report;
    report.uniform_moment = grid.uniform_moment_bound();
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ControlPoint& p = grid[i];
        ControlCheck check{i, true, {}};
        if (p.a < bounds.a_min)
            check = {i, false, "a below a_min"};
        else if (p.a > bounds.a_max)
            check = {i, false, "a above a_max"};
        else if (p.nu.second_moment() > bounds.moment_cap)
            check = {i, false, "second_moment " + std::to_string(p.nu.second_moment()) +
                                   " exceeds moment_cap"};
        else if (p.moment_load() > bounds.moment_cap)
            check = {i, false, "moment load exceeds moment_cap"};
        report.all_pass = report.all_pass && check.pass;
        report.checks.push_back(std::move(check));
    }
    return report;
}

}  // namespace levy2b
