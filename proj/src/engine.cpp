#include "engine.hpp"

#include <cmath>
#include <cstring>
#include <string>

#include "levy2b/simd.hpp"

namespace levy2b::detail {

Engine::Engine(const ControlGrid& controls, const GeneratorSpec& gspec,
               const SpaceTimeGrid& grid, Route route, int n_picard)
    : gspec_(gspec), grid_(grid), route_(route), n_picard_(std::max(1, n_picard)) {
    grid.validate();
    per_control_.reserve(controls.size());
    for (std::size_t c = 0; c < controls.size(); ++c) {
        PerControl pc;
        pc.control = controls[c];
        try {
            pc.kernel = build_kernel(pc.control, grid);
        } catch (const ConfigError& e) {
            throw ConfigError("control " + std::to_string(c) + ": " + e.what());
        }
        pc.sqrt_a = std::sqrt(pc.control.a);
        for (const LevyAtom& at : pc.control.nu.atoms()) {
            pc.lambda_total += at.intensity;
            pc.lambda_mark_total += at.intensity * at.mark;
            double sl = gspec.slope(at.mark) * at.intensity;
            pc.slope_lambda.push_back(sl);
            pc.slope_lambda_total += sl;
        }
        per_control_.push_back(std::move(pc));
    }

    const auto nx = static_cast<std::size_t>(grid.nx);
    z_.resize(nx);
    d2_.resize(nx);
    h0_.resize(nx);
    fbase_.resize(nx);
    ham_.resize(nx);
    tmp_.resize(nx);
    std::size_t max_atoms = 0;
    for (const PerControl& pc : per_control_)
        max_atoms = std::max(max_atoms, pc.control.nu.atoms().size());
    reads_.assign(max_atoms, std::vector<double>(nx));
}

void Engine::step(std::span<const double> next, double t_now,
                  std::vector<std::vector<double>>& cands) {
    const auto& ops = simd::ops();
    const int n = grid_.nx;
    const double dx = grid_.dx();
    const double dt = grid_.dt();
    const double* src = next.data();

    ops.central_diff(src, z_.data(), n, 1.0 / (2.0 * dx));
    if (route_ == Route::Derivative) ops.second_diff(src, d2_.data(), n, 1.0 / (dx * dx));

    const bool has_h0 = !gspec_.is_zero();
    if (has_h0) {
        const Expr& h0 = gspec_.inhomogeneity();
        for (int i = 0; i < n; ++i)
            h0_[static_cast<std::size_t>(i)] = h0.eval(t_now, grid_.x(i));
    } else {
        std::memset(h0_.data(), 0, sizeof(double) * static_cast<std::size_t>(n));
    }

    const double ky = gspec_.kappa_y();
    const double kz = gspec_.kappa_z();

    for (std::size_t c = 0; c < per_control_.size(); ++c) {
        const PerControl& pc = per_control_[c];
        const auto& legs = pc.kernel.legs();
        double* cand = cands[c].data();

        for (std::size_t k = 0; k < legs.size(); ++k)
            ops.shift_blend(src, reads_[k].data(), n, legs[k].offset, legs[k].w_lo,
                            legs[k].w_hi);

        // driver, except its y-term:
        //   fbase = h0 + kz*sqrt(a)*z + sum_k slope_lambda_k*(read_k - next)
        std::memcpy(fbase_.data(), h0_.data(), sizeof(double) * static_cast<std::size_t>(n));
        if (kz != 0.0) ops.axpy(kz * pc.sqrt_a, z_.data(), fbase_.data(), n);
        if (pc.slope_lambda_total != 0.0) {
            for (std::size_t k = 0; k < legs.size(); ++k)
                if (pc.slope_lambda[k] != 0.0)
                    ops.axpy(pc.slope_lambda[k], reads_[k].data(), fbase_.data(), n);
            ops.axpy(-pc.slope_lambda_total, src, fbase_.data(), n);
        }

        if (route_ == Route::Kernel) {
            // base = K * next (same primitive sequence as TransitionKernel::apply)
            ops.stencil3(src, tmp_.data(), n, pc.kernel.p_minus(), pc.kernel.p_stay(),
                         pc.kernel.p_plus());
            for (std::size_t k = 0; k < legs.size(); ++k)
                ops.axpy(legs[k].mass, reads_[k].data() + 1, tmp_.data() + 1, n - 2);
        } else {
            // base = next + dt*(a/2*d2 + sum_k lambda_k*(read_k - next - e_k*z))
            std::memset(ham_.data(), 0, sizeof(double) * static_cast<std::size_t>(n));
            ops.axpy(0.5 * pc.control.a, d2_.data(), ham_.data(), n);
            for (std::size_t k = 0; k < legs.size(); ++k)
                ops.axpy(legs[k].intensity, reads_[k].data(), ham_.data(), n);
            if (pc.lambda_total != 0.0) ops.axpy(-pc.lambda_total, src, ham_.data(), n);
            if (pc.lambda_mark_total != 0.0)
                ops.axpy(-pc.lambda_mark_total, z_.data(), ham_.data(), n);
            ops.scale_add(src, dt, ham_.data(), tmp_.data(), n);
        }

        // cand = base + dt*fbase + dt*ky*y_arg, y_arg refreshed n_picard-1 times
        ops.scale_add(tmp_.data(), dt, fbase_.data(), cand, n);
        if (ky != 0.0) {
            ops.axpy(dt * ky, src, cand, n);
            for (int pass = 1; pass < n_picard_; ++pass) {
                ops.scale_add(tmp_.data(), dt, fbase_.data(), ham_.data(), n);
                ops.axpy(dt * ky, cand, ham_.data(), n);
                std::memcpy(cand, ham_.data(), sizeof(double) * static_cast<std::size_t>(n));
            }
        }

        cand[0] = src[0];
        cand[n - 1] = src[n - 1];
    }
}

ValueField sweep(Engine& engine, std::span<const double> terminal, int step_lo, int step_hi,
                 std::vector<std::int32_t>* argmax_out) {
    const SpaceTimeGrid& grid = engine.grid();
    const int n = grid.nx;
    ValueField field(grid.nt + 1, n);
    if (terminal.size() != static_cast<std::size_t>(n))
        throw SpecError("terminal slice size must match the grid");
    std::copy(terminal.begin(), terminal.end(), field.slice(step_hi).begin());

    std::vector<std::vector<double>> cands(engine.n_controls(),
                                           std::vector<double>(static_cast<std::size_t>(n)));
    const auto& ops = simd::ops();
    std::vector<std::int32_t> tags(static_cast<std::size_t>(n), 0);

    for (int step = step_hi - 1; step >= step_lo; --step) {
        auto next = field.slice(step + 1);
        engine.step(next, grid.t(step), cands);
        auto out = field.slice(step);
        std::copy(cands[0].begin(), cands[0].end(), out.begin());
        if (engine.n_controls() > 1) {
            std::fill(tags.begin(), tags.end(), 0);
            for (std::size_t c = 1; c < engine.n_controls(); ++c)
                ops.max_tag(out.data(), tags.data(), cands[c].data(),
                            static_cast<std::int32_t>(c), n);
            // boundary is held identically under every control
            tags[0] = 0;
            tags[static_cast<std::size_t>(n - 1)] = 0;
        }
        if (argmax_out != nullptr) {
            if (engine.n_controls() == 1) std::fill(tags.begin(), tags.end(), 0);
            std::copy(tags.begin(), tags.end(),
                      argmax_out->begin() +
                          static_cast<std::ptrdiff_t>(step) * static_cast<std::ptrdiff_t>(n));
        }
    }
    return field;
}

}  // namespace levy2b::detail
