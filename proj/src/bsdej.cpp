#include "levy2b/bsdej.hpp"

#include "engine.hpp"
#include "levy2b/simd.hpp"

namespace levy2b {

StepResult backward_step(const GeneratorSpec& g_spec, const ControlPoint& c,
                         std::span<const double> next, double t, const SpaceTimeGrid& grid,
                         int n_picard) {
    if (next.size() != static_cast<std::size_t>(grid.nx))
        throw SpecError("next slice size must match the grid");
    detail::Engine engine(ControlGrid({c}), g_spec, grid, detail::Route::Kernel, n_picard);
    std::vector<std::vector<double>> cands(1, std::vector<double>(next.size()));
    engine.step(next, t, cands);

    StepResult out;
    out.y = std::move(cands[0]);
    out.z.resize(next.size());
    simd::ops().central_diff(next.data(), out.z.data(), grid.nx, 1.0 / (2.0 * grid.dx()));
    const auto& legs = engine.per_control(0).kernel.legs();
    out.u.resize(legs.size(), std::vector<double>(next.size()));
    for (std::size_t k = 0; k < legs.size(); ++k) {
        simd::ops().shift_blend(next.data(), out.u[k].data(), grid.nx, legs[k].offset,
                                legs[k].w_lo, legs[k].w_hi);
        for (std::size_t i = 0; i < next.size(); ++i) out.u[k][i] -= next[i];
    }
    return out;
}

FieldSolution solve_bsdej(const ControlPoint& c, const GeneratorSpec& g_spec,
                          const Expr& terminal, const SpaceTimeGrid& grid, int n_picard) {
    detail::Engine engine(ControlGrid({c}), g_spec, grid, detail::Route::Kernel, n_picard);
    std::vector<double> term = sample_on_grid(terminal, grid, grid.horizon);
    FieldSolution sol;
    sol.control = c;
    sol.y = detail::sweep(engine, term, 0, grid.nt, nullptr);

    const auto& ops = simd::ops();
    const auto& legs = engine.per_control(0).kernel.legs();
    sol.z = ValueField(grid.nt + 1, grid.nx);
    sol.u.assign(legs.size(), ValueField(grid.nt + 1, grid.nx));
    for (int n = 0; n <= grid.nt; ++n) {
        auto y_slice = sol.y.slice(n);
        ops.central_diff(y_slice.data(), sol.z.slice(n).data(), grid.nx,
                         1.0 / (2.0 * grid.dx()));
        for (std::size_t k = 0; k < legs.size(); ++k) {
            auto u_slice = sol.u[k].slice(n);
            ops.shift_blend(y_slice.data(), u_slice.data(), grid.nx, legs[k].offset,
                            legs[k].w_lo, legs[k].w_hi);
            for (int i = 0; i < grid.nx; ++i)
                u_slice[static_cast<std::size_t>(i)] -= y_slice[static_cast<std::size_t>(i)];
        }
    }
    return sol;
}

}  // namespace levy2b
