#include "levy2b/kernel.hpp"

#include <cmath>
#include <string>

#include "levy2b/simd.hpp"

namespace levy2b {

double cfl_max_dt(const ControlPoint& c, double dx) {
    if (!(dx > 0.0)) throw ConfigError("dx must be positive");
    return 1.0 / (c.a / (dx * dx) + c.nu.total_intensity());
}

TransitionKernel build_kernel(const ControlPoint& c, const SpaceTimeGrid& grid) {
    grid.validate();
    const double dx = grid.dx();
    const double dt = grid.dt();
    const double bound = cfl_max_dt(c, dx);
    if (dt > bound * (1.0 + 1e-12))
        throw ConfigError("CFL violated: dt = " + std::to_string(dt) +
                          " exceeds max admissible dt = " + std::to_string(bound));

    const double drift = -c.nu.mean_rate();  // martingale centering
    const double p_diff = c.a * dt / (2.0 * dx * dx);
    const double transfer = drift * dt / (2.0 * dx);
    if (std::abs(drift) > c.a / dx)
        throw ConfigError(
            "drift transfer breaks monotonicity: |sum lambda*e| = " +
            std::to_string(std::abs(drift)) + " exceeds a/dx = " + std::to_string(c.a / dx) +
            "; refine dx or reduce the jump drift");

    TransitionKernel k;
    k.nx_ = grid.nx;
    k.dx_ = dx;
    k.dt_ = dt;
    k.p_minus_ = p_diff - transfer;
    k.p_plus_ = p_diff + transfer;
    k.p_center_ = 1.0 - 2.0 * p_diff;

    double jump_mass = 0.0;
    for (const LevyAtom& at : c.nu.atoms()) {
        double s = at.mark / dx;
        double f = std::floor(s);
        TransitionKernel::JumpLeg leg;
        leg.offset = static_cast<int>(f);
        leg.w_hi = s - f;
        leg.w_lo = 1.0 - leg.w_hi;
        leg.mass = at.intensity * dt;
        leg.mark = at.mark;
        leg.intensity = at.intensity;
        jump_mass += leg.mass;
        k.legs_.push_back(leg);
    }
    k.p_stay_net_ = k.p_center_ - jump_mass;
    if (k.p_minus_ < 0.0 || k.p_plus_ < 0.0 || k.p_stay_net_ < -1e-15)
        throw ConfigError("CFL violated: stencil weight went negative; max admissible dt = " +
                          std::to_string(bound));
    return k;
}

void TransitionKernel::apply(std::span<const double> src, std::span<double> dst) const {
    const auto& ops = simd::ops();
    const int n = nx_;
    ops.stencil3(src.data(), dst.data(), n, p_minus_, p_stay_net_, p_plus_);
    if (!legs_.empty()) {
        static thread_local std::vector<double> scratch;
        scratch.resize(static_cast<std::size_t>(n));
        for (const JumpLeg& leg : legs_) {
            ops.shift_blend(src.data(), scratch.data(), n, leg.offset, leg.w_lo, leg.w_hi);
            // interior only; ends are overwritten below
            ops.axpy(leg.mass, scratch.data() + 1, dst.data() + 1, n - 2);
        }
    }
    dst[0] = src[0];
    dst[static_cast<std::size_t>(n - 1)] = src[static_cast<std::size_t>(n - 1)];
}

std::map<int, double> TransitionKernel::row(int i) const {
    std::map<int, double> r;
    auto clamp = [this](int j) { return j < 0 ? 0 : (j >= nx_ ? nx_ - 1 : j); };
    if (i == 0 || i == nx_ - 1) {
        r[i] = 1.0;
        return r;
    }
    r[clamp(i - 1)] += p_minus_;
    r[i] += p_stay_net_;
    r[clamp(i + 1)] += p_plus_;
    for (const JumpLeg& leg : legs_) {
        r[clamp(i + leg.offset)] += leg.mass * leg.w_lo;
        r[clamp(i + leg.offset + 1)] += leg.mass * leg.w_hi;
    }
    return r;
}

}  // namespace levy2b
