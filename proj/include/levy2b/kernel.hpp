#pragma once

#include <map>
#include <vector>

#include "levy2b/controls.hpp"
#include "levy2b/grid.hpp"

namespace levy2b {

/// Largest dt keeping the explicit scheme's stay probability nonnegative:
/// 1 / (a/dx^2 + total jump intensity).
double cfl_max_dt(const ControlPoint& c, double dx);

/// One-step Markov-chain law of the martingale under a fixed control, on the
/// uniform grid. Interior rows are translation invariant:
///   - trinomial diffusion p+- = a*dt/(2 dx^2), with the compensating drift
///     -dt*sum(lambda_k e_k) folded as an antisymmetric transfer
///     +-drift*dt/(2 dx) between the two neighbours (mean-exact, and the
///     stated CFL bound is then exactly the stay-probability bound);
///   - each jump atom moves mass lambda_k*dt to the two nodes bracketing
///     x_i + e_k with linear-interpolation weights (mean-exact);
///   - stay probability is the remainder.
/// Boundary rows are absorbing. Off-grid targets clamp to the boundary node.
class TransitionKernel {
public:
    struct JumpLeg {
        int offset;    // floor(e/dx) node displacement
        double w_lo;   // weight on offset
        double w_hi;   // weight on offset+1
        double mass;   // lambda*dt
        double mark;
        double intensity;
    };

    /// dst = row-apply(src). Interior via the trinomial + legs; boundary rows
    /// are identity. dst and src must not alias.
    void apply(std::span<const double> src, std::span<double> dst) const;

    /// Materialized row for node i (clamped targets accumulated), for tests
    /// and invariant checks.
    std::map<int, double> row(int i) const;

    int nx() const noexcept { return nx_; }
    double dx() const noexcept { return dx_; }
    double dt() const noexcept { return dt_; }
    double p_minus() const noexcept { return p_minus_; }
    double p_plus() const noexcept { return p_plus_; }
    /// Stay weight net of all jump mass.
    double p_stay() const noexcept { return p_stay_net_; }
    const std::vector<JumpLeg>& legs() const noexcept { return legs_; }

private:
    friend TransitionKernel build_kernel(const ControlPoint&, const SpaceTimeGrid&);

    int nx_ = 0;
    double dx_ = 0.0;
    double dt_ = 0.0;
    double p_minus_ = 0.0;
    double p_plus_ = 0.0;
    double p_center_ = 0.0;    // 1 - 2*diffusion mass (before jump mass removal)
    double p_stay_net_ = 0.0;  // p_center_ - total jump mass
    std::vector<JumpLeg> legs_;
};

/// Throws ConfigError naming the admissible bound when dt violates the CFL
/// condition or the drift transfer breaks monotonicity (|sum lambda e| > a/dx).
TransitionKernel build_kernel(const ControlPoint& c, const SpaceTimeGrid& grid);

}  // namespace levy2b
