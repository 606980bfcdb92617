#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "levy2b/controls.hpp"
#include "levy2b/expr.hpp"

namespace levy2b {

/// Counter-based seeding: the stream for (master_seed, path_index) does not
/// depend on how many other paths exist or in which order they are drawn.
struct SeedSpec {
    std::uint64_t master_seed = 42;
    std::uint64_t path_index = 0;
};

struct JumpEvent {
    double time;
    double mark;

    bool operator==(const JumpEvent&) const = default;
};

/// One cadlag trajectory skeleton: Brownian-part increments on the uniform
/// mesh, exact jump times with marks, and the continuously applied
/// compensating drift that makes the path a martingale.
class PathSample {
public:
    PathSample(double x0, double t0, double horizon, double dt, double a,
               std::vector<double> cont_incr, std::vector<JumpEvent> jumps,
               double drift_rate);

    double x0() const noexcept { return x0_; }
    double t0() const noexcept { return t0_; }
    double horizon() const noexcept { return horizon_; }
    double dt() const noexcept { return dt_; }
    double a() const noexcept { return a_; }
    double drift_rate() const noexcept { return drift_rate_; }
    const std::vector<double>& cont_incr() const noexcept { return cont_incr_; }
    const std::vector<JumpEvent>& jumps() const noexcept { return jumps_; }

    double terminal_state() const;

    /// Standardized Brownian endpoint: sum of increments / sqrt(a).
    double brownian_total() const;

    /// sup over the event skeleton (mesh points, pre-jump and post-jump
    /// values) of |state - x0|^2.
    double max_sq_excursion() const;

    bool operator==(const PathSample&) const = default;

private:
    double x0_, t0_, horizon_, dt_, a_;
    std::vector<double> cont_incr_;
    std::vector<JumpEvent> jumps_;
    double drift_rate_;
};

/// Forward simulation under a fixed control: Brownian increments of variance
/// a*dt, jump times from a Poisson clock at the total intensity (exact
/// exponential gaps), marks drawn proportionally to the atom intensities.
PathSample simulate_path(const ControlPoint& c, double x0, double t0, double horizon,
                         double dt, SeedSpec seed);

struct QvBreakdown {
    double total_qv;
    double continuous_density_est;
    double jump_qv;
};

/// Pathwise realized quadratic variation and its continuous/jump split.
QvBreakdown pathwise_qv(const PathSample& p);

/// Stochastic exponential of eta * (standardized Brownian part) plus the
/// compensated jump integral of gamma. Requires gamma(e) > -1 on every atom.
double doleans_exponential(const PathSample& p, double eta,
                           const std::function<double(double)>& gamma,
                           const ControlPoint& c);

struct McStats {
    double mean;
    double std_error;
};

/// Monte Carlo mean of g(terminal state) over paths 0..n_paths-1.
McStats mc_terminal(const ControlPoint& c, const Expr& g, double x0, double t0,
                    double horizon, double dt, std::int64_t n_paths,
                    std::uint64_t master_seed);

/// Monte Carlo mean of the squared pathwise sup-excursion over [t0, t0+gap].
McStats mc_sup_excursion(const ControlPoint& c, double t0, double gap, double dt,
                         std::int64_t n_paths, std::uint64_t master_seed);

/// Monte Carlo mean of the stochastic exponential at the horizon.
McStats mc_doleans(const ControlPoint& c, double eta,
                   const std::function<double(double)>& gamma, double horizon, double dt,
                   std::int64_t n_paths, std::uint64_t master_seed);

}  // namespace levy2b
