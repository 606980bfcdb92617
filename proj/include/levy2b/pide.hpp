#pragma once

#include <vector>

#include "levy2b/controls.hpp"
#include "levy2b/grid.hpp"

namespace levy2b {

/// Analytic-route solution of the fully nonlinear equation, by explicit
/// monotone finite differences sharing the probabilistic route's stencil.
struct PIDESolution {
    ValueField u;
    double cfl_margin = 0.0;  // min over controls of (cfl_max_dt - dt)/cfl_max_dt
};

PIDESolution solve_pide(const ControlGrid& controls, const GeneratorSpec& g_spec,
                        const Expr& terminal, const SpaceTimeGrid& grid, int n_picard = 2);

struct FieldDiff {
    double sup_diff = 0.0;
    double l2_diff = 0.0;
    double at_t = 0.0;  // location of the sup
    double at_x = 0.0;
};

/// Norms of u1-u2 over all slices, restricted to x in [x_lo, x_hi].
FieldDiff compare_fields(const ValueField& u1, const ValueField& u2,
                         const SpaceTimeGrid& grid, double x_lo, double x_hi);

/// Quadratic-in-x, linear-in-t test functions
///   phi(t, x) = p*(x - c)^2 + q*t + offset
/// over grid-node centers, the listed curvature halves p and time slopes q.
struct TestFunctionFamily {
    std::vector<double> curvatures{0.5, -0.5, 2.0, -2.0};  // p
    std::vector<double> time_slopes{1.0, -1.0};            // q
    double center_radius = 4.0;  // only centers with |c - x_probe| <= radius
    int x_window = 2;            // extremum window: 3 slices x (2w+1) nodes
};

struct ViscosityViolation {
    double t, x;
    double center, curvature, time_slope;
    double residual;
    bool super_side;  // true: super-solution side (touched at a local min)
};

struct ViscosityReport {
    std::vector<ViscosityViolation> violations;
    std::int64_t extrema_checked = 0;
    double worst_super_residual = 0.0;  // most negative residual at a min
    double worst_sub_residual = 0.0;    // most positive residual at a max
    std::int64_t super_violations = 0;
    std::int64_t sub_violations = 0;
};

/// Sub/super-solution audit: wherever u-phi attains a strict local extremum
/// over the space-time window, the Hamiltonian residual of the touching test
/// function must have the right sign up to `tol`. Boundary slices (in t and
/// x) are excluded; the nonlocal arguments use phi's analytic formula.
ViscosityReport viscosity_audit(const ValueField& u, const SpaceTimeGrid& grid,
                                const TestFunctionFamily& family,
                                const ControlGrid& controls, const GeneratorSpec& g_spec,
                                double tol);

}  // namespace levy2b
