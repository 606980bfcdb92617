#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "levy2b/bsdej.hpp"
#include "levy2b/controls.hpp"
#include "levy2b/grid.hpp"

namespace levy2b {

/// Value field from per-step control-wise suprema (the discrete dynamic
/// programming pasting), with the winning control per (step, node).
struct DynamicSolution {
    ValueField u;
    std::vector<std::int32_t> argmax;  // nt * nx entries, step-major; boundary = 0
    std::int32_t argmax_at(int step, int node, int nx) const {
        return argmax[static_cast<std::size_t>(step) * static_cast<std::size_t>(nx) +
                      static_cast<std::size_t>(node)];
    }
};

DynamicSolution solve_dynamic(const ControlGrid& controls, const GeneratorSpec& g_spec,
                              const Expr& terminal, const SpaceTimeGrid& grid,
                              int n_picard = 2);

/// The deliberately weaker constant-control value: per-control backward
/// solves followed by a pointwise maximum of the t=0 slices.
struct StaticSolution {
    std::vector<FieldSolution> per_control;
    std::vector<double> sup_at_t0;
    std::vector<std::int32_t> argmax_at_t0;
};

StaticSolution solve_static(const ControlGrid& controls, const GeneratorSpec& g_spec,
                            const Expr& terminal, const SpaceTimeGrid& grid,
                            int n_picard = 2);

/// Per-control one-step supermartingale defects against the dynamic value:
/// delta_K[c](n,i) = u(n,i) - [one backward step of u(n+1,.) under control c].
/// Nonnegative by construction; the minimum over controls vanishes nodewise.
class KIncrementField {
public:
    KIncrementField(std::size_t n_controls, int nt, int nx);

    double at(std::size_t c, int step, int node) const {
        return data_[index(c, step, node)];
    }
    double& at(std::size_t c, int step, int node) { return data_[index(c, step, node)]; }

    std::size_t n_controls() const noexcept { return n_controls_; }
    int nt() const noexcept { return nt_; }
    int nx() const noexcept { return nx_; }

private:
    std::size_t index(std::size_t c, int step, int node) const {
        return (c * static_cast<std::size_t>(nt_) + static_cast<std::size_t>(step)) *
                   static_cast<std::size_t>(nx_) +
               static_cast<std::size_t>(node);
    }
    std::size_t n_controls_;
    int nt_, nx_;
    std::vector<double> data_;
};

KIncrementField k_increments(const DynamicSolution& dynamic, const ControlGrid& controls,
                             const GeneratorSpec& g_spec, const SpaceTimeGrid& grid,
                             int n_picard = 2);

/// Discrete minimum-condition audit of the defect family.
struct MinimalityReport {
    double max_of_min_defect = 0.0;      // max over (step,node) of min over controls
    double min_defect = 0.0;             // most negative defect seen anywhere
    std::int64_t negative_violations = 0;  // defects below -1e-10
    std::vector<std::vector<double>> total_by_control;  // per control, per node: sum over steps
    std::vector<double> max_total_by_control;           // interior max of the above
};

MinimalityReport minimality_report(const KIncrementField& k, const SpaceTimeGrid& grid);

/// Two-stage dynamic programming check across an interior mesh time t1.
/// Factorization and domination are asserted on every node; the equality
/// diagnostic is measured on [x_lo, x_hi] only, away from the band where the
/// absorbing boundary (not the dynamics) decides the optimal control.
struct DppReport {
    double split_time = 0.0;
    int split_step = 0;
    double factorization_sup_diff = 0.0;   // |two-stage - full| at t=0, all nodes
    double static_excess = 0.0;            // max of (static over split - dynamic), all nodes
    double equality_gap = 0.0;             // sup |static over split - dynamic| on the region
};

DppReport dpp_check(const ControlGrid& controls, const GeneratorSpec& g_spec,
                    const Expr& terminal, const SpaceTimeGrid& grid, double t1,
                    int n_picard = 2, double x_lo = -std::numeric_limits<double>::infinity(),
                    double x_hi = std::numeric_limits<double>::infinity());

}  // namespace levy2b
