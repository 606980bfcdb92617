#pragma once

// Shared backward-sweep engine. Both routes step a slice at t_{n+1} back to
// t_n with per-control candidates built from the same primitives:
//   Kernel route      y_c = K_c * next + dt * driver       (Markov chain)
//   Derivative route  y_c = next + dt * (hamiltonian_c + driver)
// and the caller takes the control-wise maximum (or a single control).
// Boundary nodes are held at the previous slice value in both routes.

#include <span>
#include <vector>

#include "levy2b/controls.hpp"
#include "levy2b/grid.hpp"
#include "levy2b/kernel.hpp"

namespace levy2b::detail {

enum class Route { Kernel, Derivative };

struct PerControl {
    ControlPoint control;
    TransitionKernel kernel;
    double sqrt_a = 1.0;
    double lambda_total = 0.0;       // sum lambda_k
    double lambda_mark_total = 0.0;  // sum lambda_k e_k
    double slope_lambda_total = 0.0; // sum gamma(e_k) lambda_k
    std::vector<double> slope_lambda;
};

class Engine {
public:
    Engine(const ControlGrid& controls, const GeneratorSpec& gspec,
           const SpaceTimeGrid& grid, Route route, int n_picard);

    /// Candidate slices for every control, stepping `next` (the slice at
    /// t_now + dt) back to t_now. cands[c] must be nx-sized. Deterministic.
    void step(std::span<const double> next, double t_now,
              std::vector<std::vector<double>>& cands);

    std::size_t n_controls() const { return per_control_.size(); }
    const PerControl& per_control(std::size_t c) const { return per_control_[c]; }
    const SpaceTimeGrid& grid() const { return grid_; }
    const GeneratorSpec& gspec() const { return gspec_; }
    int n_picard() const { return n_picard_; }

private:
    GeneratorSpec gspec_;
    SpaceTimeGrid grid_;
    Route route_;
    int n_picard_;
    std::vector<PerControl> per_control_;

    // step scratch
    std::vector<double> z_, d2_, h0_, fbase_, ham_, tmp_;
    std::vector<std::vector<double>> reads_;
};

/// Backward induction over step indices [step_lo, step_hi). `terminal` seeds
/// slice step_hi; the result holds slices step_lo..step_hi of the full grid
/// (other slices zero). With argmax_out non-null, records the winning control
/// per (step, node) with lowest-index tie-break (boundary nodes report 0).
ValueField sweep(Engine& engine, std::span<const double> terminal, int step_lo, int step_hi,
                 std::vector<std::int32_t>* argmax_out);

}  // namespace levy2b::detail
