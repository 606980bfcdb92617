#pragma once

#include <vector>

#include "levy2b/controls.hpp"
#include "levy2b/grid.hpp"
#include "levy2b/kernel.hpp"

namespace levy2b {

/// Output of one explicit backward step: the new slice, the gradient proxy
/// (central difference of the next slice, one-sided at the ends) and the
/// per-atom jump reads u(e_k) = interp(next, x+e_k) - next(x) consumed by the
/// driver.
struct StepResult {
    std::vector<double> y;
    std::vector<double> z;
    std::vector<std::vector<double>> u;  // one vector per atom of c.nu
};

/// One explicit step of the backward equation under a fixed control, from the
/// slice at t+dt down to t. The driver's y-argument is refreshed n_picard-1
/// times; z and u stay reads of the next slice. The generator acts on
/// interior nodes; boundary nodes are held.
StepResult backward_step(const GeneratorSpec& g_spec, const ControlPoint& c,
                         std::span<const double> next, double t, const SpaceTimeGrid& grid,
                         int n_picard = 2);

/// Solution fields of the backward equation under one control. z and u are
/// stored per slice as reads of that slice (z = one-sided/central difference
/// of y^n, u^n_k = interp(y^n, x+e_k) - y^n).
struct FieldSolution {
    ValueField y;
    ValueField z;
    std::vector<ValueField> u;  // aligned with control.nu.atoms()
    ControlPoint control;
};

/// Backward induction from the sampled terminal condition over the full grid.
FieldSolution solve_bsdej(const ControlPoint& c, const GeneratorSpec& g_spec,
                          const Expr& terminal, const SpaceTimeGrid& grid, int n_picard = 2);

}  // namespace levy2b
