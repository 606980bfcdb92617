#include "levy2b/grid.hpp"

#include <cmath>

namespace levy2b {

double interp_clamped(std::span<const double> slice, const SpaceTimeGrid& grid, double xpos) {
    if (xpos <= grid.x_min) return slice.front();
    if (xpos >= grid.x_max) return slice.back();
    double u = (xpos - grid.x_min) / grid.dx();
    int idx = static_cast<int>(std::floor(u));
    if (idx >= grid.nx - 1) return slice.back();
    double w = u - idx;
    return (1.0 - w) * slice[static_cast<std::size_t>(idx)] +
           w * slice[static_cast<std::size_t>(idx + 1)];
}

std::vector<double> sample_on_grid(const Expr& g, const SpaceTimeGrid& grid, double t) {
    std::vector<double> out(static_cast<std::size_t>(grid.nx));
    for (int i = 0; i < grid.nx; ++i) out[static_cast<std::size_t>(i)] = g.eval(t, grid.x(i));
    return out;
}

}  // namespace levy2b
