#pragma once

#include <span>
#include <vector>

#include "levy2b/errors.hpp"
#include "levy2b/expr.hpp"

namespace levy2b {

/// Uniform space-time mesh on [x_min, x_max] x [0, T]. Slice n lives at
/// t_n = n*dt (computed by multiplication so split solves replay exactly).
struct SpaceTimeGrid {
    double x_min = -8.0;
    double x_max = 8.0;
    int nx = 321;
    double horizon = 1.0;
    int nt = 1;

    void validate() const {
        if (!(x_min < x_max)) throw ConfigError("grid requires x_min < x_max");
        if (nx < 3) throw ConfigError("grid requires nx >= 3");
        if (nt < 1) throw ConfigError("grid requires nt >= 1");
        if (!(horizon > 0.0)) throw ConfigError("grid requires T > 0");
    }

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dt() const { return horizon / nt; }
    double x(int i) const { return x_min + i * dx(); }
    double t(int n) const { return n * dt(); }

    std::vector<double> nodes() const {
        std::vector<double> xs(static_cast<std::size_t>(nx));
        for (int i = 0; i < nx; ++i) xs[static_cast<std::size_t>(i)] = x(i);
        return xs;
    }
};

/// Scalar field over (time slice, node). Slice 0 is t=0, slice nt is t=T.
class ValueField {
public:
    ValueField() = default;
    ValueField(int n_slices, int nx)
        : n_slices_(n_slices), nx_(nx),
          data_(static_cast<std::size_t>(n_slices) * static_cast<std::size_t>(nx), 0.0) {}

    int n_slices() const noexcept { return n_slices_; }
    int nx() const noexcept { return nx_; }

    std::span<double> slice(int n) {
        return {data_.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(nx_),
                static_cast<std::size_t>(nx_)};
    }
    std::span<const double> slice(int n) const {
        return {data_.data() + static_cast<std::size_t>(n) * static_cast<std::size_t>(nx_),
                static_cast<std::size_t>(nx_)};
    }

    double at(int n, int i) const {
        return data_[static_cast<std::size_t>(n) * static_cast<std::size_t>(nx_) +
                     static_cast<std::size_t>(i)];
    }
    double& at(int n, int i) {
        return data_[static_cast<std::size_t>(n) * static_cast<std::size_t>(nx_) +
                     static_cast<std::size_t>(i)];
    }

    const std::vector<double>& data() const noexcept { return data_; }
    std::vector<double>& data() noexcept { return data_; }

    bool operator==(const ValueField&) const = default;

private:
    int n_slices_ = 0;
    int nx_ = 0;
    std::vector<double> data_;
};

/// Linear interpolation of a slice at position `xpos`, clamped to the domain.
/// This is the single off-grid evaluation rule shared by the transition
/// kernel's jump legs and the nonlocal reads of the analytic route.
double interp_clamped(std::span<const double> slice, const SpaceTimeGrid& grid, double xpos);

/// g(x_i) on every node at time `t`.
std::vector<double> sample_on_grid(const Expr& g, const SpaceTimeGrid& grid, double t);

}  // namespace levy2b
