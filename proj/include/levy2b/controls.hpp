#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "levy2b/errors.hpp"
#include "levy2b/expr.hpp"

namespace levy2b {

struct LevyAtom {
    double mark;       // e != 0
    double intensity;  // lambda > 0
};

/// Finite-atom jump intensity measure. Every integral against it is an exact
/// finite sum, so the moment conditions below are certifiable by inspection.
class LevyMeasure {
public:
    LevyMeasure() = default;
    explicit LevyMeasure(std::vector<LevyAtom> atoms);

    static LevyMeasure none() { return LevyMeasure{}; }

    const std::vector<LevyAtom>& atoms() const noexcept { return atoms_; }
    bool empty() const noexcept { return atoms_.empty(); }
    std::size_t size() const noexcept { return atoms_.size(); }

    double total_intensity() const noexcept { return total_intensity_; }
    double second_moment() const noexcept { return second_moment_; }
    double large_jump_first_moment() const noexcept { return large_jump_first_moment_; }
    /// Sum of lambda_k * e_k; the martingale-compensating drift is its negation.
    double mean_rate() const noexcept { return mean_rate_; }

private:
    std::vector<LevyAtom> atoms_;
    double total_intensity_ = 0.0;
    double second_moment_ = 0.0;
    double large_jump_first_moment_ = 0.0;
    double mean_rate_ = 0.0;
};

/// One (volatility, jump measure) pair: the discrete stand-in for an
/// admissible model in the uncertainty set.
struct ControlPoint {
    double a = 1.0;  // variance per unit time of the continuous part, > 0
    LevyMeasure nu;

    double moment_load() const {
        return a + nu.second_moment() + nu.large_jump_first_moment();
    }
};

class ControlGrid {
public:
    ControlGrid() = default;
    explicit ControlGrid(std::vector<ControlPoint> points);

    const std::vector<ControlPoint>& points() const noexcept { return points_; }
    std::size_t size() const noexcept { return points_.size(); }
    const ControlPoint& operator[](std::size_t i) const { return points_[i]; }

    /// max over controls of a + second moment + large-jump first moment.
    double uniform_moment_bound() const noexcept { return uniform_moment_bound_; }

private:
    std::vector<ControlPoint> points_;
    double uniform_moment_bound_ = 0.0;
};

/// Driver f(t,x,y,z,u,a,nu) restricted to the Lipschitz linear family
///   kappa_y*y + kappa_z*sqrt(a)*z + sum_k u(e_k)*slope(e_k)*lambda_k + h0(t,x)
/// with slope(e) = c*(1 ^ |e|). Lipschitz and slope-bound admissibility hold
/// by construction; the constructor rejects c < -1 + delta.
class GeneratorSpec {
public:
    GeneratorSpec();
    GeneratorSpec(double kappa_y, double kappa_z, double jump_slope_c,
                  double jump_slope_delta, Expr inhomogeneity);

    static GeneratorSpec zero() { return GeneratorSpec{}; }

    double kappa_y() const noexcept { return kappa_y_; }
    double kappa_z() const noexcept { return kappa_z_; }
    double jump_slope_c() const noexcept { return jump_slope_c_; }
    double jump_slope_delta() const noexcept { return jump_slope_delta_; }
    const Expr& inhomogeneity() const noexcept { return h0_; }

    double slope(double mark) const {
        double m = std::abs(mark);
        return jump_slope_c_ * (m < 1.0 ? m : 1.0);
    }

    /// Lipschitz constant in (y, sqrt(a) z).
    double lipschitz() const {
        return std::max(std::abs(kappa_y_), std::abs(kappa_z_));
    }

    bool is_zero() const noexcept {
        return kappa_y_ == 0.0 && kappa_z_ == 0.0 && jump_slope_c_ == 0.0 && h0_is_zero_;
    }

private:
    double kappa_y_ = 0.0;
    double kappa_z_ = 0.0;
    double jump_slope_c_ = 0.0;
    double jump_slope_delta_ = 0.5;
    Expr h0_;
    bool h0_is_zero_ = true;
};

/// eval_generator with jump arguments aligned to c.nu.atoms() order.
/// Throws SpecError if u_values does not cover every atom.
double eval_generator(const GeneratorSpec& g, double t, double x, double y, double z,
                      std::span<const double> u_values, const ControlPoint& c);

/// (Av)(x,e) = v(x+e) - v(x) - e * dv with a caller-supplied gradient estimate.
template <class V>
double nonlocal_a(V&& v, double x, double e, double dv) {
    return v(x + e) - v(x) - e * dv;
}

/// Arguments of the Hamiltonian at one space-time point. `jump_delta(e)` must
/// return v(x+e) - v(x) for every atom mark of the active grid; `value_shift`
/// (optional) exposes e -> v(x+e) for callers that need the raw shift.
struct HamiltonianInput {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double d2 = 0.0;
    std::function<double(double)> jump_delta;
    std::function<double(double)> value_shift;
};

struct HamiltonianValue {
    double value;
    std::size_t argmax;  // first maximizing control (lowest index on ties)
};

/// Control-wise supremum of  a*d2/2 + sum_k lambda_k*(Av)(x,e_k) + driver.
/// The driver enters with the sign that makes the backward kernel step and
/// this operator two discretizations of the same equation; see README.
HamiltonianValue hamiltonian_hat(const GeneratorSpec& g, const ControlGrid& grid,
                                 const HamiltonianInput& in);

/// Grid supremum of  a*gamma/2 + sum_k vbar(e_k)*lambda_k - h(gamma, vbar).
/// `vbar_grid` entries are aligned to nu.atoms() order (empty inner vectors
/// for a jump-free nu). Ties break to the lowest (gamma, vbar) index pair.
double fenchel_conjugate(
    const std::function<double(double, std::span<const double>)>& h,
    std::span<const double> gamma_grid,
    const std::vector<std::vector<double>>& vbar_grid, double a,
    const LevyMeasure& nu);

struct ControlBounds {
    double a_min;
    double a_max;
    double moment_cap;
};

struct ControlCheck {
    std::size_t index;
    bool pass;
    std::string violation;  // empty when pass
};

struct ControlGridReport {
    std::vector<ControlCheck> checks;
    double uniform_moment = 0.0;
    bool all_pass = true;
};

ControlGridReport validate_control_grid(const ControlGrid& grid, const ControlBounds& bounds);

}  // namespace levy2b
