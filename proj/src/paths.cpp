#include "levy2b/paths.hpp"

#include <cmath>
#include <random>

#include "levy2b/parallel.hpp"

namespace levy2b {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::mt19937_64 engine_for(SeedSpec seed) {
    std::uint64_t s = splitmix64(seed.master_seed);
    s = splitmix64(s ^ splitmix64(seed.path_index ^ 0xA5A5A5A5A5A5A5A5ULL));
    return std::mt19937_64(s);
}

}  // namespace

PathSample::PathSample(double x0, double t0, double horizon, double dt, double a,
                       std::vector<double> cont_incr, std::vector<JumpEvent> jumps,
                       double drift_rate)
    : x0_(x0), t0_(t0), horizon_(horizon), dt_(dt), a_(a),
      cont_incr_(std::move(cont_incr)), jumps_(std::move(jumps)), drift_rate_(drift_rate) {
    double prev = t0_;
    for (const JumpEvent& j : jumps_) {
        if (!(j.time > prev) || j.time > horizon_)
            throw SpecError("jump times must be strictly increasing within (t0, T]");
        prev = j.time;
    }
}

double PathSample::terminal_state() const {
    double s = 0.0;
    for (double c : cont_incr_) s += c;
    for (const JumpEvent& j : jumps_) s += j.mark;
    return x0_ + s + drift_rate_ * (horizon_ - t0_);
}

double PathSample::brownian_total() const {
    double s = 0.0;
    for (double c : cont_incr_) s += c;
    return s / std::sqrt(a_);
}

double PathSample::max_sq_excursion() const {
    double state = x0_;
    double tc = t0_;
    double worst = 0.0;
    auto visit = [&](double s) {
        double d = s - x0_;
        if (d * d > worst) worst = d * d;
    };
    std::size_t next_jump = 0;
    const std::size_t n_steps = cont_incr_.size();
    for (std::size_t m = 1; m <= n_steps; ++m) {
        double t_mesh = t0_ + static_cast<double>(m) * dt_;
        if (m == n_steps) t_mesh = horizon_;
        while (next_jump < jumps_.size() && jumps_[next_jump].time <= t_mesh) {
            const JumpEvent& j = jumps_[next_jump];
            state += drift_rate_ * (j.time - tc);
            tc = j.time;
            visit(state);  // pre-jump value (sup over the linear segment)
            state += j.mark;
            visit(state);
            ++next_jump;
        }
        state += drift_rate_ * (t_mesh - tc) + cont_incr_[m - 1];
        tc = t_mesh;
        visit(state);
    }
    return worst;
}

PathSample simulate_path(const ControlPoint& c, double x0, double t0, double horizon,
                         double dt, SeedSpec seed) {
    if (!(dt > 0.0) || !(horizon > t0)) throw SpecError("simulate_path needs dt > 0, T > t0");
    const double span = horizon - t0;
    const auto n_steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(span / dt)));
    const double dt_eff = span / static_cast<double>(n_steps);

    std::mt19937_64 eng = engine_for(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    // jumps first, then the Brownian increments: a fixed draw order keeps the
    // stream reproducible for a given SeedSpec
    std::vector<JumpEvent> jumps;
    const double total_rate = c.nu.total_intensity();
    if (total_rate > 0.0) {
        double t = t0;
        for (;;) {
            double u = 1.0 - unif(eng);  // in (0, 1]
            t += -std::log(u) / total_rate;
            if (t > horizon) break;
            double v = unif(eng) * total_rate;
            double mark = c.nu.atoms().back().mark;
            double acc = 0.0;
            for (const LevyAtom& at : c.nu.atoms()) {
                acc += at.intensity;
                if (v < acc) {
                    mark = at.mark;
                    break;
                }
            }
            jumps.push_back({t, mark});
        }
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::sqrt(c.a * dt_eff);
    std::vector<double> incr(n_steps);
    for (std::size_t m = 0; m < n_steps; ++m) incr[m] = scale * normal(eng);

    return PathSample(x0, t0, horizon, dt_eff, c.a, std::move(incr), std::move(jumps),
                      -c.nu.mean_rate());
}

QvBreakdown pathwise_qv(const PathSample& p) {
    double cont = 0.0;
    for (double c : p.cont_incr()) cont += c * c;
    double jump = 0.0;
    for (const JumpEvent& j : p.jumps()) jump += j.mark * j.mark;
    double total = cont + jump;
    double span = p.horizon() - p.t0();
    return {total, (total - jump) / span, jump};
}

double doleans_exponential(const PathSample& p, double eta,
                           const std::function<double(double)>& gamma,
                           const ControlPoint& c) {
    double compensator = 0.0;
    for (const LevyAtom& at : c.nu.atoms()) {
        double g = gamma(at.mark);
        if (!(g > -1.0))
            throw SpecError("doleans_exponential requires gamma(e) > -1 on every atom");
        compensator += g * at.intensity;
    }
    const double span = p.horizon() - p.t0();
    // exp(eta*W - eta^2*span/2 + sum_j gamma(e_j) - span*compensator)
    //   * prod_j (1+gamma(e_j))*exp(-gamma(e_j));
    // the jump terms exp(gamma) and exp(-gamma) cancel pairwise, so the stable
    // form accumulates log1p factors instead.
    double log_e = eta * p.brownian_total() - 0.5 * eta * eta * span - span * compensator;
    for (const JumpEvent& j : p.jumps()) log_e += std::log1p(gamma(j.mark));
    return std::exp(log_e);
}

namespace {

McStats reduce_stats(const std::vector<double>& vals) {
    const auto n = static_cast<double>(vals.size());
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    double var = ss / (n - 1.0);
    return {mean, std::sqrt(var / n)};
}

template <class PerPath>
McStats mc_run(std::int64_t n_paths, PerPath&& per_path) {
    if (n_paths < 2) throw SpecError("Monte Carlo needs n_paths >= 2");
    std::vector<double> vals(static_cast<std::size_t>(n_paths));
    parallel_for(n_paths, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            vals[static_cast<std::size_t>(i)] = per_path(static_cast<std::uint64_t>(i));
    });
    return reduce_stats(vals);
}

}  // namespace

McStats mc_terminal(const ControlPoint& c, const Expr& g, double x0, double t0,
                    double horizon, double dt, std::int64_t n_paths,
                    std::uint64_t master_seed) {
    return mc_run(n_paths, [&](std::uint64_t idx) {
        PathSample p = simulate_path(c, x0, t0, horizon, dt, {master_seed, idx});
        return g.eval(horizon, p.terminal_state());
    });
}

McStats mc_sup_excursion(const ControlPoint& c, double t0, double gap, double dt,
                         std::int64_t n_paths, std::uint64_t master_seed) {
    return mc_run(n_paths, [&](std::uint64_t idx) {
        PathSample p = simulate_path(c, 0.0, t0, t0 + gap, dt, {master_seed, idx});
        return p.max_sq_excursion();
    });
}

McStats mc_doleans(const ControlPoint& c, double eta,
                   const std::function<double(double)>& gamma, double horizon, double dt,
                   std::int64_t n_paths, std::uint64_t master_seed) {
    return mc_run(n_paths, [&](std::uint64_t idx) {
        PathSample p = simulate_path(c, 0.0, 0.0, horizon, dt, {master_seed, idx});
        return doleans_exponential(p, eta, gamma, c);
    });
}

}  // namespace levy2b
