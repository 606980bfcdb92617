#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levy2b/controls.hpp"
#include "levy2b/expr.hpp"
#include "levy2b/grid.hpp"

namespace levy2b {

/// One fully validated problem instance. Construction happens only through
/// load_config / parse_config_text so every instance satisfies the grid,
/// control-set and CFL invariants.
struct ProblemConfig {
    SpaceTimeGrid grid;      // nt resolved (auto rule applied)
    bool nt_auto = true;
    double cfl_safety = 0.9;

    ControlGrid controls;
    GeneratorSpec generator;
    Expr terminal = Expr::constant(0.0);
    ControlBounds bounds{1e-8, 1e8, 1e8};

    std::uint64_t master_seed = 42;
    std::int64_t n_paths = 100000;
    int n_picard = 2;
    double region_lo = -2.0;
    double region_hi = 2.0;
    double x0 = 0.0;
    double mc_dt = 0.01;
    double doleans_eta = 0.5;
    double split_time = 0.0;  // 0 = T/2 snapped to the mesh
    double tol_compare = 2e-2;
    double tol_boundary = 5e-3;
    double tol_dpp_equality = 1e-2;
    double k_positive_min = 0.0;  // 0 disables the strict-positivity verdict
    std::vector<double> probe_x;
    std::vector<double> probe_expected;
    double probe_tol = 2e-2;

    std::string digest;  // FNV-1a of the canonical key=value text

    double resolved_split_time() const;
};

struct ConfigParseResult {
    std::optional<ProblemConfig> config;
    std::vector<std::string> errors;  // all collected, not first-only
};

/// Parses and validates; collects every error instead of stopping at the first.
ConfigParseResult parse_config_text(const std::string& text);

ConfigParseResult try_load_config(const std::string& path);

/// Throwing wrapper: ConfigError message joins all collected errors.
ProblemConfig load_config(const std::string& path);

}  // namespace levy2b
