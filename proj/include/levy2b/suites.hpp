#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "levy2b/config.hpp"
#include "levy2b/report.hpp"

namespace levy2b {

enum class Suite {
    SolvePide,
    SolveProb,
    Compare,
    Simulate,
    Fenchel,
    CheckViscosity,
    DppCheck,
    Minimality,
    All,
};

std::optional<Suite> suite_from_name(std::string_view name);
const std::vector<std::string>& suite_names();

/// Runs one experiment suite on a validated config. Deterministic for a given
/// (config, master_seed). CFL/spec problems inside a suite surface as failed
/// verdicts with diagnostics rather than exceptions. With a non-empty
/// csv_dir, tabular outputs are written there.
RunReport run_suite(const ProblemConfig& cfg, Suite suite, const std::string& csv_dir = "");

}  // namespace levy2b
