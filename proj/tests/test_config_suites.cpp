#include <doctest.h>

#include <cmath>

#include "levy2b/config.hpp"
#include "levy2b/kernel.hpp"
#include "levy2b/suites.hpp"

using namespace levy2b;

namespace {

const char* kMinimal = R"(
grid.x_min = -4.0
grid.x_max = 4.0
grid.nx = 81
grid.t_horizon = 0.25
controls.count = 1
control.0.a = 1.0
terminal.g = "x"
)";

const char* kSmallTwoControl = R"(
# small convex two-control instance
grid.x_min = -4.0
grid.x_max = 4.0
grid.nx = 81          # dx = 0.1
grid.t_horizon = 0.25
controls.count = 2
control.0.a = 1.0
control.0.atoms = []
control.1.a = 2.0
terminal.g = "x^2"
run.n_paths = 4000
run.region = [-1.5, 1.5]
run.mc_dt = 0.025
bounds.a_min = 0.5
bounds.a_max = 4.0
bounds.moment_cap = 16.0
)";

}  // namespace

TEST_CASE("minimal config parses with defaults") {
    ConfigParseResult r = parse_config_text(kMinimal);
    REQUIRE(r.errors.empty());
    REQUIRE(r.config.has_value());
    const ProblemConfig& cfg = *r.config;
    CHECK(cfg.controls.size() == 1);
    CHECK(cfg.n_picard == 2);
    CHECK(cfg.master_seed == 42);
    CHECK(cfg.nt_auto);
    // auto rule: dt = 0.9 * cfl bound; nt = ceil(T/dt)
    double bound = 0.9 / (1.0 / (cfg.grid.dx() * cfg.grid.dx()));
    CHECK(cfg.grid.nt == static_cast<int>(std::ceil(0.25 / bound)));
    CHECK(cfg.grid.dt() <= cfl_max_dt(cfg.controls[0], cfg.grid.dx()));
    CHECK_FALSE(cfg.digest.empty());
}

TEST_CASE("errors are collected, not first-only") {
    const char* bad = R"(
grid.x_min = -4.0
grid.x_max = 4.0
grid.nx = 2
grid.t_horizon = 0.25
controls.count = 1
control.0.a = 1.0
generator.jump_slope_c = -1.0
mystery.key = 3
)";
    ConfigParseResult r = parse_config_text(bad);
    CHECK_FALSE(r.config.has_value());
    REQUIRE(r.errors.size() >= 4);
    bool has_nx = false, has_slope = false, has_terminal = false, has_unknown = false;
    for (const std::string& e : r.errors) {
        if (e.find("nx >= 3") != std::string::npos) has_nx = true;
        if (e.find("c must exceed -1 + delta") != std::string::npos) has_slope = true;
        if (e.find("terminal.g") != std::string::npos) has_terminal = true;
        if (e.find("unknown key") != std::string::npos) has_unknown = true;
    }
    CHECK(has_nx);
    CHECK(has_slope);
    CHECK(has_terminal);
    CHECK(has_unknown);
}

TEST_CASE("expression errors carry their key") {
    std::string text = std::string(kMinimal) + "generator.h0 = \"x + * 2\"\n";
    ConfigParseResult r = parse_config_text(text);
    CHECK_FALSE(r.config.has_value());
    bool found = false;
    for (const std::string& e : r.errors)
        if (e.find("generator.h0") != std::string::npos &&
            e.find("offset") != std::string::npos)
            found = true;
    CHECK(found);
}

TEST_CASE("explicit nt must satisfy the CFL bound") {
    std::string text = std::string(kMinimal) + "grid.nt = 10\n";  // dt = 0.025 >> bound
    ConfigParseResult r = parse_config_text(text);
    CHECK_FALSE(r.config.has_value());
    bool found = false;
    for (const std::string& e : r.errors)
        if (e.find("need nt >=") != std::string::npos) found = true;
    CHECK(found);

    std::string ok = std::string(kMinimal) + "grid.nt = 32\n";  // dt = 0.0078125 < 0.01
    ConfigParseResult r2 = parse_config_text(ok);
    CHECK(r2.config.has_value());
    CHECK_FALSE(r2.config->nt_auto);
}

TEST_CASE("off-mesh split times are rejected") {
    std::string text = std::string(kSmallTwoControl) + "run.split_time = 0.1234\n";
    ConfigParseResult r = parse_config_text(text);
    CHECK_FALSE(r.config.has_value());
}

TEST_CASE("suite reports are deterministic for a fixed config and seed") {
    ConfigParseResult r = parse_config_text(kSmallTwoControl);
    REQUIRE(r.config.has_value());
    RunReport a = run_suite(*r.config, Suite::Minimality);
    RunReport b = run_suite(*r.config, Suite::Minimality);
    CHECK(a.canonical_dump() == b.canonical_dump());
    CHECK(a.all_pass());
    CHECK(a.exit_code() == 0);

    RunReport f = run_suite(*r.config, Suite::Fenchel);
    RunReport f2 = run_suite(*r.config, Suite::Fenchel);
    CHECK(f.canonical_dump() == f2.canonical_dump());
    CHECK(f.all_pass());
}

TEST_CASE("failed probe expectations produce exit code 1") {
    std::string text = std::string(kSmallTwoControl) +
                       "run.probe_x = [0.0]\nrun.probe_expected = [1000.0]\n";
    ConfigParseResult r = parse_config_text(text);
    REQUIRE(r.config.has_value());
    RunReport rep = run_suite(*r.config, Suite::Compare);
    CHECK_FALSE(rep.all_pass());
    CHECK(rep.exit_code() == 1);
}

TEST_CASE("compare suite validates the convex closed form end to end") {
    std::string text = std::string(kSmallTwoControl) +
                       "run.probe_x = [0.0]\nrun.probe_expected = [0.5]\n"
                       "run.probe_tol = 0.02\n";
    // T = 0.25 and max variance a = 2: u(0,0) = 2 * 0.25 = 0.5
    ConfigParseResult r = parse_config_text(text);
    REQUIRE(r.config.has_value());
    RunReport rep = run_suite(*r.config, Suite::Compare);
    CHECK(rep.all_pass());
}

TEST_CASE("dpp and simulate suites pass on the small instance") {
    ConfigParseResult r = parse_config_text(kSmallTwoControl);
    REQUIRE(r.config.has_value());
    CHECK(run_suite(*r.config, Suite::DppCheck).all_pass());
    CHECK(run_suite(*r.config, Suite::Simulate).all_pass());
}

TEST_CASE("minimality suite reports all-zero statistics for a singleton control") {
    ConfigParseResult r = parse_config_text(kMinimal);
    REQUIRE(r.config.has_value());
    RunReport rep = run_suite(*r.config, Suite::Minimality);
    CHECK(rep.all_pass());
    const auto& vals = rep.json()["cases"]["minimality"]["values"];
    CHECK(vals["max_of_min_defect"].get<double>() == 0.0);
    CHECK(vals["max_total_control0"].get<double>() == 0.0);
    CHECK(vals["negative_violations"].get<std::int64_t>() == 0);
}
