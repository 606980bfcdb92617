#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "levy2b/config.hpp"
#include "levy2b/suites.hpp"

int main(int argc, char** argv) {
    CLI::App app{
        "levy2b - two-route numerical laboratory for second-order backward equations "
        "with jumps and the fully nonlinear integro-differential equations they represent"};

    std::string suite_name;
    std::string config_path;
    std::string out_path;
    std::string csv_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;

    std::string suite_help = "suite to run: ";
    for (const std::string& name : levy2b::suite_names()) suite_help += name + " ";
    app.add_option("suite", suite_name, suite_help)->required();
    app.add_option("--config", config_path, "problem config file")->required();
    auto* seed_opt = app.add_option("--seed", seed, "override run.master_seed");
    app.add_option("--out", out_path, "write the JSON report here");
    app.add_option("--csv", csv_dir, "directory for CSV exports");

    CLI11_PARSE(app, argc, argv);
    seed_set = seed_opt->count() > 0;

    auto suite = levy2b::suite_from_name(suite_name);
    if (!suite) {
        std::cerr << "unknown suite '" << suite_name << "'\n";
        return 2;
    }

    levy2b::ConfigParseResult parsed = levy2b::try_load_config(config_path);
    if (!parsed.config) {
        std::cerr << "configuration errors:\n";
        for (const std::string& e : parsed.errors) std::cerr << "  " << e << "\n";
        return 2;
    }
    levy2b::ProblemConfig cfg = std::move(*parsed.config);
    if (seed_set) cfg.master_seed = seed;

    if (!csv_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(csv_dir, ec);
        if (ec) {
            std::cerr << "cannot create csv directory: " << csv_dir << "\n";
            return 2;
        }
    }

    levy2b::RunReport report = levy2b::run_suite(cfg, *suite, csv_dir);

    for (const auto& [case_name, body] : report.json()["cases"].items()) {
        if (!body.contains("verdicts")) continue;
        for (const auto& [check, v] : body["verdicts"].items())
            std::cout << (v["pass"].get<bool>() ? "PASS" : "FAIL") << "  " << case_name
                      << " :: " << check << "  (" << v["detail"].get<std::string>() << ")\n";
    }
    std::cout << (report.all_pass() ? "ALL PASS" : "FAILURES") << "  ("
              << report.pass_count() << " pass, " << report.fail_count() << " fail)\n";

    if (!out_path.empty()) {
        std::ofstream out(out_path);
        out << report.dump() << "\n";
    }
    return report.exit_code();
}
