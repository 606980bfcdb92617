#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace levy2b {

/// Suite output: per-case values and pass/fail verdicts, serialized as JSON
/// with a stable key order. Volatile fields (timestamp, wall time) live under
/// meta.volatile so the canonical dump is byte-identical for identical
/// (config, seed).
class RunReport {
public:
    RunReport(std::string suite, std::string config_digest, std::uint64_t seed);

    nlohmann::json& case_values(const std::string& case_name);

    void verdict(const std::string& case_name, const std::string& check, bool pass,
                 const std::string& detail);

    void merge(const RunReport& other);

    void set_wall_time(double seconds);

    bool all_pass() const noexcept { return fails_ == 0; }
    int fail_count() const noexcept { return fails_; }
    int pass_count() const noexcept { return passes_; }
    int exit_code() const noexcept { return fails_ == 0 ? 0 : 1; }

    /// Deterministic serialization (volatile fields excluded).
    std::string canonical_dump(int indent = 2) const;

    /// Full serialization including timestamp and wall time.
    std::string dump(int indent = 2) const;

    const nlohmann::json& json() const noexcept { return j_; }

private:
    nlohmann::json j_;
    int passes_ = 0;
    int fails_ = 0;
};

/// RFC 4180 CSV writer (numeric cells, no quoting needed).
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace levy2b
