#include "levy2b/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace levy2b {

RunReport::RunReport(std::string suite, std::string config_digest, std::uint64_t seed) {
    j_["meta"]["suite"] = std::move(suite);
    j_["meta"]["config_digest"] = std::move(config_digest);
    j_["meta"]["seed"] = seed;
    j_["meta"]["volatile"]["timestamp"] = std::chrono::duration_cast<std::chrono::milliseconds>(
                                              std::chrono::system_clock::now().time_since_epoch())
                                              .count();
    j_["meta"]["volatile"]["wall_time_s"] = 0.0;
    j_["cases"] = nlohmann::json::object();
    j_["summary"]["pass"] = 0;
    j_["summary"]["fail"] = 0;
    j_["summary"]["all_pass"] = true;
}

nlohmann::json& RunReport::case_values(const std::string& case_name) {
    return j_["cases"][case_name]["values"];
}

void RunReport::verdict(const std::string& case_name, const std::string& check, bool pass,
                        const std::string& detail) {
    nlohmann::json v;
    v["pass"] = pass;
    v["detail"] = detail;
    j_["cases"][case_name]["verdicts"][check] = std::move(v);
    if (pass)
        ++passes_;
    else
        ++fails_;
    j_["summary"]["pass"] = passes_;
    j_["summary"]["fail"] = fails_;
    j_["summary"]["all_pass"] = fails_ == 0;
}

void RunReport::merge(const RunReport& other) {
    for (auto& [name, body] : other.j_["cases"].items()) j_["cases"][name] = body;
    passes_ += other.passes_;
    fails_ += other.fails_;
    j_["summary"]["pass"] = passes_;
    j_["summary"]["fail"] = fails_;
    j_["summary"]["all_pass"] = fails_ == 0;
}

void RunReport::set_wall_time(double seconds) {
    j_["meta"]["volatile"]["wall_time_s"] = seconds;
}

std::string RunReport::canonical_dump(int indent) const {
    nlohmann::json copy = j_;
    copy["meta"].erase("volatile");
    return copy.dump(indent);
}

std::string RunReport::dump(int indent) const { return j_.dump(indent); }

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i != 0) out << ',';
        out << header[i];
    }
    out << "\r\n";
    char buf[40];
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i != 0) out << ',';
            std::snprintf(buf, sizeof buf, "%.17g", row[i]);
            out << buf;
        }
        out << "\r\n";
    }
}

}  // namespace levy2b
