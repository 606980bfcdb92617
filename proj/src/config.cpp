#include "levy2b/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "levy2b/kernel.hpp"

namespace levy2b {

namespace {

struct RawValue {
    enum class Kind { Number, Text, NumberList } kind;
    double number = 0.0;
    std::string text;
    std::vector<double> numbers;
    int line = 0;
    bool used = false;
};

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

class RawConfig {
public:
    std::map<std::string, RawValue> values;
    std::vector<std::string>* errors;

    void fail(const std::string& msg) { errors->push_back(msg); }

    const RawValue* find(const std::string& key) {
        auto it = values.find(key);
        if (it == values.end()) return nullptr;
        it->second.used = true;
        return &it->second;
    }

    double number(const std::string& key, double fallback) {
        const RawValue* v = find(key);
        if (v == nullptr) return fallback;
        if (v->kind != RawValue::Kind::Number) {
            fail(key + ": expected a number (line " + std::to_string(v->line) + ")");
            return fallback;
        }
        return v->number;
    }

    double required_number(const std::string& key, double fallback) {
        const RawValue* v = find(key);
        if (v == nullptr) {
            fail(key + ": missing required key");
            return fallback;
        }
        if (v->kind != RawValue::Kind::Number) {
            fail(key + ": expected a number (line " + std::to_string(v->line) + ")");
            return fallback;
        }
        return v->number;
    }

    std::string text(const std::string& key, const std::string& fallback) {
        const RawValue* v = find(key);
        if (v == nullptr) return fallback;
        if (v->kind != RawValue::Kind::Text) {
            fail(key + ": expected a quoted string (line " + std::to_string(v->line) + ")");
            return fallback;
        }
        return v->text;
    }

    std::vector<double> number_list(const std::string& key, std::vector<double> fallback) {
        const RawValue* v = find(key);
        if (v == nullptr) return fallback;
        if (v->kind != RawValue::Kind::NumberList) {
            fail(key + ": expected a bracketed number list (line " + std::to_string(v->line) +
                 ")");
            return fallback;
        }
        return v->numbers;
    }
};

void parse_lines(const std::string& text, RawConfig& raw) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // strip comments outside quotes
        bool in_quote = false;
        std::string stripped;
        for (char c : line) {
            if (c == '"') in_quote = !in_quote;
            if (c == '#' && !in_quote) break;
            stripped.push_back(c);
        }
        stripped = trim(stripped);
        if (stripped.empty()) continue;
        std::size_t eq = stripped.find('=');
        if (eq == std::string::npos) {
            raw.fail("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        std::string key = trim(stripped.substr(0, eq));
        std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty()) {
            raw.fail("line " + std::to_string(line_no) + ": empty key or value");
            continue;
        }
        if (raw.values.count(key) != 0) {
            raw.fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
            continue;
        }
        RawValue rv;
        rv.line = line_no;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"') {
                raw.fail("line " + std::to_string(line_no) + ": unterminated string");
                continue;
            }
            rv.kind = RawValue::Kind::Text;
            rv.text = val.substr(1, val.size() - 2);
        } else if (val.front() == '[') {
            if (val.back() != ']') {
                raw.fail("line " + std::to_string(line_no) + ": unterminated list");
                continue;
            }
            rv.kind = RawValue::Kind::NumberList;
            std::string inner = val.substr(1, val.size() - 2);
            std::size_t pos = 0;
            bool ok = true;
            while (pos < inner.size()) {
                std::size_t comma = inner.find(',', pos);
                std::string item = trim(inner.substr(
                    pos, comma == std::string::npos ? std::string::npos : comma - pos));
                if (!item.empty()) {
                    double d = 0.0;
                    if (!parse_number(item, d)) {
                        raw.fail("line " + std::to_string(line_no) + ": bad list entry '" +
                                 item + "'");
                        ok = false;
                        break;
                    }
                    rv.numbers.push_back(d);
                }
                if (comma == std::string::npos) break;
                pos = comma + 1;
            }
            if (!ok) continue;
        } else if (double d = 0.0; parse_number(val, d)) {
            rv.kind = RawValue::Kind::Number;
            rv.number = d;
        } else {
            // bare word ("auto"); keep as text
            rv.kind = RawValue::Kind::Text;
            rv.text = val;
        }
        raw.values.emplace(std::move(key), std::move(rv));
    }
}

std::string canonical_text(const RawConfig& raw) {
    std::string out;
    for (const auto& [key, rv] : raw.values) {
        out += key;
        out += '=';
        switch (rv.kind) {
            case RawValue::Kind::Number: {
                char buf[32];
                auto [p, ec] = std::to_chars(buf, buf + sizeof buf, rv.number);
                out.append(buf, p);
                break;
            }
            case RawValue::Kind::Text: out += rv.text; break;
            case RawValue::Kind::NumberList:
                for (double d : rv.numbers) {
                    char buf[32];
                    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
                    out.append(buf, p);
                    out += ',';
                }
                break;
        }
        out += '\n';
    }
    return out;
}

Expr parse_expr_or_fail(RawConfig& raw, const std::string& key, const std::string& source) {
    try {
        return Expr::parse(source);
    } catch (const ParseError& e) {
        raw.fail(key + ": " + e.what());
        return Expr::constant(0.0);
    }
}

}  // namespace

double ProblemConfig::resolved_split_time() const {
    if (split_time > 0.0) return split_time;
    int half = std::max(1, grid.nt / 2);
    return grid.t(half);
}

ConfigParseResult parse_config_text(const std::string& text) {
    ConfigParseResult result;
    RawConfig raw;
    raw.errors = &result.errors;
    parse_lines(text, raw);

    ProblemConfig cfg;
    cfg.grid.x_min = raw.required_number("grid.x_min", -8.0);
    cfg.grid.x_max = raw.required_number("grid.x_max", 8.0);
    cfg.grid.nx = static_cast<int>(raw.required_number("grid.nx", 321));
    cfg.grid.horizon = raw.required_number("grid.t_horizon", 1.0);
    cfg.cfl_safety = raw.number("grid.cfl_safety", 0.9);

    if (cfg.grid.nx < 3) raw.fail("grid.nx: nx >= 3 required");
    if (!(cfg.grid.x_min < cfg.grid.x_max)) raw.fail("grid.x_min: x_min < x_max required");
    if (!(cfg.grid.horizon > 0.0)) raw.fail("grid.t_horizon: T > 0 required");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0))
        raw.fail("grid.cfl_safety: must be in (0, 1]");

    // controls
    int count = static_cast<int>(raw.required_number("controls.count", 0));
    std::vector<ControlPoint> points;
    for (int c = 0; c < count; ++c) {
        std::string base = "control." + std::to_string(c) + ".";
        double a = raw.required_number(base + "a", 1.0);
        std::vector<double> flat = raw.number_list(base + "atoms", {});
        if (flat.size() % 2 != 0) {
            raw.fail(base + "atoms: expected flat [mark, intensity, ...] pairs");
            flat.clear();
        }
        std::vector<LevyAtom> atoms;
        for (std::size_t k = 0; k + 1 < flat.size(); k += 2)
            atoms.push_back({flat[k], flat[k + 1]});
        try {
            points.push_back({a, LevyMeasure(std::move(atoms))});
        } catch (const SpecError& e) {
            raw.fail(base + "atoms: " + e.what());
        }
    }
    if (points.empty()) {
        raw.fail("controls.count: at least one control point is required");
    } else {
        try {
            cfg.controls = ControlGrid(std::move(points));
        } catch (const SpecError& e) {
            raw.fail(std::string("controls: ") + e.what());
        }
    }

    // generator
    double kappa_y = raw.number("generator.kappa_y", 0.0);
    double kappa_z = raw.number("generator.kappa_z", 0.0);
    double slope_c = raw.number("generator.jump_slope_c", 0.0);
    double slope_delta = raw.number("generator.jump_slope_delta", 0.5);
    Expr h0 = parse_expr_or_fail(raw, "generator.h0", raw.text("generator.h0", "0"));
    if (!(slope_delta > 0.0)) raw.fail("generator.jump_slope_delta: must be > 0");
    if (!(slope_c >= -1.0 + slope_delta))
        raw.fail("generator.jump_slope_c: c must exceed -1 + delta (got c = " +
                 std::to_string(slope_c) + ", delta = " + std::to_string(slope_delta) + ")");
    else if (slope_delta > 0.0)
        cfg.generator = GeneratorSpec(kappa_y, kappa_z, slope_c, slope_delta, h0);

    // terminal
    {
        const RawValue* g = raw.find("terminal.g");
        if (g == nullptr)
            raw.fail("terminal.g: missing required key");
        else if (g->kind != RawValue::Kind::Text)
            raw.fail("terminal.g: expected a quoted expression");
        else
            cfg.terminal = parse_expr_or_fail(raw, "terminal.g", g->text);
    }

    // bounds
    cfg.bounds.a_min = raw.number("bounds.a_min", cfg.bounds.a_min);
    cfg.bounds.a_max = raw.number("bounds.a_max", cfg.bounds.a_max);
    cfg.bounds.moment_cap = raw.number("bounds.moment_cap", cfg.bounds.moment_cap);
    if (!(cfg.bounds.a_min > 0.0)) raw.fail("bounds.a_min: must be > 0");
    if (cfg.controls.size() > 0) {
        ControlGridReport vr = validate_control_grid(cfg.controls, cfg.bounds);
        for (const ControlCheck& check : vr.checks)
            if (!check.pass)
                raw.fail("control." + std::to_string(check.index) + ": " + check.violation);
    }

    // run section
    cfg.master_seed = static_cast<std::uint64_t>(raw.number("run.master_seed", 42.0));
    cfg.n_paths = static_cast<std::int64_t>(raw.number("run.n_paths", 100000.0));
    cfg.n_picard = static_cast<int>(raw.number("run.n_picard", 2.0));
    std::vector<double> region = raw.number_list("run.region", {-2.0, 2.0});
    if (region.size() != 2 || !(region[0] < region[1]))
        raw.fail("run.region: expected [lo, hi] with lo < hi");
    else {
        cfg.region_lo = region[0];
        cfg.region_hi = region[1];
    }
    cfg.x0 = raw.number("run.x0", 0.0);
    cfg.mc_dt = raw.number("run.mc_dt", 0.01);
    cfg.doleans_eta = raw.number("run.doleans_eta", 0.5);
    cfg.split_time = raw.number("run.split_time", 0.0);
    cfg.tol_compare = raw.number("run.tol_compare", cfg.tol_compare);
    cfg.tol_boundary = raw.number("run.tol_boundary", cfg.tol_boundary);
    cfg.tol_dpp_equality = raw.number("run.tol_dpp_equality", cfg.tol_dpp_equality);
    cfg.k_positive_min = raw.number("run.k_positive_min", 0.0);
    cfg.probe_x = raw.number_list("run.probe_x", {});
    cfg.probe_expected = raw.number_list("run.probe_expected", {});
    cfg.probe_tol = raw.number("run.probe_tol", cfg.probe_tol);
    if (cfg.probe_x.size() != cfg.probe_expected.size())
        raw.fail("run.probe_expected: must match run.probe_x in length");
    if (cfg.n_picard < 1) raw.fail("run.n_picard: must be >= 1");
    if (cfg.n_paths < 2) raw.fail("run.n_paths: must be >= 2");
    if (!(cfg.mc_dt > 0.0)) raw.fail("run.mc_dt: must be > 0");

    // time mesh: explicit nt or the auto rule dt = safety * min cfl bound
    if (cfg.controls.size() > 0 && cfg.grid.nx >= 3 && cfg.grid.x_min < cfg.grid.x_max &&
        cfg.grid.horizon > 0.0) {
        double dx = cfg.grid.dx();
        double min_bound = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < cfg.controls.size(); ++c) {
            min_bound = std::min(min_bound, cfl_max_dt(cfg.controls[c], dx));
            const ControlPoint& p = cfg.controls[c];
            if (std::abs(p.nu.mean_rate()) > p.a / dx)
                raw.fail("control." + std::to_string(c) +
                         ": |sum lambda*e| > a/dx breaks the monotone drift transfer; "
                         "refine the spatial grid");
        }
        const RawValue* nt_raw = raw.find("grid.nt");
        bool auto_nt = nt_raw == nullptr ||
                       (nt_raw->kind == RawValue::Kind::Text && nt_raw->text == "auto");
        if (auto_nt) {
            cfg.nt_auto = true;
            double dt_auto = cfg.cfl_safety * min_bound;
            cfg.grid.nt = static_cast<int>(std::ceil(cfg.grid.horizon / dt_auto));
        } else if (nt_raw->kind == RawValue::Kind::Number) {
            cfg.nt_auto = false;
            cfg.grid.nt = static_cast<int>(nt_raw->number);
            if (cfg.grid.nt < 1)
                raw.fail("grid.nt: must be >= 1");
            else if (cfg.grid.horizon / cfg.grid.nt > min_bound * (1.0 + 1e-12))
                raw.fail("grid.nt: dt = " + std::to_string(cfg.grid.horizon / cfg.grid.nt) +
                         " violates the CFL bound " + std::to_string(min_bound) +
                         "; need nt >= " +
                         std::to_string(static_cast<int>(std::ceil(cfg.grid.horizon / min_bound))));
        } else {
            raw.fail("grid.nt: expected a number or auto");
        }
        if (cfg.split_time > 0.0 && cfg.grid.nt >= 2) {
            double steps = cfg.split_time / cfg.grid.dt();
            if (std::abs(steps - std::llround(steps)) > 1e-9 || steps < 1.0 ||
                steps > cfg.grid.nt - 1)
                raw.fail("run.split_time: not an interior mesh time");
        }
    } else {
        raw.find("grid.nt");  // mark as consumed to avoid an unknown-key error
    }

    for (const auto& [key, rv] : raw.values)
        if (!rv.used)
            result.errors.push_back(key + ": unknown key (line " + std::to_string(rv.line) +
                                    ")");

    if (!result.errors.empty()) return result;

    char digest[17];
    std::snprintf(digest, sizeof digest, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canonical_text(raw))));
    cfg.digest = digest;
    result.config = std::move(cfg);
    return result;
}

ConfigParseResult try_load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigParseResult r;
        r.errors.push_back("cannot open config file: " + path);
        return r;
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

ProblemConfig load_config(const std::string& path) {
    ConfigParseResult r = try_load_config(path);
    if (!r.config) {
        std::string joined;
        for (const std::string& e : r.errors) {
            if (!joined.empty()) joined += "\n";
            joined += e;
        }
        throw ConfigError(joined);
    }
    return std::move(*r.config);
}

}  // namespace levy2b
