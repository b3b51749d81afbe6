#include "wtrace/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace wtrace {

const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = {
        {"p", "2", "integrability exponent, p > 1"},
        {"theta", "0.5", "weight power, n - 1 < theta < n - 1 + p"},
        {"n", "1", "space dimension, 1 or 2"},
        {"seed", "20240601", "seed of the battery generator"},
        {"refine", "0", "number of 2x refinements applied to every mesh"},
        {"threads", "0", "worker threads for batteries; 0 picks the hardware count"},

        {"grid.t_min", "-1", "start of the time window"},
        {"grid.t_max", "3", "end of the time window"},
        {"grid.t_cells", "40", "time cells"},
        {"grid.x1_max", "6", "truncation of the normal axis"},
        {"grid.x1_cells", "32", "normal cells"},
        {"grid.q", "3", "grading exponent of the normal axis"},
        {"grid.xp_max", "3", "tangential axis is [-xp_max, xp_max] (n = 2)"},
        {"grid.xp_cells", "30", "tangential cells (n = 2)"},

        {"quad.tau_min", "1e-10", "cutoff of singular integrals"},
        {"quad.log_factor", "1.5", "ratio of consecutive log-graded cells"},
        {"quad.log_points", "6", "Gauss points per log-graded cell"},

        {"battery.size", "10", "members of the randomized battery"},
        {"battery.scale_min", "0.05", "smallest normal scale of boundary-hugging members"},
        {"battery.scale_max", "1", "largest normal scale of boundary-hugging members"},

        {"kernel.x1", "0.1, 0.5, 1, 2", "normal positions of the kernel identities"},
        {"kernel.dims", "1, 2", "dimensions checked"},
        {"kernel.max_order", "2", "largest |alpha| of the derivative moments"},
        {"kernel.mass_tol", "1e-6", "tolerance of the mass identity"},
        {"kernel.moment_tol", "1e-6", "tolerance of the derivative moments"},

        {"norms.hardy_tol", "0.01", "relative tolerance of the x exp(-x) Hardy ratio"},
        {"norms.x1_max", "40", "normal truncation for the Hardy battery"},
        {"norms.x1_cells", "400", "normal cells for the Hardy battery"},

        {"boundary.time_mode", "auto", "auto, whole_line or window"},

        {"extend.trace_tol", "1e-3", "tolerance of max |trace(extend g) - g|"},
        {"extend.residual_x1_max", "1", "heat residual is measured for x1 below this"},
        {"extend.residual_levels", "4", "meshes in the heat residual study"},
        {"extend.min_residual_slope", "1.8", "required convergence slope of the heat residual"},
        {"extend.drift_tol", "0.1", "allowed relative drift of the max extension ratio"},

        {"trace.drift_tol", "0.1", "allowed relative drift of the max ratio under refinement"},

        {"repr.eps", "0.5", "mollification scale"},
        {"repr.tol", "1e-4", "tolerance of the representation residual"},
        {"repr.lambda_cells", "8", "cells of the lambda rule"},
        {"repr.mollifier_cells", "8", "cells per variable of the mollifier rule"},

        {"bvp.form", "nondivergence", "nondivergence or divergence"},
        {"bvp.scheme", "implicit_euler", "implicit_euler or crank_nicolson"},
        {"bvp.T", "1", "time horizon"},
        {"bvp.cells", "5", "cells per half interval on the coarsest mesh"},
        {"bvp.levels", "3", "meshes in the convergence study"},
        {"bvp.q", "1", "grading exponent of the interval mesh"},
        {"bvp.Lambda", "10", "bound on the weighted coefficient sizes"},
        {"bvp.beta", "0.1", "bound on rho times the first-order coefficient near the boundary"},
        {"bvp.boundary_layer", "0.05", "width of the layer where beta applies"},
        {"bvp.min_dt_slope", "0.9", "required convergence slope in the time step"},
        {"bvp.min_dx_slope", "1.9", "required convergence slope in the mesh size"},
        {"bvp.lift_tol", "1e-8", "allowed max |lifted - direct| relative to max |u|"},
        {"bvp.drift_tol", "0.1", "allowed relative drift of the estimate ratio"},
    };
    return keys;
}

namespace {

const ConfigKey& find_key(std::string_view name) {
    const auto& keys = config_keys();
    const auto it = std::find_if(keys.begin(), keys.end(), [&](const ConfigKey& k) { return k.name == name; });
    if (it == keys.end()) throw ValidationError("unknown configuration key '" + std::string(name) + "'");
    return *it;
}

std::string_view trim(std::string_view s) {
    const auto blank = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && blank(s.front())) s.remove_prefix(1);
    while (!s.empty() && blank(s.back())) s.remove_suffix(1);
    return s;
}

bool valid_key(std::string_view k) {
    if (k.empty()) return false;
    return std::all_of(k.begin(), k.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '.';
    });
}

double parse_double(std::string_view key, std::string_view s) {
    s = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
        throw ValidationError("key '" + std::string(key) + "': '" + std::string(s) + "' is not a number");
    }
    return v;
}

}  // namespace

Config Config::parse(std::string_view text, std::string_view origin) {
    Config c;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        const auto where = [&] { return std::string(origin) + ":" + std::to_string(line_no) + ": "; };
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ValidationError(where() + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (!valid_key(key)) throw ValidationError(where() + "malformed key '" + std::string(key) + "'");
        try {
            find_key(key);
        } catch (const ValidationError& e) {
            throw ValidationError(where() + e.what());
        }
        if (value.empty()) throw ValidationError(where() + "empty value for '" + std::string(key) + "'");
        if (c.values_.count(key)) throw ValidationError(where() + "key '" + std::string(key) + "' set twice");
        c.values_.emplace(std::string(key), std::string(value));
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
}

void Config::set(std::string_view key, std::string value) {
    find_key(key);
    values_[std::string(key)] = std::move(value);
}

bool Config::is_set(std::string_view key) const {
    find_key(key);
    return values_.find(key) != values_.end();
}

std::string Config::text(std::string_view key) const {
    const auto& k = find_key(key);
    const auto it = values_.find(key);
    return it != values_.end() ? it->second : std::string(k.default_value);
}

double Config::number(std::string_view key) const { return parse_double(key, text(key)); }

long long Config::integer(std::string_view key) const {
    const auto s = text(key);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("key '" + std::string(key) + "': '" + s + "' is not an integer");
    }
    return v;
}

std::uint64_t Config::unsigned_integer(std::string_view key) const {
    const auto s = text(key);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ValidationError("key '" + std::string(key) + "': '" + s + "' is not an unsigned integer");
    }
    return v;
}

bool Config::boolean(std::string_view key) const {
    const auto s = text(key);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ValidationError("key '" + std::string(key) + "': '" + s + "' is not a boolean");
}

std::vector<double> Config::numbers(std::string_view key) const {
    const auto s = text(key);
    std::vector<double> out;
    std::string_view rest = s;
    while (true) {
        const auto comma = rest.find(',');
        out.push_back(parse_double(key, rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return out;
}

std::map<std::string, std::string> Config::effective() const {
    std::map<std::string, std::string> out;
    for (const auto& k : config_keys()) out[std::string(k.name)] = text(k.name);
    return out;
}

}  // namespace wtrace
