#pragma once

#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "builtin_sets.hpp"
#include "geometry.hpp"
#include "json_io.hpp"
#include "quadrature.hpp"

// Parsing helpers shared by the command-line tool: key=value quadrature
// settings, numeric lists, points, and set sources.

namespace menger {

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw std::invalid_argument("bad number for " + what + ": '" + s + "'");
    return v;
}

inline std::int64_t parse_int(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(t, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (t.empty() || used != t.size()) throw std::invalid_argument("bad integer for " + what + ": '" + s + "'");
    return v;
}

}  // namespace detail

// Sets one QuadratureConfig field by name. Unknown keys throw.
inline void apply_setting(QuadratureConfig& c, const std::string& key, const std::string& value) {
    const std::string k = detail::trim(key);
    if (k == "base_order") c.base_order = static_cast<int>(detail::parse_int(value, k));
    else if (k == "max_depth") c.max_depth = static_cast<int>(detail::parse_int(value, k));
    else if (k == "rel_tol") c.rel_tol = detail::parse_double(value, k);
    else if (k == "abs_tol") c.abs_tol = detail::parse_double(value, k);
    else if (k == "singularity_grading") c.singularity_grading = detail::parse_double(value, k);
    else if (k == "g_div") c.g_div = detail::parse_double(value, k);
    else if (k == "max_evals") c.max_evals = detail::parse_int(value, k);
    else if (k == "mc_samples") c.mc_samples = detail::parse_int(value, k);
    else if (k == "seed") c.seed = static_cast<std::uint64_t>(detail::parse_int(value, k));
    else throw std::invalid_argument("unknown config key '" + k + "'");
}

// Applies "key = value" lines; blank lines and lines starting with '#' are skipped.
inline void apply_config_text(QuadratureConfig& c, std::istream& in) {
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(n) + ": expected key=value");
        apply_setting(c, t.substr(0, eq), t.substr(eq + 1));
    }
    c.validate();
}

inline void apply_config_text(QuadratureConfig& c, const std::string& text) {
    std::istringstream in(text);
    apply_config_text(c, in);
}

// Comma-separated numbers; an empty string gives an empty list.
inline std::vector<double> parse_number_list(const std::string& s) {
    std::vector<double> out;
    if (detail::trim(s).empty()) return out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(detail::parse_double(item, "list entry"));
    return out;
}

// "start:stop:step" inclusive of stop up to rounding, or a comma list.
inline std::vector<double> parse_sweep(const std::string& s) {
    if (s.find(':') == std::string::npos) return parse_number_list(s);
    std::vector<std::string> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3) throw std::invalid_argument("sweep must be start:stop:step");
    const double a = detail::parse_double(parts[0], "sweep start");
    const double b = detail::parse_double(parts[1], "sweep stop");
    const double h = detail::parse_double(parts[2], "sweep step");
    if (!(h > 0.0)) throw std::invalid_argument("sweep step must be positive");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double v = a + k * h;
        if (v > b + 1e-9 * h) break;
        out.push_back(v);
    }
    return out;
}

inline std::vector<double> parse_point(const std::string& s) {
    auto v = parse_number_list(s);
    if (v.size() != 2 && v.size() != 3) throw std::invalid_argument("point needs 2 or 3 coordinates: '" + s + "'");
    return v;
}

// Set description as JSON: a registry name is expanded, anything else is read as a file.
inline nlohmann::json load_set_json(const std::string& source) {
    try {
        return to_json(builtin_set(source));
    } catch (const std::invalid_argument&) {
        if (source.rfind("builtin:", 0) == 0) throw;
    }
    return read_json_file(source);
}

}  // namespace menger
