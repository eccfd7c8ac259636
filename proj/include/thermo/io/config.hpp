#pragma once
// Run configuration: a flat, sectioned key = value file (TOML-compatible
// subset: [section] headers, numbers, quoted strings, booleans, and one-line
// arrays). Values keep their source line so validation messages can point at
// file:line. Frequencies are given in ordinary Hz, temperatures in nK; the
// 2*pi and 1e-9 factors are applied here, at the boundary.

#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "thermo/bec.hpp"
#include "thermo/constants.hpp"
#include "thermo/errors.hpp"
#include "thermo/jc.hpp"

namespace thermo {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Strips a trailing comment that is not inside a quoted string.
inline std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

}  // namespace detail

class TomlFile {
public:
    struct Value {
        std::string raw;
        int line = 0;
    };

    static TomlFile parse(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ValidationError("cannot open config file: " + path);
        TomlFile f;
        f.path_ = path;
        std::string line;
        std::string section;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::string body = detail::trim(detail::strip_comment(line));
            if (body.empty()) continue;
            if (body.front() == '[') {
                if (body.back() != ']')
                    throw ValidationError(f.at(lineno) + "malformed section header");
                section = detail::trim(body.substr(1, body.size() - 2));
                if (section.empty())
                    throw ValidationError(f.at(lineno) + "empty section name");
                f.sections_[section];
                continue;
            }
            const std::size_t eq = body.find('=');
            if (eq == std::string::npos)
                throw ValidationError(f.at(lineno) + "expected key = value");
            const std::string key = detail::trim(body.substr(0, eq));
            const std::string value = detail::trim(body.substr(eq + 1));
            if (key.empty()) throw ValidationError(f.at(lineno) + "empty key");
            if (value.empty()) throw ValidationError(f.at(lineno) + "empty value for " + key);
            if (section.empty())
                throw ValidationError(f.at(lineno) + "key outside any [section]");
            f.sections_[section][key] = Value{value, lineno};
        }
        return f;
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    bool has_section(const std::string& section) const { return sections_.count(section) > 0; }

    double number(const std::string& section, const std::string& key) const {
        const Value& v = require(section, key);
        return parse_number(v, section, key);
    }

    double number_or(const std::string& section, const std::string& key, double fallback) const {
        return has(section, key) ? number(section, key) : fallback;
    }

    std::int64_t integer(const std::string& section, const std::string& key) const {
        const Value& v = require(section, key);
        const double x = parse_number(v, section, key);
        const auto i = static_cast<std::int64_t>(x);
        if (static_cast<double>(i) != x)
            throw ValidationError(at(v.line) + section + "." + key + " must be an integer");
        return i;
    }

    std::int64_t integer_or(const std::string& section, const std::string& key,
                            std::int64_t fallback) const {
        return has(section, key) ? integer(section, key) : fallback;
    }

    std::string text(const std::string& section, const std::string& key) const {
        const Value& v = require(section, key);
        return unquote(v, section, key);
    }

    std::string text_or(const std::string& section, const std::string& key,
                        const std::string& fallback) const {
        return has(section, key) ? text(section, key) : fallback;
    }

    std::vector<double> number_list(const std::string& section, const std::string& key) const {
        const Value& v = require(section, key);
        std::vector<double> out;
        for (const std::string& item : split_list(v, section, key))
            out.push_back(parse_number(Value{item, v.line}, section, key));
        return out;
    }

    std::vector<std::string> text_list(const std::string& section, const std::string& key) const {
        const Value& v = require(section, key);
        std::vector<std::string> out;
        for (const std::string& item : split_list(v, section, key))
            out.push_back(unquote(Value{item, v.line}, section, key));
        return out;
    }

    int line_of(const std::string& section, const std::string& key) const {
        return require(section, key).line;
    }

    std::string location(const std::string& section, const std::string& key) const {
        return at(line_of(section, key));
    }

    const std::string& path() const { return path_; }

private:
    std::string at(int line) const { return path_ + ":" + std::to_string(line) + ": "; }

    const Value& require(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end())
            throw ValidationError(path_ + ": missing [" + section + "] section");
        auto k = s->second.find(key);
        if (k == s->second.end())
            throw ValidationError(path_ + ": missing " + section + "." + key);
        return k->second;
    }

    double parse_number(const Value& v, const std::string& section, const std::string& key) const {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(v.raw, &used);
        } catch (const std::exception&) {
            throw ValidationError(at(v.line) + section + "." + key + ": not a number: " + v.raw);
        }
        if (detail::trim(v.raw.substr(used)).size() > 0)
            throw ValidationError(at(v.line) + section + "." + key + ": not a number: " + v.raw);
        return x;
    }

    std::string unquote(const Value& v, const std::string& section, const std::string& key) const {
        const std::string s = detail::trim(v.raw);
        if (s.size() >= 2 && s.front() == '"' && s.back() == '"')
            return s.substr(1, s.size() - 2);
        if (s.find('"') != std::string::npos)
            throw ValidationError(at(v.line) + section + "." + key + ": malformed string");
        return s;
    }

    std::vector<std::string> split_list(const Value& v, const std::string& section,
                                        const std::string& key) const {
        const std::string s = detail::trim(v.raw);
        if (s.size() < 2 || s.front() != '[' || s.back() != ']')
            throw ValidationError(at(v.line) + section + "." + key + ": expected [a, b, ...]");
        std::vector<std::string> out;
        std::string item;
        bool quoted = false;
        for (std::size_t i = 1; i + 1 < s.size(); ++i) {
            const char c = s[i];
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                out.push_back(detail::trim(item));
                item.clear();
            } else {
                item += c;
            }
        }
        if (!detail::trim(item).empty()) out.push_back(detail::trim(item));
        return out;
    }

    std::string path_;
    std::map<std::string, std::map<std::string, Value>> sections_;
};

struct ThermalSection {
    std::vector<double> grid_K;  // at least one temperature
    double tail_tol = default_tail_tol;
};

struct SurfaceSection {
    std::vector<double> g_grid_hz;
    std::vector<double> delta_grid_hz;
    double temperature_K = 0.0;
};

struct MetrologySection {
    std::vector<std::int64_t> m_list;
};

struct SimSection {
    int trials = 200;
    std::uint64_t seed = 42;
    std::optional<double> control_phase;  // empty = auto fringe centring
    double visibility = 1.0;
    double window_lo_K = 0.0;
    double window_hi_K = 0.0;
};

struct OutputSection {
    std::string directory = "out";
    std::vector<std::string> formats;
};

struct BecSection {
    CondensateParams cond;
    bool volume_defaulted = false;
    std::vector<double> accelerations;  // m/s^2
};

struct RunConfig {
    std::string source_path;
    SystemParams system;
    FormulaMode mode = FormulaMode::closed_form;
    ThermalSection thermal;
    SurfaceSection surface;
    MetrologySection metrology;
    SimSection sim;
    OutputSection output;
    std::optional<BecSection> bec;

    static RunConfig load(const std::string& path);
};

namespace detail {

inline std::vector<double> linspace(double lo, double hi, std::int64_t points) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    if (points == 1) {
        out.push_back(lo);
        return out;
    }
    for (std::int64_t i = 0; i < points; ++i)
        out.push_back(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1));
    return out;
}

inline std::vector<double> grid_from(const TomlFile& f, const std::string& section,
                                     const std::string& prefix, double unit_scale) {
    if (f.has(section, prefix + "_list")) {
        std::vector<double> out = f.number_list(section, prefix + "_list");
        for (double& x : out) x *= unit_scale;
        if (out.empty())
            throw ValidationError(f.location(section, prefix + "_list") + "empty grid");
        return out;
    }
    const double lo = f.number(section, prefix + "_min");
    const double hi = f.number(section, prefix + "_max");
    const std::int64_t points = f.integer(section, prefix + "_points");
    if (points < 1)
        throw ValidationError(f.location(section, prefix + "_points") +
                              "grid needs at least one point");
    if (!(hi >= lo))
        throw ValidationError(f.location(section, prefix + "_max") + "grid max below min");
    std::vector<double> out = linspace(lo, hi, points);
    for (double& x : out) x *= unit_scale;
    return out;
}

}  // namespace detail

inline RunConfig RunConfig::load(const std::string& path) {
    const TomlFile f = TomlFile::parse(path);
    RunConfig cfg;
    cfg.source_path = path;

    // [system]
    const double omega_a_hz = f.number("system", "omega_a_hz");
    const double g_hz = f.number("system", "g_hz");
    const bool has_delta = f.has("system", "delta_hz");
    const bool has_gap = f.has("system", "omega_d_hz");
    if (has_delta == has_gap)
        throw ValidationError(path + ": [system] needs exactly one of delta_hz / omega_d_hz");
    try {
        if (has_delta)
            cfg.system = SystemParams::from_detuning(angular(omega_a_hz), angular(g_hz),
                                                     angular(f.number("system", "delta_hz")));
        else
            cfg.system = SystemParams::from_gap(angular(omega_a_hz), angular(g_hz),
                                                angular(f.number("system", "omega_d_hz")));
    } catch (const DomainError& e) {
        throw ValidationError(f.location("system", "omega_a_hz") + e.what());
    }
    const std::string mode = f.text_or("system", "formula_mode", "closed_form");
    if (mode == "closed_form")
        cfg.mode = FormulaMode::closed_form;
    else if (mode == "diagonalization")
        cfg.mode = FormulaMode::diagonalization;
    else
        throw ValidationError(f.location("system", "formula_mode") +
                              "formula_mode must be closed_form or diagonalization");

    // [thermal] -- grid in nK, converted to K here
    if (f.has("thermal", "t_nk")) {
        cfg.thermal.grid_K = {kelvin_from_nk(f.number("thermal", "t_nk"))};
    } else {
        cfg.thermal.grid_K = detail::grid_from(f, "thermal", "t_nk", 1e-9);
    }
    for (double T : cfg.thermal.grid_K)
        if (!(T > 0.0))
            throw ValidationError(path + ": [thermal] temperatures must be positive");
    cfg.thermal.tail_tol = f.number_or("thermal", "tail_tol", default_tail_tol);
    if (!(cfg.thermal.tail_tol > 0.0 && cfg.thermal.tail_tol < 1.0))
        throw ValidationError(f.location("thermal", "tail_tol") + "tail_tol must lie in (0, 1)");

    // [surface]
    if (f.has_section("surface")) {
        cfg.surface.g_grid_hz = detail::grid_from(f, "surface", "g_hz", 1.0);
        cfg.surface.delta_grid_hz = detail::grid_from(f, "surface", "delta_hz", 1.0);
        cfg.surface.temperature_K = kelvin_from_nk(f.number("surface", "t_nk"));
        if (!(cfg.surface.temperature_K > 0.0))
            throw ValidationError(f.location("surface", "t_nk") + "temperature must be positive");
        for (double d : cfg.surface.delta_grid_hz)
            if (!(d > 0.0))
                throw ValidationError(path + ": [surface] detunings must be positive");
        for (double g : cfg.surface.g_grid_hz)
            if (g < 0.0)
                throw ValidationError(path + ": [surface] couplings must be non-negative");
    }

    // [metrology]
    {
        const std::vector<double> ms = f.number_list("metrology", "m_list");
        if (ms.empty()) throw ValidationError(f.location("metrology", "m_list") + "empty M list");
        for (double m : ms) {
            if (!(m >= 1.0) || m != std::floor(m))
                throw ValidationError(f.location("metrology", "m_list") +
                                      "M values must be positive integers");
            cfg.metrology.m_list.push_back(static_cast<std::int64_t>(m));
        }
    }

    // [sim]
    cfg.sim.trials = static_cast<int>(f.integer_or("sim", "trials", 200));
    if (cfg.sim.trials < 2)
        throw ValidationError(path + ": [sim] trials must be at least 2");
    {
        const std::int64_t seed = f.integer_or("sim", "seed", 42);
        if (seed < 0) throw ValidationError(f.location("sim", "seed") + "seed must be >= 0");
        cfg.sim.seed = static_cast<std::uint64_t>(seed);
    }
    if (f.has("sim", "control_phase")) {
        const std::string raw = f.text("sim", "control_phase");
        if (raw != "auto") cfg.sim.control_phase = f.number("sim", "control_phase");
    }
    cfg.sim.visibility = f.number_or("sim", "visibility", 1.0);
    if (!(cfg.sim.visibility >= 0.0 && cfg.sim.visibility <= 1.0))
        throw ValidationError(f.location("sim", "visibility") + "visibility must lie in [0, 1]");
    cfg.sim.window_lo_K = kelvin_from_nk(f.number_or("sim", "window_min_nk", 0.0));
    cfg.sim.window_hi_K = kelvin_from_nk(f.number_or("sim", "window_max_nk", 0.0));
    if (cfg.sim.window_lo_K > 0.0 && !(cfg.sim.window_hi_K > cfg.sim.window_lo_K))
        throw ValidationError(path + ": [sim] window_max_nk must exceed window_min_nk");

    // [output]
    cfg.output.directory = f.text_or("output", "directory", "out");
    if (f.has("output", "formats")) cfg.output.formats = f.text_list("output", "formats");

    // [bec] (optional section)
    if (f.has_section("bec")) {
        BecSection b;
        b.cond.length_L = f.number("bec", "length_m");
        b.cond.speed_c = f.number("bec", "speed_m_per_s");
        b.volume_defaulted = !f.has("bec", "volume_m3");
        b.cond.volume_V = f.number_or("bec", "volume_m3",
                                      b.cond.length_L * b.cond.length_L * b.cond.length_L);
        b.cond.g_bb = f.number("bec", "g_bb");
        b.cond.g_ab = f.number("bec", "g_ab");
        b.cond.healing_length = f.number("bec", "healing_length_m");
        b.cond.dot_spacing = f.number("bec", "dot_spacing_m");
        if (f.has("bec", "g_aa")) b.cond.g_aa = f.number("bec", "g_aa");
        if (f.has("bec", "accelerations_m_per_s2"))
            b.accelerations = f.number_list("bec", "accelerations_m_per_s2");
        try {
            b.cond.validate();
        } catch (const DomainError& e) {
            throw ValidationError(f.location("bec", "length_m") + e.what());
        }
        cfg.bec = std::move(b);
    }

    return cfg;
}

}  // namespace thermo
