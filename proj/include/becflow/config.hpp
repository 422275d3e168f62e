#pragma once

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/grid.hpp"
#include "becflow/potential.hpp"

namespace becflow {

namespace config_detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

/// Parses a number with an optional "pi" suffix multiplier, e.g. "160pi".
inline double parse_number(const std::string& raw, const std::string& key) {
    std::string s = trim(raw);
    double factor = 1.0;
    if (s.size() > 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = std::numbers::pi;
        s = trim(s.substr(0, s.size() - 2));
    } else if (s == "pi") {
        return std::numbers::pi;
    }
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw config_error("config: invalid number for " + key + ": '" + raw + "'");
    }
    if (pos != s.size())
        throw config_error("config: trailing characters in number for " + key + ": '" + raw + "'");
    return value * factor;
}

inline std::vector<double> parse_list(const std::string& raw, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(raw);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(parse_number(item, key));
    }
    return out;
}

} // namespace config_detail

/// Flat "key = value" configuration text: one entry per line, '#' starts a
/// comment, keys are namespaced with dots. Returns entries in key order so
/// downstream serialization is deterministic.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = config_detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: line " + std::to_string(lineno) + " has no '='");
        const std::string key = config_detail::trim(line.substr(0, eq));
        const std::string value = config_detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config: empty key on line " + std::to_string(lineno));
        out[key] = value;
    }
    return out;
}

enum class SweepAxis { none, lattice_depth, offset, beta };

/// Complete description of one experiment: geometry, physics, numerics,
/// probes and an optional sweep axis. Everything is deterministic; there is
/// no random state anywhere in the pipeline.
struct ExperimentConfig {
    // geometry
    double reservoir_a_length = 40.0 * std::numbers::pi;
    double lattice_length = 10.0 * std::numbers::pi;
    double reservoir_b_length = 80.0 * std::numbers::pi;
    double wall_height = 500.0;
    double wall_width = 2.0;

    // physics
    double beta = 397.89 / 4.0;
    double lattice_depth = 0.127;
    double offset = 0.0;

    // numerics
    std::size_t num_points = 4096;
    double grid_margin = 8.0; ///< extra room beyond the walls at both ends
    double dt = 5e-3;
    double t_end = 600.0;
    double dt_imag = 1e-2;
    double imag_tol = 1e-8;
    std::size_t imag_max_iter = 1000000;
    std::size_t observer_stride = 20;

    // probes
    std::vector<double> probe_positions; ///< empty = lattice edges
    std::vector<double> snapshot_times;

    // sweep
    SweepAxis sweep_axis = SweepAxis::none;
    std::vector<double> sweep_values;

    // execution
    std::size_t threads = 0; ///< 0 = hardware concurrency

    double grid_z_min() const { return -reservoir_a_length - grid_margin; }
    double grid_z_max() const { return lattice_length + reservoir_b_length + grid_margin; }

    PotentialSpec potential_spec(bool shutter_closed) const {
        PotentialSpec spec;
        spec.reservoir_a_length = reservoir_a_length;
        spec.lattice_length = lattice_length;
        spec.reservoir_b_length = reservoir_b_length;
        spec.lattice_depth = lattice_depth;
        spec.offset = offset;
        spec.wall_height = wall_height;
        spec.wall_width = wall_width;
        spec.shutter_closed = shutter_closed;
        return spec;
    }

    Grid make_grid() const { return build_grid(grid_z_min(), grid_z_max(), num_points); }

    void validate() const {
        potential_spec(true).validate();
        if (beta < 0) throw config_error("config: physics.beta must be >= 0");
        if (!(dt > 0)) throw config_error("config: numerics.dt must be positive");
        if (t_end < 0) throw config_error("config: numerics.t_end must be >= 0");
        if (!(dt_imag > 0)) throw config_error("config: numerics.dt_imag must be positive");
        if (observer_stride == 0)
            throw config_error("config: numerics.observer_stride must be positive");
        if (grid_margin < 2.0 * wall_width)
            throw config_error("config: numerics.grid_margin must cover the wall ramps");
        if (sweep_axis != SweepAxis::none && sweep_values.empty())
            throw config_error("config: sweep.values must be set when sweep.axis is set");
    }
};

inline SweepAxis sweep_axis_from_string(const std::string& s) {
    if (s == "s") return SweepAxis::lattice_depth;
    if (s == "v") return SweepAxis::offset;
    if (s == "beta") return SweepAxis::beta;
    throw config_error("config: sweep.axis must be one of s, v, beta; got '" + s + "'");
}

inline std::string sweep_axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::lattice_depth: return "s";
        case SweepAxis::offset: return "v";
        case SweepAxis::beta: return "beta";
        default: return "none";
    }
}

/// Applies parsed key/value entries onto a config. Unknown keys are
/// rejected so typos fail loudly.
inline void apply_entries(ExperimentConfig& cfg,
                          const std::map<std::string, std::string>& entries) {
    using config_detail::parse_list;
    using config_detail::parse_number;
    for (const auto& [key, value] : entries) {
        if (key == "geometry.L_A") cfg.reservoir_a_length = parse_number(value, key);
        else if (key == "geometry.L") cfg.lattice_length = parse_number(value, key);
        else if (key == "geometry.L_B") cfg.reservoir_b_length = parse_number(value, key);
        else if (key == "geometry.wall_height") cfg.wall_height = parse_number(value, key);
        else if (key == "geometry.wall_width") cfg.wall_width = parse_number(value, key);
        else if (key == "physics.beta") cfg.beta = parse_number(value, key);
        else if (key == "physics.s") cfg.lattice_depth = parse_number(value, key);
        else if (key == "physics.v") cfg.offset = parse_number(value, key);
        else if (key == "numerics.num_points")
            cfg.num_points = static_cast<std::size_t>(parse_number(value, key));
        else if (key == "numerics.grid_margin") cfg.grid_margin = parse_number(value, key);
        else if (key == "numerics.dt") cfg.dt = parse_number(value, key);
        else if (key == "numerics.t_end") cfg.t_end = parse_number(value, key);
        else if (key == "numerics.dt_imag") cfg.dt_imag = parse_number(value, key);
        else if (key == "numerics.imag_tol") cfg.imag_tol = parse_number(value, key);
        else if (key == "numerics.imag_max_iter")
            cfg.imag_max_iter = static_cast<std::size_t>(parse_number(value, key));
        else if (key == "numerics.observer_stride")
            cfg.observer_stride = static_cast<std::size_t>(parse_number(value, key));
        else if (key == "probes.positions") cfg.probe_positions = parse_list(value, key);
        else if (key == "probes.snapshot_times") cfg.snapshot_times = parse_list(value, key);
        else if (key == "sweep.axis") cfg.sweep_axis = sweep_axis_from_string(value);
        else if (key == "sweep.values") cfg.sweep_values = parse_list(value, key);
        else if (key == "run.threads")
            cfg.threads = static_cast<std::size_t>(parse_number(value, key));
        else
            throw config_error("config: unknown key '" + key + "'");
    }
}

/// Bundled presets. "paper" is the full geometry on a fine grid; "desk"
/// shrinks the reservoirs so the same phenomenology runs in minutes, with
/// the interaction scaled to keep the initial Thomas-Fermi chemical
/// potential unchanged.
inline ExperimentConfig preset_config(const std::string& name) {
    ExperimentConfig cfg;
    if (name == "paper") {
        cfg.reservoir_a_length = 160.0 * std::numbers::pi;
        cfg.reservoir_b_length = 326.0 * std::numbers::pi;
        cfg.lattice_length = 10.0 * std::numbers::pi;
        cfg.beta = 397.89;
        cfg.num_points = 16384;
        cfg.t_end = 1400.0;
    } else if (name == "desk") {
        cfg.reservoir_a_length = 40.0 * std::numbers::pi;
        cfg.reservoir_b_length = 80.0 * std::numbers::pi;
        cfg.lattice_length = 10.0 * std::numbers::pi;
        cfg.beta = 397.89 / 4.0;
        cfg.num_points = 4096;
        cfg.t_end = 600.0;
    } else {
        throw config_error("unknown preset '" + name + "' (available: paper, desk)");
    }
    return cfg;
}

inline ExperimentConfig config_from_text(const std::string& text) {
    ExperimentConfig cfg;
    apply_entries(cfg, parse_config_text(text));
    cfg.validate();
    return cfg;
}

/// Applies "key=value" override strings (CLI --set).
inline void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& overrides) {
    std::map<std::string, std::string> entries;
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw config_error("override '" + item + "' is not of the form key=value");
        entries[config_detail::trim(item.substr(0, eq))] =
            config_detail::trim(item.substr(eq + 1));
    }
    apply_entries(cfg, entries);
}

} // namespace becflow
