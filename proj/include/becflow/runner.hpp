#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "becflow/config.hpp"
#include "becflow/dynamics.hpp"
#include "becflow/errors.hpp"
#include "becflow/grid.hpp"
#include "becflow/groundstate.hpp"
#include "becflow/observables.hpp"
#include "becflow/potential.hpp"
#include "becflow/snapshot.hpp"

namespace becflow {

/// Shortest round-trippable decimal representation.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Canonical text form of a config (sorted keys); written next to run
/// outputs so every artifact records the inputs that produced it.
inline std::string serialize_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    out << "geometry.L_A = " << format_double(cfg.reservoir_a_length) << "\n";
    out << "geometry.L = " << format_double(cfg.lattice_length) << "\n";
    out << "geometry.L_B = " << format_double(cfg.reservoir_b_length) << "\n";
    out << "geometry.wall_height = " << format_double(cfg.wall_height) << "\n";
    out << "geometry.wall_width = " << format_double(cfg.wall_width) << "\n";
    out << "physics.beta = " << format_double(cfg.beta) << "\n";
    out << "physics.s = " << format_double(cfg.lattice_depth) << "\n";
    out << "physics.v = " << format_double(cfg.offset) << "\n";
    out << "numerics.num_points = " << cfg.num_points << "\n";
    out << "numerics.grid_margin = " << format_double(cfg.grid_margin) << "\n";
    out << "numerics.dt = " << format_double(cfg.dt) << "\n";
    out << "numerics.t_end = " << format_double(cfg.t_end) << "\n";
    out << "numerics.dt_imag = " << format_double(cfg.dt_imag) << "\n";
    out << "numerics.imag_tol = " << format_double(cfg.imag_tol) << "\n";
    out << "numerics.imag_max_iter = " << cfg.imag_max_iter << "\n";
    out << "numerics.observer_stride = " << cfg.observer_stride << "\n";
    auto list = [&](const std::vector<double>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + format_double(v[i]);
        return s;
    };
    if (!cfg.probe_positions.empty())
        out << "probes.positions = " << list(cfg.probe_positions) << "\n";
    if (!cfg.snapshot_times.empty())
        out << "probes.snapshot_times = " << list(cfg.snapshot_times) << "\n";
    if (cfg.sweep_axis != SweepAxis::none) {
        out << "sweep.axis = " << sweep_axis_name(cfg.sweep_axis) << "\n";
        out << "sweep.values = " << list(cfg.sweep_values) << "\n";
    }
    if (cfg.threads) out << "run.threads = " << cfg.threads << "\n";
    return out.str();
}

struct RunResult {
    GroundStateResult ground;
    TrajectoryRecord record;
    PlateauReport plateaus;
    double j0 = std::numeric_limits<double>::quiet_NaN();
    std::filesystem::path directory;
};

namespace runner_detail {

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw io_error("cannot open " + path.string());
    out << text;
    if (!out) throw io_error("write failed for " + path.string());
}

inline void write_trajectory_csv(const std::filesystem::path& path,
                                 const TrajectoryRecord& rec) {
    std::ostringstream out;
    out << "time,N_A,N,N_B";
    for (std::size_t p = 0; p < rec.probe_positions.size(); ++p)
        out << ",j_probe" << p;
    out << ",flux_a_left,flux_a_right,flux_b_left,flux_b_right\n";
    for (std::size_t i = 0; i < rec.size(); ++i) {
        out << format_double(rec.times[i]) << ',' << format_double(rec.n_a[i]) << ','
            << format_double(rec.n_lattice[i]) << ',' << format_double(rec.n_b[i]);
        for (const auto& series : rec.probe_currents) out << ',' << format_double(series[i]);
        out << ',' << format_double(rec.flux_a_left[i]) << ','
            << format_double(rec.flux_a_right[i]) << ',' << format_double(rec.flux_b_left[i])
            << ',' << format_double(rec.flux_b_right[i]) << '\n';
    }
    write_text_file(path, out.str());
}

inline void write_plateaus_csv(const std::filesystem::path& path, const PlateauReport& rep) {
    std::ostringstream out;
    out << "t_start,t_end,duration,j0,t0,mean_N\n";
    for (const auto& iv : rep.intervals)
        out << format_double(iv.t_start) << ',' << format_double(iv.t_end) << ','
            << format_double(iv.duration()) << ',' << format_double(iv.j0) << ','
            << format_double(iv.t0) << ',' << format_double(iv.mean_n) << '\n';
    write_text_file(path, out.str());
}

} // namespace runner_detail

/// Runs the full protocol for one parameter point: ground state with the
/// shutter closed, instantaneous shutter removal, real-time evolution,
/// observables and artifacts. Fully deterministic for a given config.
inline RunResult run_single(const ExperimentConfig& cfg,
                            const std::filesystem::path& out_dir) {
    cfg.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory " + out_dir.string());

    const Grid grid = cfg.make_grid();
    const PotentialField closed = sample_potential(cfg.potential_spec(true), grid);
    const PotentialField open = sample_potential(cfg.potential_spec(false), grid);

    GradientFlowOptions gf;
    gf.dt = cfg.dt_imag;
    gf.tol = cfg.imag_tol;
    gf.max_iter = cfg.imag_max_iter;

    RunResult result;
    result.directory = out_dir;
    result.ground = normalized_gradient_flow(closed, grid, cfg.beta, gf);
    if (!result.ground.converged)
        throw numerics_error("ground-state stage did not converge (residual " +
                             format_double(result.ground.residual) + ")");

    Snapshot gs;
    gs.z_min = grid.z_min;
    gs.z_max = grid.z_max;
    gs.time = 0.0;
    gs.beta = cfg.beta;
    gs.values = result.ground.psi;
    write_snapshot(out_dir / "ground.gpe1", gs);

    Wavefunction psi;
    psi.values = result.ground.psi;
    psi.time = 0.0;

    EvolutionPlan plan;
    plan.dt = cfg.dt;
    plan.t_end = cfg.t_end;
    plan.snapshot_times = cfg.snapshot_times;
    plan.observer_stride = cfg.observer_stride;

    EvolveOptions options;
    options.probe_positions = cfg.probe_positions;
    std::size_t snap_index = 0;
    options.snapshot_sink = [&](const Wavefunction& state) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.gpe1", snap_index++);
        Snapshot snap;
        snap.z_min = grid.z_min;
        snap.z_max = grid.z_max;
        snap.time = state.time;
        snap.beta = cfg.beta;
        snap.values = state.values;
        write_snapshot(out_dir / name, snap);
        return std::string(name);
    };

    result.record = evolve(psi, open, grid, cfg.beta, plan, options);

    try {
        result.plateaus = detect_plateaux(result.record);
        result.j0 = stationary_current(result.record, result.plateaus);
    } catch (const config_error&) {
        // Record too short for plateau analysis (e.g. t_end = 0); leave NaN.
    }

    runner_detail::write_text_file(out_dir / "config.txt", serialize_config(cfg));
    runner_detail::write_trajectory_csv(out_dir / "trajectory.csv", result.record);
    runner_detail::write_plateaus_csv(out_dir / "plateaus.csv", result.plateaus);
    return result;
}

struct SweepRow {
    double value = 0.0;
    double j0 = std::numeric_limits<double>::quiet_NaN();
    double t0 = std::numeric_limits<double>::quiet_NaN();
    double plateau_start = std::numeric_limits<double>::quiet_NaN();
    double plateau_end = std::numeric_limits<double>::quiet_NaN();
    double n_final = std::numeric_limits<double>::quiet_NaN();
    std::string run_directory;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    SweepAxis axis = SweepAxis::none;
    std::vector<SweepRow> rows;
};

inline ExperimentConfig with_sweep_value(const ExperimentConfig& base, SweepAxis axis,
                                         double value) {
    ExperimentConfig cfg = base;
    switch (axis) {
        case SweepAxis::lattice_depth: cfg.lattice_depth = value; break;
        case SweepAxis::offset: cfg.offset = value; break;
        case SweepAxis::beta: cfg.beta = value; break;
        default: throw config_error("sweep axis not set");
    }
    cfg.sweep_axis = SweepAxis::none;
    cfg.sweep_values.clear();
    return cfg;
}

inline void write_sweep_csv(const std::filesystem::path& path, const SweepResult& sweep) {
    std::ostringstream out;
    out << "axis,value,j0,t0,plateau_start,plateau_end,N_final\n";
    for (const auto& row : sweep.rows) {
        out << sweep_axis_name(sweep.axis) << ',' << format_double(row.value) << ','
            << format_double(row.j0) << ',' << format_double(row.t0) << ','
            << format_double(row.plateau_start) << ',' << format_double(row.plateau_end) << ','
            << format_double(row.n_final) << '\n';
    }
    runner_detail::write_text_file(path, out.str());
}

/// Runs one independent trajectory per sweep value. Workers own their state
/// exclusively, so rows are reproducible regardless of thread count or
/// execution order; failures are recorded per row and never dropped.
inline SweepResult run_sweep(const ExperimentConfig& cfg,
                             const std::filesystem::path& out_dir) {
    cfg.validate();
    if (cfg.sweep_axis == SweepAxis::none)
        throw config_error("run_sweep: sweep.axis is not set");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory " + out_dir.string());

    SweepResult sweep;
    sweep.axis = cfg.sweep_axis;
    sweep.rows.resize(cfg.sweep_values.size());

    std::size_t workers = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    workers = std::min(workers, cfg.sweep_values.size());

    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfg.sweep_values.size()) return;
            SweepRow& row = sweep.rows[i];
            row.value = cfg.sweep_values[i];
            char sub[64];
            std::snprintf(sub, sizeof(sub), "%s_%03zu", sweep_axis_name(sweep.axis).c_str(), i);
            row.run_directory = sub;
            try {
                const auto point = with_sweep_value(cfg, sweep.axis, row.value);
                const auto res = run_single(point, out_dir / sub);
                row.j0 = res.j0;
                row.n_final = res.record.n_lattice.empty() ? 0.0 : res.record.n_lattice.back();
                if (const auto* iv = res.plateaus.longest()) {
                    row.t0 = iv->t0;
                    row.plateau_start = iv->t_start;
                    row.plateau_end = iv->t_end;
                }
            } catch (const std::exception& e) {
                row.failed = true;
                row.error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();

    write_sweep_csv(out_dir / "sweep.csv", sweep);
    return sweep;
}

} // namespace becflow
