#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/fft.hpp"
#include "becflow/grid.hpp"
#include "becflow/groundstate.hpp"
#include "becflow/observables.hpp"
#include "becflow/potential.hpp"
#include "becflow/spectral.hpp"

namespace becflow {

/// Complex field on a grid together with the current evolution time.
struct Wavefunction {
    std::vector<std::complex<double>> values;
    double time = 0.0;
};

struct EvolutionPlan {
    double dt = 5e-3;
    double t_end = 0.0;
    std::vector<double> snapshot_times;
    std::size_t observer_stride = 20;

    void validate() const {
        if (!(dt > 0)) throw config_error("EvolutionPlan: dt must be positive");
        if (t_end < 0) throw config_error("EvolutionPlan: t_end must be >= 0");
        if (observer_stride == 0) throw config_error("EvolutionPlan: observer_stride must be > 0");
        for (double t : snapshot_times)
            if (t < 0 || t > t_end)
                throw config_error("EvolutionPlan: snapshot time outside [0, t_end]");
    }
};

/// Strang-split Fourier stepper for the dimensionless GPE
///   i d_t psi = [ -1/2 d_zz + v_ax(z) + beta |psi|^2 ] psi.
///
/// One step applies the pointwise phase exp[-i dt/2 (v_ax + beta|psi|^2)],
/// the exact kinetic factor exp[-i dt k^2 / 2] in Fourier space, and the
/// pointwise phase again. |psi| is invariant under the phase factor, so the
/// nonlinear half-steps are exact. Each factor is unitary.
///
/// One trajectory owns one Propagator; the transform workspace is not
/// shared across threads.
class Propagator {
public:
    Propagator(const Grid& grid, const PotentialField& potential, double beta)
        : grid_(grid), potential_(potential), beta_(beta), fft_(grid.num_points) {
        if (potential.values.size() != grid.num_points)
            throw config_error("Propagator: potential does not match grid");
        if (beta < 0) throw config_error("Propagator: beta must be >= 0");
    }

    const Grid& grid() const { return grid_; }
    const PotentialField& potential() const { return potential_; }
    double beta() const { return beta_; }
    const FourierTransform& fft() const { return fft_; }

    /// Advances psi by one Strang step of size dt (dt < 0 steps backwards).
    void step(Wavefunction& psi, double dt) {
        if (psi.values.size() != grid_.num_points)
            throw config_error("Propagator::step: state length does not match grid");
        ensure_tables(dt);
        phase_half(psi.values, dt);
        fft_.forward(psi.values);
        for (std::size_t i = 0; i < grid_.num_points; ++i)
            psi.values[i] *= kinetic_phase_[i];
        fft_.inverse(psi.values);
        phase_half(psi.values, dt);
        psi.time += dt;
    }

private:
    void ensure_tables(double dt) {
        if (dt == table_dt_) return;
        kinetic_phase_.resize(grid_.num_points);
        for (std::size_t i = 0; i < grid_.num_points; ++i) {
            const double k = grid_.wavenumbers[i];
            kinetic_phase_[i] = std::polar(1.0, -0.5 * dt * k * k);
        }
        table_dt_ = dt;
    }

    void phase_half(std::vector<std::complex<double>>& v, double dt) {
        for (std::size_t i = 0; i < grid_.num_points; ++i) {
            const double veff = potential_.values[i] + beta_ * std::norm(v[i]);
            v[i] *= std::polar(1.0, -0.5 * dt * veff);
        }
    }

    const Grid& grid_;
    const PotentialField& potential_;
    double beta_;
    FourierTransform fft_;
    std::vector<std::complex<double>> kinetic_phase_;
    double table_dt_ = 0.0;
};

/// Single second-order split step (convenience wrapper; evolution loops
/// should hold a Propagator).
inline Wavefunction strang_step(const Wavefunction& psi, const PotentialField& potential,
                                const Grid& grid, double beta, double dt) {
    Propagator prop(grid, potential, beta);
    Wavefunction out = psi;
    prop.step(out, dt);
    return out;
}

/// Callback invoked at observer samples with (time, N_A, N, N_B, probe currents).
using Observer =
    std::function<void(double, double, double, double, std::span<const double>)>;

/// Callback invoked when a snapshot is due; returns the stored path (empty
/// if the sink does not persist anything).
using SnapshotSink = std::function<std::string(const Wavefunction&)>;

struct EvolveOptions {
    std::vector<double> probe_positions; ///< defaults to the lattice edges 0+ and L-
    Observer observer;
    SnapshotSink snapshot_sink;
};

/// Runs the release protocol: steps psi to t_end, sampling region numbers,
/// probe currents and cumulative boundary fluxes every observer_stride
/// steps, and emitting snapshots at the step nearest each requested time.
///
/// Probe currents at sample times use the spectral current; the per-step
/// boundary flux integrands use the local stencil derivative, which is
/// cheap enough to evaluate every step and accurate to discretization
/// error for resolved states.
inline TrajectoryRecord evolve(Wavefunction& psi, const PotentialField& potential,
                               const Grid& grid, double beta, const EvolutionPlan& plan,
                               const EvolveOptions& options = {}) {
    plan.validate();
    if (potential.spec.shutter_closed)
        throw config_error("evolve: shutter must be open during release");

    Propagator prop(grid, potential, beta);
    const auto part = RegionPartition::from_spec(potential.spec);

    TrajectoryRecord rec;
    rec.probe_positions = options.probe_positions;
    if (rec.probe_positions.empty()) {
        // First grid point inside the lattice and last one before its end.
        double zin = grid.points[grid.index_near(0.0)];
        if (zin < 0.0) zin += grid.dz;
        double zout = grid.points[grid.index_near(potential.spec.lattice_length)];
        if (zout > potential.spec.lattice_length) zout -= grid.dz;
        rec.probe_positions = {zin, zout};
    }
    std::vector<std::size_t> probe_idx;
    for (double zp : rec.probe_positions) probe_idx.push_back(grid.index_near(zp));
    rec.probe_currents.resize(probe_idx.size());

    const std::array<std::size_t, 4> flux_idx = {
        grid.index_near(part.a_begin), grid.index_near(part.a_end),
        grid.index_near(part.lattice_end), grid.index_near(part.b_end)};
    std::array<double, 4> flux_acc = {0, 0, 0, 0};
    std::array<double, 4> j_prev{};
    auto boundary_current = [&](std::size_t which) {
        const std::size_t i = flux_idx[which];
        return std::imag(std::conj(psi.values[i]) * stencil_derivative(psi.values, grid, i));
    };
    for (std::size_t b = 0; b < 4; ++b) j_prev[b] = boundary_current(b);

    const long n_steps = std::lround(plan.t_end / plan.dt);
    std::map<long, double> snapshot_steps;
    for (double ts : plan.snapshot_times) {
        long st = std::lround(ts / plan.dt);
        if (st < 0) st = 0;
        if (st > n_steps) st = n_steps;
        snapshot_steps.emplace(st, ts);
    }

    const double t0 = psi.time;
    auto sample = [&](long step) {
        const double t = t0 + static_cast<double>(step) * plan.dt;
        const auto numbers = region_numbers(psi.values, grid, part);
        if (!std::isfinite(numbers.total()))
            throw numerics_error("evolve: non-finite state at t = " + std::to_string(t));
        rec.times.push_back(t);
        rec.n_a.push_back(numbers.a);
        rec.n_lattice.push_back(numbers.lattice);
        rec.n_b.push_back(numbers.b);
        rec.flux_a_left.push_back(flux_acc[0]);
        rec.flux_a_right.push_back(flux_acc[1]);
        rec.flux_b_left.push_back(flux_acc[2]);
        rec.flux_b_right.push_back(flux_acc[3]);
        const auto j = current_field(psi.values, grid, prop.fft());
        std::vector<double> probes(probe_idx.size());
        for (std::size_t p = 0; p < probe_idx.size(); ++p) {
            probes[p] = j[probe_idx[p]];
            rec.probe_currents[p].push_back(probes[p]);
        }
        if (options.observer)
            options.observer(t, numbers.a, numbers.lattice, numbers.b, probes);
    };

    auto snapshot = [&](long step, double requested) {
        SnapshotInfo info;
        info.requested_time = requested;
        info.actual_time = psi.time;
        if (options.snapshot_sink) info.path = options.snapshot_sink(psi);
        rec.snapshots.push_back(info);
    };

    sample(0);
    if (auto it = snapshot_steps.find(0); it != snapshot_steps.end()) snapshot(0, it->second);

    for (long step = 1; step <= n_steps; ++step) {
        prop.step(psi, plan.dt);
        for (std::size_t b = 0; b < 4; ++b) {
            const double j_now = boundary_current(b);
            flux_acc[b] += 0.5 * plan.dt * (j_prev[b] + j_now);
            j_prev[b] = j_now;
        }
        const bool due = step % static_cast<long>(plan.observer_stride) == 0 || step == n_steps;
        if (due) sample(step);
        if (auto it = snapshot_steps.find(step); it != snapshot_steps.end())
            snapshot(step, it->second);
    }
    return rec;
}

} // namespace becflow
