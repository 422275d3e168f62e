#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/grid.hpp"
#include "becflow/potential.hpp"
#include "becflow/spectral.hpp"

namespace becflow {

/// Probability current j(z) = Im[psi* d_z psi], evaluated with spectral
/// differentiation.
inline std::vector<double> current_field(std::span<const std::complex<double>> psi,
                                         const Grid& grid, const FourierTransform& fft) {
    const auto grad = spectral_gradient(psi, grid, fft);
    std::vector<double> j(grid.num_points);
    for (std::size_t i = 0; i < grid.num_points; ++i)
        j[i] = std::imag(std::conj(psi[i]) * grad[i]);
    return j;
}

inline std::vector<double> current_field(std::span<const std::complex<double>> psi,
                                         const Grid& grid) {
    FourierTransform fft(grid.num_points);
    return current_field(psi, grid, fft);
}

/// Local speed of sound c(z) = sqrt(beta |psi|^2).
inline std::vector<double> speed_of_sound(std::span<const std::complex<double>> psi,
                                          double beta) {
    if (beta < 0) throw config_error("speed_of_sound: beta must be >= 0");
    std::vector<double> c(psi.size());
    for (std::size_t i = 0; i < psi.size(); ++i) c[i] = std::sqrt(beta * std::norm(psi[i]));
    return c;
}

/// Averaged relative density of the portion of the cloud inside the lattice.
inline double average_lattice_density(double particle_number, double lattice_length) {
    if (particle_number < 0) throw config_error("average_lattice_density: N must be >= 0");
    if (!(lattice_length > 0)) throw config_error("average_lattice_density: L must be positive");
    return particle_number / lattice_length;
}

/// Splits the domain into reservoir A, lattice and reservoir B.
///
/// The inner boundaries sit exactly at the lattice edges. The outer
/// boundaries are pushed past the confining wall ramps so that the cloud's
/// wall boundary layer is counted with its reservoir; only the truly
/// classically forbidden tail beyond the ramps is left out, which keeps
/// N_A + N + N_B = 1 to well below 1e-6.
struct RegionPartition {
    double a_begin = 0.0;   ///< left end of reservoir A (beyond the wall ramp)
    double a_end = 0.0;     ///< reservoir A / lattice boundary (z = 0)
    double lattice_end = 0.0; ///< lattice / reservoir B boundary (z = L)
    double b_end = 0.0;     ///< right end of reservoir B (beyond the wall ramp)

    static RegionPartition from_spec(const PotentialSpec& spec) {
        RegionPartition p;
        p.a_begin = -spec.reservoir_a_length - 2.0 * spec.wall_width;
        p.a_end = 0.0;
        p.lattice_end = spec.lattice_length;
        p.b_end = spec.lattice_length + spec.reservoir_b_length + 2.0 * spec.wall_width;
        return p;
    }
};

struct RegionNumbers {
    double a = 0.0;
    double lattice = 0.0;
    double b = 0.0;
    double total() const { return a + lattice + b; }
};

/// Particle numbers per region by trapezoidal quadrature on the uniform
/// grid; boundary samples are shared half/half between adjacent regions.
inline RegionNumbers region_numbers(std::span<const std::complex<double>> psi,
                                    const Grid& grid, const RegionPartition& part) {
    if (psi.size() != grid.num_points)
        throw config_error("region_numbers: field length does not match grid");
    const std::size_t ia = grid.index_near(part.a_begin);
    const std::size_t i0 = grid.index_near(part.a_end);
    const std::size_t il = grid.index_near(part.lattice_end);
    const std::size_t ib = grid.index_near(part.b_end);

    auto trapezoid = [&](std::size_t lo, std::size_t hi) {
        double acc = 0.5 * (std::norm(psi[lo]) + std::norm(psi[hi]));
        for (std::size_t i = lo + 1; i < hi; ++i) acc += std::norm(psi[i]);
        return acc * grid.dz;
    };

    RegionNumbers n;
    n.a = trapezoid(ia, i0);
    n.lattice = trapezoid(i0, il);
    n.b = trapezoid(il, ib);
    return n;
}

/// Reference to one snapshot emitted during evolution.
struct SnapshotInfo {
    double requested_time = 0.0;
    double actual_time = 0.0;
    std::string path;
};

/// Time series collected along one trajectory. Cumulative boundary flux
/// integrals (trapezoid in time, accumulated every step) are kept at the four
/// partition edges so that region balances can be checked in integrated form.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> n_a;
    std::vector<double> n_lattice;
    std::vector<double> n_b;
    std::vector<double> probe_positions;             ///< z of each current probe
    std::vector<std::vector<double>> probe_currents; ///< one series per probe
    std::vector<double> flux_a_left;   ///< integral of j at the outer A edge
    std::vector<double> flux_a_right;  ///< integral of j at z = 0
    std::vector<double> flux_b_left;   ///< integral of j at z = L
    std::vector<double> flux_b_right;  ///< integral of j at the outer B edge
    std::vector<SnapshotInfo> snapshots;

    std::size_t size() const { return times.size(); }
};

struct PlateauInterval {
    double t_start = 0.0;
    double t_end = 0.0;
    double j0 = 0.0; ///< slope of N_B over the interval
    double t0 = 0.0; ///< representative time (midpoint)
    double mean_n = 0.0; ///< mean lattice particle number over the interval
    double duration() const { return t_end - t_start; }
};

struct PlateauReport {
    std::vector<PlateauInterval> intervals;
    double window = 0.0;
    double threshold = 0.0;

    const PlateauInterval* longest() const {
        const PlateauInterval* best = nullptr;
        for (const auto& iv : intervals)
            if (!best || iv.duration() > best->duration()) best = &iv;
        return best;
    }
};

namespace detail {

/// Least-squares slope of y(t) over samples [lo, hi].
inline double fit_slope(std::span<const double> t, std::span<const double> y, std::size_t lo,
                        std::size_t hi) {
    const std::size_t m = hi - lo + 1;
    double tm = 0.0, ym = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        tm += t[i];
        ym += y[i];
    }
    tm /= static_cast<double>(m);
    ym /= static_cast<double>(m);
    double num = 0.0, den = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) {
        num += (t[i] - tm) * (y[i] - ym);
        den += (t[i] - tm) * (t[i] - tm);
    }
    return den > 0 ? num / den : 0.0;
}

inline double mean_over(std::span<const double> y, std::size_t lo, std::size_t hi) {
    double acc = 0.0;
    for (std::size_t i = lo; i <= hi; ++i) acc += y[i];
    return acc / static_cast<double>(hi - lo + 1);
}

} // namespace detail

/// Sliding-window slopes of y(t); window positions are sample-aligned.
inline std::vector<std::pair<double, double>> sliding_slopes(std::span<const double> t,
                                                             std::span<const double> y,
                                                             double window) {
    std::vector<std::pair<double, double>> out;
    std::size_t lo = 0;
    for (std::size_t hi = 0; hi < t.size(); ++hi) {
        while (t[hi] - t[lo] > window) ++lo;
        if (hi - lo >= 3)
            out.emplace_back(0.5 * (t[lo] + t[hi]), detail::fit_slope(t, y, lo, hi));
    }
    return out;
}

/// Finds intervals where the lattice particle number is nearly constant.
///
/// Windows of the given duration slide across N(t); windows whose fitted
/// |slope| is below the threshold are merged into maximal intervals. The
/// stationary current of each interval is the fitted slope of N_B over it.
/// No plateau found is a valid outcome (free-expansion regime).
inline PlateauReport detect_plateaux(const TrajectoryRecord& rec, double window,
                                     double threshold) {
    if (rec.size() < 8 || rec.times.back() - rec.times.front() < window)
        throw config_error("detect_plateaux: record shorter than one window");

    PlateauReport report;
    report.window = window;
    report.threshold = threshold;

    const auto slopes = sliding_slopes(rec.times, rec.n_lattice, window);
    std::vector<bool> covered(rec.size(), false);
    std::size_t lo = 0;
    for (const auto& [center, slope] : slopes) {
        if (std::abs(slope) >= threshold) continue;
        const double a = center - 0.5 * window, b = center + 0.5 * window;
        while (lo < rec.size() && rec.times[lo] < a) ++lo;
        for (std::size_t i = lo; i < rec.size() && rec.times[i] <= b; ++i) covered[i] = true;
    }

    std::size_t i = 0;
    while (i < rec.size()) {
        if (!covered[i]) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < rec.size() && covered[j + 1]) ++j;
        if (j > i + 2) {
            PlateauInterval iv;
            iv.t_start = rec.times[i];
            iv.t_end = rec.times[j];
            iv.j0 = detail::fit_slope(rec.times, rec.n_b, i, j);
            iv.t0 = 0.5 * (iv.t_start + iv.t_end);
            iv.mean_n = detail::mean_over(rec.n_lattice, i, j);
            report.intervals.push_back(iv);
        }
        i = j + 1;
    }
    return report;
}

/// Default plateau-detection parameters: window = 5% of the record length,
/// threshold = 5% of the median |dN_B/dt| over the record.
inline std::pair<double, double> default_plateau_params(const TrajectoryRecord& rec) {
    const double window = 0.05 * (rec.times.back() - rec.times.front());
    auto slopes = sliding_slopes(rec.times, rec.n_b, window);
    if (slopes.empty()) throw config_error("default_plateau_params: record too short");
    std::vector<double> mags(slopes.size());
    for (std::size_t i = 0; i < slopes.size(); ++i) mags[i] = std::abs(slopes[i].second);
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    return {window, 0.05 * mags[mags.size() / 2]};
}

inline PlateauReport detect_plateaux(const TrajectoryRecord& rec) {
    const auto [window, threshold] = default_plateau_params(rec);
    return detect_plateaux(rec, window, threshold);
}

/// Stationary current: slope of N_B over the longest plateau. When no
/// plateau exists (weak-interaction regime) falls back to a linear fit of
/// N_B over the middle 50% of the record, away from the switch-on transient
/// and the late refill saturation.
inline double stationary_current(const TrajectoryRecord& rec, const PlateauReport& report) {
    if (const auto* iv = report.longest()) return iv->j0;
    const double t0 = rec.times.front(), t1 = rec.times.back();
    if (rec.size() < 8) throw config_error("stationary_current: record too short to fit");
    const double a = t0 + 0.25 * (t1 - t0), b = t0 + 0.75 * (t1 - t0);
    std::size_t lo = 0, hi = rec.size() - 1;
    while (lo < rec.size() && rec.times[lo] < a) ++lo;
    while (hi > lo && rec.times[hi] > b) --hi;
    if (hi <= lo + 2) throw config_error("stationary_current: record too short to fit");
    return detail::fit_slope(rec.times, rec.n_b, lo, hi);
}

inline double stationary_current(const TrajectoryRecord& rec) {
    return stationary_current(rec, detect_plateaux(rec));
}

} // namespace becflow
