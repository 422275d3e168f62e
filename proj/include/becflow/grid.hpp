#pragma once

#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

#include "becflow/errors.hpp"

namespace becflow {

/// Uniform periodic spatial grid with the matching spectral frequencies.
///
/// Sample points are z_i = z_min + i*dz for i = 0..num_points-1; z_max is
/// the periodic image of z_min and carries no sample. Treat instances as
/// immutable after construction; they are shared read-only between threads.
struct Grid {
    double z_min = 0.0;
    double z_max = 0.0;
    std::size_t num_points = 0;
    double dz = 0.0;
    std::vector<double> points;
    std::vector<double> wavenumbers; ///< standard DFT layout: 0..n/2-1, -n/2..-1

    double length() const { return z_max - z_min; }

    std::size_t index_near(double z) const {
        auto i = static_cast<long>((z - z_min) / dz + 0.5);
        if (i < 0) i = 0;
        if (i >= static_cast<long>(num_points)) i = static_cast<long>(num_points) - 1;
        return static_cast<std::size_t>(i);
    }
};

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

/// Builds a periodic grid on [z_min, z_max) with num_points samples.
/// num_points must be a power of two and at least 16.
inline Grid build_grid(double z_min, double z_max, std::size_t num_points) {
    if (!(z_max > z_min))
        throw config_error("build_grid: z_max must exceed z_min");
    if (num_points < 16)
        throw config_error("build_grid: num_points must be at least 16, got " +
                           std::to_string(num_points));
    if (!is_power_of_two(num_points))
        throw config_error("build_grid: num_points must be a power of two, got " +
                           std::to_string(num_points));

    Grid g;
    g.z_min = z_min;
    g.z_max = z_max;
    g.num_points = num_points;
    g.dz = (z_max - z_min) / static_cast<double>(num_points);
    g.points.resize(num_points);
    g.wavenumbers.resize(num_points);
    const double dk = 2.0 * std::numbers::pi / (z_max - z_min);
    const auto n = static_cast<long>(num_points);
    for (long i = 0; i < n; ++i) {
        g.points[static_cast<std::size_t>(i)] = z_min + g.dz * static_cast<double>(i);
        const long f = (i < n / 2) ? i : i - n;
        g.wavenumbers[static_cast<std::size_t>(i)] = dk * static_cast<double>(f);
    }
    return g;
}

} // namespace becflow
