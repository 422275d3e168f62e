#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/grid.hpp"

namespace becflow {

/// Geometry and strength parameters of the axial potential.
///
/// Reservoir A occupies [-reservoir_a_length, 0), the lattice [0, lattice_length]
/// with potential offset + depth*cos(2z), reservoir B the stretch up to
/// lattice_length + reservoir_b_length. Smooth confining walls of height
/// wall_height rise over wall_width beyond both outer ends. When
/// shutter_closed is set, an additional wall segment of the same height
/// stands at [0, wall_width], sealing reservoir A.
struct PotentialSpec {
    double reservoir_a_length = 0.0;
    double lattice_length = 0.0;
    double reservoir_b_length = 0.0;
    double lattice_depth = 0.0;
    double offset = 0.0;
    double wall_height = 500.0;
    double wall_width = 2.0;
    bool shutter_closed = false;

    double lattice_sites() const { return lattice_length / std::numbers::pi; }

    /// Outer extent that must fit on the grid, walls included.
    double left_extent() const { return -reservoir_a_length - wall_width; }
    double right_extent() const { return lattice_length + reservoir_b_length + wall_width; }

    void validate() const {
        if (!(reservoir_a_length > 0) || !(lattice_length > 0) || !(reservoir_b_length > 0))
            throw config_error("PotentialSpec: region lengths must be positive");
        if (lattice_depth < 0) throw config_error("PotentialSpec: lattice depth must be >= 0");
        if (!(wall_height > 0)) throw config_error("PotentialSpec: wall height must be positive");
        if (!(wall_width > 0)) throw config_error("PotentialSpec: wall width must be positive");
    }
};

/// Sampled axial potential on a grid. The spec travels with the samples so
/// downstream stages can recover the geometry.
struct PotentialField {
    PotentialSpec spec;
    std::vector<double> values;
};

namespace detail {
// Smooth unit step rising over roughly unit argument scale.
inline double smooth_step(double u) { return 0.5 * (1.0 + std::tanh(u)); }
} // namespace detail

/// Samples the piecewise axial potential on the grid: zero in both
/// reservoirs, offset + depth*cos(2z) inside the lattice (discontinuities at
/// the lattice edges are intentional), tanh walls beyond the outer ends and,
/// if requested, the shutter segment at [0, wall_width].
inline PotentialField sample_potential(const PotentialSpec& spec, const Grid& grid) {
    spec.validate();
    if (grid.z_min > spec.left_extent() || grid.z_max < spec.right_extent())
        throw config_error("sample_potential: grid does not span the potential geometry");

    const double w = spec.wall_width;
    const double H = spec.wall_height;
    const double left_edge = -spec.reservoir_a_length;
    const double right_edge = spec.lattice_length + spec.reservoir_b_length;

    PotentialField field;
    field.spec = spec;
    field.values.resize(grid.num_points);
    for (std::size_t i = 0; i < grid.num_points; ++i) {
        const double z = grid.points[i];
        double val = 0.0;
        if (z >= 0.0 && z <= spec.lattice_length)
            val = spec.offset + spec.lattice_depth * std::cos(2.0 * z);
        val += H * detail::smooth_step(6.0 * (left_edge - z - 0.5 * w) / w);
        val += H * detail::smooth_step(6.0 * (z - right_edge - 0.5 * w) / w);
        if (spec.shutter_closed)
            val += H * detail::smooth_step(12.0 * z / w) * detail::smooth_step(12.0 * (w - z) / w);
        field.values[i] = val;
    }
    return field;
}

} // namespace becflow
