#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "becflow/errors.hpp"
#include "becflow/fft.hpp"
#include "becflow/grid.hpp"
#include "becflow/potential.hpp"
#include "becflow/spectral.hpp"

namespace becflow {

inline double norm_squared(std::span<const std::complex<double>> psi, const Grid& grid) {
    double acc = 0.0;
    for (const auto& v : psi) acc += std::norm(v);
    return acc * grid.dz;
}

inline void normalize(std::span<std::complex<double>> psi, const Grid& grid) {
    const double scale = 1.0 / std::sqrt(norm_squared(psi, grid));
    for (auto& v : psi) v *= scale;
}

/// GPE chemical potential mu = Int( |psi'|^2/2 + v_ax |psi|^2 + beta |psi|^4 ) dz
/// for a normalized state.
inline double chemical_potential(std::span<const std::complex<double>> psi,
                                 const PotentialField& potential, const Grid& grid,
                                 double beta) {
    if (psi.size() != grid.num_points)
        throw config_error("chemical_potential: field length does not match grid");
    const double nrm = norm_squared(psi, grid);
    if (std::abs(nrm - 1.0) > 1e-6)
        throw config_error("chemical_potential: state is not normalized");
    const auto grad = spectral_gradient(psi, grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.num_points; ++i) {
        const double density = std::norm(psi[i]);
        acc += 0.5 * std::norm(grad[i]) + potential.values[i] * density +
               beta * density * density;
    }
    return acc * grid.dz;
}

/// GPE energy per particle: Int( |psi'|^2/2 + v_ax |psi|^2 + (beta/2) |psi|^4 ) dz.
inline double total_energy(std::span<const std::complex<double>> psi,
                           const PotentialField& potential, const Grid& grid, double beta) {
    if (psi.size() != grid.num_points)
        throw config_error("total_energy: field length does not match grid");
    const auto grad = spectral_gradient(psi, grid);
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.num_points; ++i) {
        const double density = std::norm(psi[i]);
        acc += 0.5 * std::norm(grad[i]) + potential.values[i] * density +
               0.5 * beta * density * density;
    }
    return acc * grid.dz;
}

struct GradientFlowOptions {
    double dt = 1e-2;        ///< imaginary time step
    double tol = 1e-10;      ///< sup-norm change per unit imaginary time
    std::size_t max_iter = 1000000;
    std::size_t check_every = 25;    ///< convergence test cadence
    std::size_t energy_every = 0;    ///< record the energy trace at this cadence (0 = off)
};

struct GroundStateResult {
    std::vector<std::complex<double>> psi;
    double mu = 0.0;
    double energy = 0.0;
    std::size_t iterations = 0;
    double residual = 0.0;
    bool converged = false;
    std::vector<double> energy_trace;
};

/// Ground state of the shutter-confined reservoir by normalized gradient
/// flow: the real-time splitting rotated to imaginary time, renormalizing
/// after every full step.
///
/// The flow is restricted to reservoir A (amplitude is zeroed beyond the
/// shutter and beyond the left wall each step). Without that restriction the
/// renormalized descent drains the box through the finite-height walls: any
/// amplitude seeded in the empty lattice or reservoir B regions grows like
/// exp(mu*tau) relative to the confined cloud, and the flow converges to the
/// global minimizer spread over the whole domain instead of the confined
/// state the release protocol starts from.
inline GroundStateResult normalized_gradient_flow(const PotentialField& potential,
                                                  const Grid& grid, double beta,
                                                  const GradientFlowOptions& opt = {}) {
    if (beta < 0) throw config_error("normalized_gradient_flow: beta must be >= 0");
    if (!potential.spec.shutter_closed)
        throw config_error("normalized_gradient_flow: shutter must be closed");
    if (potential.values.size() != grid.num_points)
        throw config_error("normalized_gradient_flow: potential does not match grid");
    if (!(opt.dt > 0)) throw config_error("normalized_gradient_flow: dt must be positive");

    const std::size_t n = grid.num_points;
    const PotentialSpec& spec = potential.spec;
    const double confine_lo = -spec.reservoir_a_length - 2.0 * spec.wall_width;
    const double confine_hi = spec.wall_width;

    std::vector<bool> keep(n);
    for (std::size_t i = 0; i < n; ++i)
        keep[i] = grid.points[i] >= confine_lo && grid.points[i] <= confine_hi;

    GroundStateResult result;
    result.psi.resize(n);

    // Thomas-Fermi profile as the starting point; box mode when beta = 0.
    const double mu_tf = beta / spec.reservoir_a_length;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = grid.points[i];
        double amp = 0.0;
        if (keep[i]) {
            if (beta > 0) {
                amp = std::sqrt(std::max(mu_tf - potential.values[i], 0.0) / beta);
            } else if (z >= -spec.reservoir_a_length && z <= 0.0) {
                amp = std::sin(std::numbers::pi * (z + spec.reservoir_a_length) /
                               spec.reservoir_a_length);
            }
        }
        result.psi[i] = amp;
    }
    normalize(result.psi, grid);

    FourierTransform fft(n);
    std::vector<double> kinetic_decay(n);
    for (std::size_t i = 0; i < n; ++i)
        kinetic_decay[i] = std::exp(-0.5 * opt.dt * grid.wavenumbers[i] * grid.wavenumbers[i]);

    std::vector<std::complex<double>> previous(n);
    auto half_potential = [&](std::vector<std::complex<double>>& psi) {
        for (std::size_t i = 0; i < n; ++i) {
            const double veff = potential.values[i] + beta * std::norm(psi[i]);
            psi[i] *= std::exp(-0.5 * opt.dt * veff);
        }
    };

    result.residual = std::numeric_limits<double>::infinity();
    for (std::size_t it = 1; it <= opt.max_iter; ++it) {
        previous = result.psi;
        half_potential(result.psi);
        fft.forward(result.psi);
        for (std::size_t i = 0; i < n; ++i) result.psi[i] *= kinetic_decay[i];
        fft.inverse(result.psi);
        half_potential(result.psi);
        for (std::size_t i = 0; i < n; ++i)
            if (!keep[i]) result.psi[i] = 0.0;
        normalize(result.psi, grid);
        result.iterations = it;

        if (opt.energy_every && it % opt.energy_every == 0)
            result.energy_trace.push_back(total_energy(result.psi, potential, grid, beta));

        if (it % opt.check_every == 0) {
            double diff = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                diff = std::max(diff, std::abs(result.psi[i] - previous[i]));
            result.residual = diff / opt.dt;
            if (result.residual < opt.tol) {
                result.converged = true;
                break;
            }
        }
    }

    result.mu = chemical_potential(result.psi, potential, grid, beta);
    result.energy = total_energy(result.psi, potential, grid, beta);
    return result;
}

} // namespace becflow
