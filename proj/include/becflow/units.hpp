#pragma once

#include <numbers>

#include "becflow/errors.hpp"

namespace becflow {

inline constexpr double hbar_si = 1.054571817e-34; ///< J s

/// Physical parameters of a concrete experiment, used to move between SI
/// values and the dimensionless system (lengths scaled by the laser
/// wavenumber, times by hbar/2E_R, energies by the recoil energy).
struct PhysicalUnits {
    double atom_mass = 0.0;        ///< kg
    double scattering_length = 0.0; ///< m (s-wave)
    double transverse_freq = 0.0;  ///< rad/s
    double atom_number = 0.0;
    double laser_wavenumber = 0.0; ///< 1/m

    void validate() const {
        if (!(atom_mass > 0) || !(scattering_length > 0) || !(transverse_freq > 0) ||
            !(atom_number > 0) || !(laser_wavenumber > 0))
            throw config_error("PhysicalUnits: all parameters must be strictly positive");
    }

    /// Recoil energy E_R = hbar^2 k^2 / 2m.
    double recoil_energy() const {
        validate();
        const double hk = hbar_si * laser_wavenumber;
        return hk * hk / (2.0 * atom_mass);
    }

    /// Dimensionless interaction strength N a_s k hbar w_perp / E_R.
    double interaction_beta() const {
        return atom_number * scattering_length * laser_wavenumber * hbar_si * transverse_freq /
               recoil_energy();
    }

    /// Interaction strength g = 4 pi hbar^2 a_s / m in SI units.
    double coupling_si() const {
        validate();
        return 4.0 * std::numbers::pi * hbar_si * hbar_si * scattering_length / atom_mass;
    }

    double time_to_dimensionless(double seconds) const {
        return seconds * 2.0 * recoil_energy() / hbar_si;
    }
    double time_to_si(double dimensionless) const {
        return dimensionless * hbar_si / (2.0 * recoil_energy());
    }
    double length_to_dimensionless(double meters) const {
        validate();
        return meters * laser_wavenumber;
    }
    double length_to_si(double dimensionless) const {
        validate();
        return dimensionless / laser_wavenumber;
    }
    double energy_to_dimensionless(double joules) const { return joules / recoil_energy(); }
    double energy_to_si(double dimensionless) const { return dimensionless * recoil_energy(); }
};

} // namespace becflow
