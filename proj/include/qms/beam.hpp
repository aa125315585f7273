// Relativistic electron-optics parameters derived from the accelerating
// voltage.
#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qms/constants.hpp"

namespace qms {

struct BeamParams {
    double voltage = 0.0;         // V
    double kinetic_energy_ev = 0.0;
    double wavelength = 0.0;      // Angstrom
    double mass_ratio = 0.0;      // m / m0
    double sigma = 0.0;           // interaction constant, rad / (V Angstrom)
    double wavenumber = 0.0;      // 1 / wavelength, 1 / Angstrom
};

/// kinetic energy eU; wavelength h c / sqrt(2 E0 Ek + Ek^2); relativistic
/// mass m = m0 (1 + eU / m0 c^2); sigma = m e lambda / (2 pi hbar^2).
inline BeamParams beam_params(double voltage_volts) {
    if (!(voltage_volts > 0.0)) {
        throw std::invalid_argument("accelerating voltage must be positive");
    }
    namespace k = constants;
    BeamParams beam;
    beam.voltage = voltage_volts;
    beam.kinetic_energy_ev = voltage_volts;  // charge e, energy eU

    const double kinetic_j = k::elementary_charge * voltage_volts;
    const double hc = k::planck_h * k::speed_of_light;
    const double wavelength_m =
        hc / std::sqrt(2.0 * k::rest_energy_j * kinetic_j + kinetic_j * kinetic_j);
    beam.wavelength = wavelength_m / k::meters_per_angstrom;
    beam.mass_ratio = 1.0 + kinetic_j / k::rest_energy_j;

    const double mass = beam.mass_ratio * k::electron_mass;
    const double sigma_si = mass * k::elementary_charge * wavelength_m /
                            (2.0 * std::numbers::pi * k::hbar * k::hbar);
    beam.sigma = sigma_si * k::meters_per_angstrom;  // 1/(V m) -> 1/(V Angstrom)
    beam.wavenumber = 1.0 / beam.wavelength;
    return beam;
}

}  // namespace qms
