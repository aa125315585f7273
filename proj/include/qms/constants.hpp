// Physical constants (CODATA 2018). This table is the only source of
// h, hbar, c, e and the electron rest mass anywhere in the library.
#pragma once

#include <numbers>

namespace qms::constants {

inline constexpr double planck_h = 6.62607015e-34;        // J s (exact)
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double speed_of_light = 2.99792458e8;    // m / s (exact)
inline constexpr double elementary_charge = 1.602176634e-19;  // C (exact)
inline constexpr double electron_mass = 9.1093837015e-31;     // kg

inline constexpr double meters_per_angstrom = 1e-10;

/// Electron rest energy m0 c^2 in joules.
inline constexpr double rest_energy_j =
    electron_mass * speed_of_light * speed_of_light;

/// h^2 / (2 pi m0 e) in V * Angstrom^2: the prefactor of the Gaussian-fit
/// atomic potential when the fit parameters a_i are in Angstrom and
/// b_i + B in Angstrom^2.
inline constexpr double potential_prefactor_v_a2 =
    planck_h * planck_h /
    (2.0 * std::numbers::pi * electron_mass * elementary_charge) /
    (meters_per_angstrom * meters_per_angstrom);

}  // namespace qms::constants
