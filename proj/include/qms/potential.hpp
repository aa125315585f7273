// Atomic potential fields and the per-slice phase fields of the multislice
// iteration: transmission phases sigma * integral_slab V(r, z) dz in
// coordinate space and the shared propagator phase -pi * d * lambda * |Q|^2
// in momentum space.
#pragma once

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qms/beam.hpp"
#include "qms/constants.hpp"
#include "qms/specimen.hpp"

namespace qms {

/// Gaussian-fit atomic potential, volts at radial distance r (Angstrom):
/// phi(r) = h^2/(2 pi m0 e) * sum_i a_i (4 pi / (b_i + B))^(3/2)
///          * exp(-4 pi^2 r^2 / (b_i + B)).
inline double atomic_potential(double r, const AtomSpecies& species) {
    if (!(r >= 0.0)) throw std::invalid_argument("radial distance must be >= 0");
    species.validate();
    constexpr double four_pi = 4.0 * std::numbers::pi;
    const double r2 = r * r;
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) {
        const double width = species.b[i] + species.debye_waller;
        sum += species.a[i] * std::pow(four_pi / width, 1.5) *
               std::exp(-std::numbers::pi * four_pi * r2 / width);
    }
    return constants::potential_prefactor_v_a2 * sum;
}

/// Per-slice transmission phase fields plus the shared propagator phase.
/// Slices repeat cell-periodically in depth, so only the slices of one cell
/// are stored; slice_phase(t) resolves the repetition.
struct PotentialStack {
    std::vector<std::vector<double>> cell_slice_phases;  // radians, N*N row-major
    std::vector<double> propagator_phase;                // radians, N*N row-major
    int slices_per_cell = 0;
    int slice_count = 0;
    double slice_thickness = 0.0;  // Angstrom

    const std::vector<double>& slice_phase(int t) const {
        if (t < 0 || t >= slice_count) {
            throw std::out_of_range("slice index " + std::to_string(t) + " of " +
                                    std::to_string(slice_count));
        }
        return cell_slice_phases[static_cast<std::size_t>(t) % cell_slice_phases.size()];
    }
};

namespace detail {

/// Transverse Gaussian terms of one atom after integrating the potential
/// through a slab along z: amplitude_i * exp(-4 pi^2 rho^2 / width_i). The
/// amplitudes carry the z-integral (an erf difference per Gaussian) and the
/// interaction constant, so accumulating them yields the transmission phase
/// directly.
struct ProjectedTerms {
    std::array<double, 4> amplitude{};
    std::array<double, 4> width{};
    bool negligible = true;
};

inline ProjectedTerms project_through_slab(const AtomSpecies& species, double z_atom,
                                           double z_lo, double z_hi, double sigma) {
    constexpr double four_pi = 4.0 * std::numbers::pi;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    ProjectedTerms terms;
    for (int i = 0; i < 4; ++i) {
        const double w = species.b[i] + species.debye_waller;
        const double sqrt_w = std::sqrt(w);
        const double z_integral = 0.5 * std::sqrt(w / four_pi) *
                                  (std::erf(two_pi * (z_hi - z_atom) / sqrt_w) -
                                   std::erf(two_pi * (z_lo - z_atom) / sqrt_w));
        terms.width[i] = w;
        terms.amplitude[i] = sigma * constants::potential_prefactor_v_a2 * species.a[i] *
                             std::pow(four_pi / w, 1.5) * z_integral;
        if (std::abs(terms.amplitude[i]) > 0.0) terms.negligible = false;
    }
    return terms;
}

/// Adds one atom's slab-projected phase to a field sampled at pixel centers,
/// including transverse periodic images out to `image_range` supercells.
inline void accumulate_projected_phase(std::vector<double>& field, const FieldGrid& grid,
                                       double atom_x, double atom_y,
                                       const ProjectedTerms& terms, int image_range) {
    const std::size_t n = grid.points_per_axis;
    const double hx = grid.pixel_size_x();
    const double hy = grid.pixel_size_y();
    constexpr double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;

    // Gaussians fall below 1e-12 of their peak beyond this squared radius.
    double max_width = 0.0;
    for (double w : terms.width) max_width = std::max(max_width, w);
    const double r2_skip = 27.7 * max_width / four_pi2;

    for (std::size_t row = 0; row < n; ++row) {
        const double py = (static_cast<double>(row) + 0.5) * hy;
        for (std::size_t col = 0; col < n; ++col) {
            const double px = (static_cast<double>(col) + 0.5) * hx;
            double phase = 0.0;
            for (int iy = -image_range; iy <= image_range; ++iy) {
                const double dy = py - atom_y - iy * grid.extent_y;
                for (int ix = -image_range; ix <= image_range; ++ix) {
                    const double dx = px - atom_x - ix * grid.extent_x;
                    const double r2 = dx * dx + dy * dy;
                    if (r2 > r2_skip) continue;
                    for (int i = 0; i < 4; ++i) {
                        phase += terms.amplitude[i] * std::exp(-four_pi2 * r2 / terms.width[i]);
                    }
                }
            }
            field[row * n + col] += phase;
        }
    }
}

}  // namespace detail

/// Builds the transmission phase fields for the slices of one cell. Each
/// slice's phase is sigma times the atomic potential integrated through its
/// slab (the slab of slice t is centered on the plane z = t*d), summed over
/// the cell's atoms and their periodic images, transverse and along the beam,
/// out to `image_cutoff_cells` lattice constants.
inline PotentialStack build_potential_slices(const Specimen& specimen, const FieldGrid& grid,
                                             const BeamParams& beam,
                                             double image_cutoff_cells = 3.0) {
    specimen.validate();
    if (specimen.basis.empty()) {
        throw std::invalid_argument("specimen has no atoms");
    }
    if (image_cutoff_cells < 1.0) {
        throw std::invalid_argument("periodic image cutoff must be at least one lattice constant");
    }
    const double want_x = specimen.lattice_constant * specimen.cells[0];
    const double want_y = specimen.lattice_constant * specimen.cells[1];
    if (std::abs(grid.extent_x - want_x) > 1e-9 * want_x ||
        std::abs(grid.extent_y - want_y) > 1e-9 * want_y) {
        throw std::invalid_argument("grid extent does not match the specimen supercell");
    }

    PotentialStack stack;
    stack.slices_per_cell = specimen.slices_per_cell;
    stack.slice_count = specimen.slice_count();
    stack.slice_thickness = specimen.slice_thickness();
    stack.cell_slice_phases.assign(static_cast<std::size_t>(specimen.slices_per_cell),
                                   std::vector<double>(grid.point_count(), 0.0));

    const double a0 = specimen.lattice_constant;
    const double d = stack.slice_thickness;
    const int image_range = static_cast<int>(
        std::ceil(image_cutoff_cells * a0 / std::min(grid.extent_x, grid.extent_y)));
    const int z_range = static_cast<int>(std::ceil(image_cutoff_cells));

    for (const BasisAtom& atom : specimen.basis) {
        for (int cy = 0; cy < specimen.cells[1]; ++cy) {
            for (int cx = 0; cx < specimen.cells[0]; ++cx) {
                const double ax = (atom.fx + cx) * a0;
                const double ay = (atom.fy + cy) * a0;
                for (int t = 0; t < specimen.slices_per_cell; ++t) {
                    const double z_lo = t * d - 0.5 * d;
                    const double z_hi = t * d + 0.5 * d;
                    for (int kz = -z_range; kz <= z_range; ++kz) {
                        const double az = (atom.fz + kz) * a0;
                        const detail::ProjectedTerms terms =
                            detail::project_through_slab(atom.species, az, z_lo, z_hi,
                                                         beam.sigma);
                        if (terms.negligible) continue;
                        detail::accumulate_projected_phase(stack.cell_slice_phases[t], grid,
                                                           ax, ay, terms, image_range);
                    }
                }
            }
        }
    }
    return stack;
}

/// Propagator phase -pi * d * lambda * (Qx^2 + Qy^2) on the momentum grid,
/// with signed frequencies Q = q / L for q < N/2 and (q - N) / L otherwise.
inline std::vector<double> build_propagator(const FieldGrid& grid, const BeamParams& beam,
                                            double slice_thickness) {
    if (!(slice_thickness > 0.0)) {
        throw std::invalid_argument("slice thickness must be positive");
    }
    const std::size_t n = grid.points_per_axis;
    const double scale = -std::numbers::pi * slice_thickness * beam.wavelength;
    auto signed_freq = [n](std::size_t q, double extent) {
        const double s = q < n / 2 ? static_cast<double>(q)
                                   : static_cast<double>(q) - static_cast<double>(n);
        return s / extent;
    };
    std::vector<double> phase(grid.point_count());
    for (std::size_t qy = 0; qy < n; ++qy) {
        const double fy = signed_freq(qy, grid.extent_y);
        for (std::size_t qx = 0; qx < n; ++qx) {
            const double fx = signed_freq(qx, grid.extent_x);
            phase[qy * n + qx] = scale * (fx * fx + fy * fy);
        }
    }
    return phase;
}

struct ThicknessReport {
    bool warning = false;
    double slice_thickness = 0.0;      // d, Angstrom
    double potential_spread = 0.0;     // d_p, Angstrom
    double criterion_scale = 0.0;      // configured maximum, Angstrom
    double wavenumber = 0.0;           // 1 / Angstrom
    std::string message;
};

/// Advisory check of the slice thickness against a configured criterion
/// scale. Never aborts; the caller decides what to do with the warning.
inline ThicknessReport check_slice_thickness(double d, double d_p, const BeamParams& beam,
                                             double criterion_scale = 1.0) {
    if (!(d > 0.0) || !(d_p > 0.0)) {
        throw std::invalid_argument("slice thickness and potential spread must be positive");
    }
    ThicknessReport report;
    report.slice_thickness = d;
    report.potential_spread = d_p;
    report.criterion_scale = criterion_scale;
    report.wavenumber = beam.wavenumber;
    std::ostringstream msg;
    if (d > criterion_scale) {
        report.warning = true;
        msg << "slice thickness d = " << d << " A exceeds the configured criterion scale "
            << criterion_scale << " A (potential spread d_p = " << d_p << " A)";
    } else {
        msg << "slice thickness d = " << d << " A within criterion scale " << criterion_scale
            << " A";
    }
    report.message = msg.str();
    return report;
}

}  // namespace qms
