// Specimen geometry (periodic cell, atom basis, slicing) and the field grid
// the wave function is sampled on.
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "qms/bits.hpp"
#include "qms/species.hpp"

namespace qms {

struct BasisAtom {
    double fx = 0.0, fy = 0.0, fz = 0.0;  // fractional cell coordinates, [0, 1)
    AtomSpecies species;
};

struct Specimen {
    double lattice_constant = 0.0;  // Angstrom
    std::vector<BasisAtom> basis;
    std::array<int, 3> cells{1, 1, 1};  // repetitions along x, y, z
    int slices_per_cell = 1;

    void validate() const {
        if (!(lattice_constant > 0.0)) {
            throw std::invalid_argument("lattice constant must be positive");
        }
        if (slices_per_cell < 1) {
            throw std::invalid_argument("slices_per_cell must be >= 1");
        }
        if (cells[0] < 1 || cells[1] < 1 || cells[2] < 0) {
            throw std::invalid_argument("cell counts must be >= 1 transversely and >= 0 in depth");
        }
        for (const BasisAtom& atom : basis) {
            for (double f : {atom.fx, atom.fy, atom.fz}) {
                if (!(f >= 0.0 && f < 1.0)) {
                    throw std::invalid_argument("fractional coordinates must lie in [0, 1)");
                }
            }
            atom.species.validate();
        }
    }

    double slice_thickness() const { return lattice_constant / slices_per_cell; }
    int slice_count() const { return cells[2] * slices_per_cell; }
};

struct FieldGrid {
    int bits_per_axis = 0;
    std::size_t points_per_axis = 0;
    double extent_x = 0.0;  // Angstrom
    double extent_y = 0.0;

    FieldGrid(int n, double lx, double ly) {
        GridIndex idx(n);
        bits_per_axis = idx.bits_per_axis;
        points_per_axis = idx.points_per_axis;
        extent_x = lx;
        extent_y = ly;
        if (!(pixel_size_x() > 0.0 && pixel_size_y() > 0.0)) {
            throw std::invalid_argument("grid extent must be positive");
        }
    }

    double pixel_size_x() const { return extent_x / static_cast<double>(points_per_axis); }
    double pixel_size_y() const { return extent_y / static_cast<double>(points_per_axis); }
    std::size_t point_count() const { return points_per_axis * points_per_axis; }
    int qubit_count() const { return 2 * bits_per_axis; }
};

/// Grid spanning the specimen's transverse supercell, one lattice constant
/// per repeated cell.
inline FieldGrid grid_for_specimen(int bits_per_axis, const Specimen& specimen) {
    return FieldGrid(bits_per_axis, specimen.lattice_constant * specimen.cells[0],
                     specimen.lattice_constant * specimen.cells[1]);
}

}  // namespace qms
