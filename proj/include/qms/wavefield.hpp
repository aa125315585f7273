// The N x N complex wave field and its bijection with the amplitude-encoded
// statevector (flat index r = N*y + x; lower qubits carry x, higher carry y).
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "qms/specimen.hpp"
#include "qms/statevector.hpp"

namespace qms {

enum class Representation { coordinate, momentum };

struct WaveField {
    std::size_t axis_points = 0;
    std::vector<cplx> amplitudes;  // row-major, [y * N + x]
    Representation representation = Representation::coordinate;

    double norm_squared() const {
        double n = 0.0;
        for (const cplx& a : amplitudes) n += std::norm(a);
        return n;
    }
};

/// Uniform plane-wave illumination: every amplitude 1/N, coordinate
/// representation. Identical to running a Hadamard on each of the 2n qubits
/// of the zero state.
inline WaveField init_plane_wave(const FieldGrid& grid) {
    WaveField field;
    field.axis_points = grid.points_per_axis;
    field.representation = Representation::coordinate;
    const double amp = 1.0 / static_cast<double>(grid.points_per_axis);
    field.amplitudes.assign(grid.point_count(), cplx{amp, 0.0});
    return field;
}

inline StateVector to_state_vector(const WaveField& field) {
    int qubits = 0;
    while ((std::size_t{1} << qubits) < field.amplitudes.size()) ++qubits;
    if ((std::size_t{1} << qubits) != field.amplitudes.size()) {
        throw std::invalid_argument("wave field size is not a power of two");
    }
    return StateVector::from_amplitudes(qubits, field.amplitudes);
}

inline WaveField from_state_vector(const StateVector& state, std::size_t axis_points,
                                   Representation repr) {
    if (state.amplitudes.size() != axis_points * axis_points) {
        throw std::invalid_argument("state size is not N*N");
    }
    WaveField field;
    field.axis_points = axis_points;
    field.amplitudes = state.amplitudes;
    field.representation = repr;
    return field;
}

inline std::vector<double> probability_grid(const WaveField& field) {
    std::vector<double> grid(field.amplitudes.size());
    for (std::size_t r = 0; r < grid.size(); ++r) grid[r] = std::norm(field.amplitudes[r]);
    return grid;
}

}  // namespace qms
