// Quantum Fourier transform circuits: Hadamards plus controlled phase
// rotations, with explicit final swaps so output ordering matches natural
// index ordering.
#pragma once

#include <numbers>

#include "qms/circuit.hpp"

namespace qms {

/// n-qubit QFT whose dense unitary is the DFT matrix with kernel
/// exp(+2*pi*i*j*k / 2^n), scaled by 1/sqrt(2^n).
inline Circuit build_qft(int n) {
    Circuit circuit(n);
    for (int q = n - 1; q >= 0; --q) {
        circuit.push(Gate::hadamard(q));
        for (int b = q - 1; b >= 0; --b) {
            const double theta =
                2.0 * std::numbers::pi / static_cast<double>(std::size_t{1} << (q - b + 1));
            circuit.push(Gate::controlled_phase(theta, b, q));
        }
    }
    for (int q = 0; q < n / 2; ++q) {
        circuit.push(Gate::swap(q, n - 1 - q));
    }
    return circuit;
}

/// Reverse of build_qft with conjugated angles; kernel exp(-2*pi*i*j*k / 2^n).
inline Circuit build_iqft(int n) { return inverse(build_qft(n)); }

enum class FourierDirection { forward, inverse };

/// 2D transform over m = 2n qubits: the 1D transform applied to the x register
/// (qubits 0..n-1) and the y register (qubits n..2n-1). `forward` is the
/// coordinate -> momentum direction and uses the exp(-2*pi*i) kernel per axis,
/// matching the classical FFT convention.
inline Circuit build_2d_transform(int n, FourierDirection direction) {
    const Circuit axis = direction == FourierDirection::forward ? build_iqft(n) : build_qft(n);
    Circuit circuit(2 * n);
    circuit.append_offset(axis, 0);
    circuit.append_offset(axis, n);
    return circuit;
}

}  // namespace qms
