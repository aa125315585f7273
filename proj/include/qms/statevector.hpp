// Dense statevector simulator. Gates act in place through stride-based index
// arithmetic; no gate ever materializes its full matrix.
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "qms/bits.hpp"
#include "qms/circuit.hpp"

namespace qms {

using cplx = std::complex<double>;

struct StateVector {
    int qubit_count = 0;
    std::vector<cplx> amplitudes;

    static StateVector zero_state(int m) { return basis_state(m, 0); }

    static StateVector basis_state(int m, std::size_t r) {
        validate_qubit_count(m);
        StateVector s;
        s.qubit_count = m;
        s.amplitudes.assign(std::size_t{1} << m, cplx{0.0, 0.0});
        if (r >= s.amplitudes.size()) {
            throw std::out_of_range("basis state index outside register");
        }
        s.amplitudes[r] = cplx{1.0, 0.0};
        return s;
    }

    static StateVector from_amplitudes(int m, std::vector<cplx> amps) {
        validate_qubit_count(m);
        if (amps.size() != (std::size_t{1} << m)) {
            throw std::invalid_argument("amplitude count does not match qubit count");
        }
        StateVector s;
        s.qubit_count = m;
        s.amplitudes = std::move(amps);
        if (std::abs(s.norm_squared() - 1.0) > 1e-9) {
            throw std::invalid_argument("state vector is not normalized");
        }
        return s;
    }

    double norm_squared() const {
        double n = 0.0;
        for (const cplx& a : amplitudes) n += std::norm(a);
        return n;
    }
};

inline void apply_gate(StateVector& state, const Gate& gate) {
    gate.validate(state.qubit_count);
    std::vector<cplx>& amp = state.amplitudes;
    const std::size_t size = amp.size();
    switch (gate.kind) {
        case GateKind::hadamard: {
            const std::size_t step = std::size_t{1} << gate.q0;
            const double inv_sqrt2 = 0.70710678118654752440;
            for (std::size_t block = 0; block < size; block += 2 * step) {
                for (std::size_t i = block; i < block + step; ++i) {
                    const cplx a = amp[i];
                    const cplx b = amp[i + step];
                    amp[i] = (a + b) * inv_sqrt2;
                    amp[i + step] = (a - b) * inv_sqrt2;
                }
            }
            break;
        }
        case GateKind::parity_phase: {
            const std::size_t step = std::size_t{1} << gate.q0;
            const cplx plus = std::polar(1.0, gate.theta);
            const cplx minus = std::polar(1.0, -gate.theta);
            for (std::size_t block = 0; block < size; block += 2 * step) {
                for (std::size_t i = block; i < block + step; ++i) {
                    amp[i] *= plus;
                    amp[i + step] *= minus;
                }
            }
            break;
        }
        case GateKind::controlled_phase: {
            const std::size_t both = (std::size_t{1} << gate.q0) | (std::size_t{1} << gate.q1);
            const cplx phase = std::polar(1.0, gate.theta);
            for (std::size_t i = 0; i < size; ++i) {
                if ((i & both) == both) amp[i] *= phase;
            }
            break;
        }
        case GateKind::cnot: {
            const std::size_t control = std::size_t{1} << gate.q0;
            const std::size_t target = std::size_t{1} << gate.q1;
            for (std::size_t i = 0; i < size; ++i) {
                if ((i & control) && !(i & target)) {
                    std::swap(amp[i], amp[i | target]);
                }
            }
            break;
        }
        case GateKind::swap: {
            const std::size_t bit_a = std::size_t{1} << gate.q0;
            const std::size_t bit_b = std::size_t{1} << gate.q1;
            for (std::size_t i = 0; i < size; ++i) {
                if ((i & bit_a) && !(i & bit_b)) {
                    std::swap(amp[i], amp[(i ^ bit_a) | bit_b]);
                }
            }
            break;
        }
    }
}

inline void run_inplace(const Circuit& circuit, StateVector& state) {
    if (circuit.qubit_count != state.qubit_count) {
        throw std::invalid_argument("circuit and state qubit counts differ");
    }
    for (const Gate& g : circuit.gates) apply_gate(state, g);
}

inline StateVector run(const Circuit& circuit, StateVector state) {
    run_inplace(circuit, state);
    return state;
}

/// Dense unitary of a circuit, assembled column by column; row-major,
/// element (row, col) at [row * dim + col]. Guarded to m <= 10.
inline std::vector<cplx> circuit_unitary(const Circuit& circuit) {
    if (circuit.qubit_count > 10) {
        throw std::invalid_argument("circuit_unitary limited to 10 qubits");
    }
    const std::size_t dim = std::size_t{1} << circuit.qubit_count;
    std::vector<cplx> unitary(dim * dim);
    for (std::size_t col = 0; col < dim; ++col) {
        StateVector s = StateVector::basis_state(circuit.qubit_count, col);
        run_inplace(circuit, s);
        for (std::size_t row = 0; row < dim; ++row) {
            unitary[row * dim + col] = s.amplitudes[row];
        }
    }
    return unitary;
}

/// Projective sampling: `shots` i.i.d. draws from |amplitude|^2, returned as
/// counts per basis index. Uses a 53-bit uniform from mt19937_64 and an
/// inverse-CDF search so histograms are identical across platforms for a
/// fixed seed.
inline std::vector<std::uint64_t> measure_sample(const StateVector& state, std::size_t shots,
                                                 std::uint64_t seed) {
    if (shots < 1) throw std::invalid_argument("measure_sample: shots must be >= 1");
    if (std::abs(state.norm_squared() - 1.0) > 1e-6) {
        throw std::invalid_argument("measure_sample: state is not normalized");
    }
    const std::size_t size = state.amplitudes.size();
    std::vector<double> cumulative(size);
    double acc = 0.0;
    for (std::size_t i = 0; i < size; ++i) {
        acc += std::norm(state.amplitudes[i]);
        cumulative[i] = acc;
    }
    cumulative.back() = acc;  // guard the final bucket against rounding

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> counts(size, 0);
    for (std::size_t shot = 0; shot < shots; ++shot) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * acc;
        std::size_t lo = 0, hi = size - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cumulative[mid] > u) hi = mid;
            else lo = mid + 1;
        }
        ++counts[lo];
    }
    return counts;
}

/// |amplitude|^2 arranged as an N x N grid, entry (x, y) at [N*y + x].
inline std::vector<double> probability_grid(const StateVector& state, std::size_t n_axis) {
    if (state.amplitudes.size() != n_axis * n_axis) {
        throw std::invalid_argument("probability_grid: state size is not N*N");
    }
    std::vector<double> grid(state.amplitudes.size());
    for (std::size_t r = 0; r < grid.size(); ++r) {
        grid[r] = std::norm(state.amplitudes[r]);
    }
    return grid;
}

}  // namespace qms
