// Synthesis of diagonal phase operators as truncated Walsh series circuits.
//
// A diagonal exp(i f(r)) over m qubits expands into Walsh terms
// f(r) = sum_u W(u) T_u(r). Each kept term with mask u becomes one
// parity-phase gate applied to a wire carrying parity(r AND u); CNOTs move
// that parity between wires. Terms are scheduled in Gray-code order so that
// adjacent surviving terms need a single CNOT, and the mask-0 term is always
// dropped as a global phase.
#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qms/bits.hpp"
#include "qms/circuit.hpp"
#include "qms/statevector.hpp"
#include "qms/walsh.hpp"

namespace qms {

/// Coefficients below this magnitude count as exact zeros and are never
/// synthesized: a zero-angle gate is an identity.
inline constexpr double kZeroCoefficient = 1e-15;

/// Target phases f(r), in radians, over the 2^m flat indices of a register.
struct DiagonalSpec {
    std::vector<double> phases;

    explicit DiagonalSpec(std::vector<double> p) : phases(std::move(p)) {
        if (!is_power_of_two(phases.size())) {
            throw std::invalid_argument("DiagonalSpec: length must be a power of two");
        }
    }

    int qubit_count() const { return std::countr_zero(phases.size()); }
};

struct TruncationPolicy {
    double tau = 0.0;  // relative threshold in [0, 1); terms with |W| < tau * w_max drop

    explicit TruncationPolicy(double t = 0.0) : tau(t) {
        if (!(tau >= 0.0 && tau < 1.0)) {
            throw std::invalid_argument("truncation threshold must lie in [0, 1)");
        }
    }
};

struct KeptTerm {
    std::uint64_t mask = 0;
    double coefficient = 0.0;
};

/// Surviving Walsh terms in Gray-code order (a subsequence of the full
/// enumeration of masks 1..2^m-1; mask 0 is never present).
struct KeptTermSequence {
    int qubit_count = 0;
    std::vector<KeptTerm> terms;
};

inline WalshSpectrum walsh_decompose(const DiagonalSpec& spec) { return fwht(spec.phases); }

/// Every mask u != 0 in Gray order with its coefficient, zeros included:
/// the untruncated baseline that applies the complete Walsh series.
inline KeptTermSequence full_term_sequence(const WalshSpectrum& spectrum) {
    const std::size_t size = spectrum.coefficients.size();
    if (!is_power_of_two(size)) {
        throw std::invalid_argument("spectrum length must be a power of two");
    }
    KeptTermSequence all;
    all.qubit_count = std::countr_zero(size);
    all.terms.reserve(size - 1);
    for (std::size_t j = 1; j < size; ++j) {
        const std::uint64_t mask = gray_code(j);
        all.terms.push_back({mask, spectrum.coefficients[mask]});
    }
    return all;
}

inline KeptTermSequence truncate(const WalshSpectrum& spectrum, const TruncationPolicy& policy) {
    const std::size_t size = spectrum.coefficients.size();
    if (!is_power_of_two(size)) {
        throw std::invalid_argument("truncate: spectrum length must be a power of two");
    }
    KeptTermSequence kept;
    kept.qubit_count = std::countr_zero(size);
    const double cutoff = policy.tau * spectrum.w_max;
    for (std::size_t j = 1; j < size; ++j) {
        const std::uint64_t mask = gray_code(j);
        const double w = spectrum.coefficients[mask];
        if (std::abs(w) < kZeroCoefficient) continue;
        if (std::abs(w) >= cutoff) kept.terms.push_back({mask, w});
    }
    return kept;
}

/// Compiles kept terms into a circuit of CNOT and parity-phase gates whose
/// unitary is diag(exp(i sum_kept W(u) T_u(r))).
///
/// One wire at a time serves as the parity accumulator; its target is the
/// highest set bit of the current mask, so a full Gray sequence costs exactly
/// one CNOT per transition and ends back in the computational basis. For a
/// truncated subsequence each transition costs the Hamming distance between
/// the old and new wire configurations, and at most m - 1 cleanup CNOTs
/// restore the basis at the end.
inline Circuit build_phase_circuit(const KeptTermSequence& terms, int m) {
    validate_qubit_count(m);
    Circuit circuit(m);
    std::vector<std::uint64_t> wire(m);
    for (int q = 0; q < m; ++q) wire[q] = std::uint64_t{1} << q;
    int accumulator = -1;

    auto emit_cnots_into = [&](int target, std::uint64_t want) {
        std::uint64_t diff = wire[target] ^ want;
        while (diff) {
            const int bit = std::countr_zero(diff);
            diff &= diff - 1;
            circuit.push(Gate::cnot(bit, target));
            wire[target] ^= std::uint64_t{1} << bit;
        }
    };
    auto restore = [&](int q) { emit_cnots_into(q, std::uint64_t{1} << q); };

    for (const KeptTerm& term : terms.terms) {
        if (term.mask == 0 || term.mask >> m) {
            throw std::invalid_argument("phase term mask outside register");
        }
        const int target = std::bit_width(term.mask) - 1;
        if (wire[target] != term.mask) {
            if (accumulator >= 0 && accumulator != target) restore(accumulator);
            emit_cnots_into(target, term.mask);
        }
        circuit.push(Gate::parity_phase(term.coefficient, target));
        accumulator = target;
    }
    if (accumulator >= 0) restore(accumulator);
    return circuit;
}

/// Applies diag(exp(i phases[r])) directly to the amplitudes. Serves as the
/// exact reference the synthesized circuits are validated against and as the
/// engine of the exact quantum path.
inline void exact_diagonal_apply(StateVector& state, const DiagonalSpec& spec) {
    if (spec.phases.size() != state.amplitudes.size()) {
        throw std::invalid_argument("diagonal length does not match state size");
    }
    for (std::size_t r = 0; r < spec.phases.size(); ++r) {
        state.amplitudes[r] *= std::polar(1.0, spec.phases[r]);
    }
}

/// Kept-term dump: CSV rows (order_position, mask_binary, coefficient).
inline void dump_kept_terms(const KeptTermSequence& terms, std::ostream& out) {
    out << "order_position,mask_binary,coefficient\n";
    for (std::size_t i = 0; i < terms.terms.size(); ++i) {
        const KeptTerm& t = terms.terms[i];
        std::string bits(static_cast<std::size_t>(terms.qubit_count), '0');
        for (int b = 0; b < terms.qubit_count; ++b) {
            if (t.mask >> b & 1) bits[terms.qubit_count - 1 - b] = '1';
        }
        out << i << ',' << bits << ',' << format_angle(t.coefficient) << '\n';
    }
}

}  // namespace qms
