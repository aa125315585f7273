// Gate set and circuit container for the statevector simulator, plus the gate
// census used by the cost experiments and the line-oriented text format.
#pragma once

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "qms/bits.hpp"

namespace qms {

enum class GateKind {
    hadamard,          // H q
    parity_phase,      // PP theta q : |p> -> exp(i theta (1-2p)) |p>
    controlled_phase,  // CP theta c t : |11> amplitude times exp(i theta)
    cnot,              // CNOT c t
    swap,              // SWAP a b
};

struct Gate {
    GateKind kind;
    double theta = 0.0;  // used by parity_phase and controlled_phase
    int q0 = 0;          // target (H, PP), control (CP, CNOT), first qubit (SWAP)
    int q1 = 0;          // target (CP, CNOT), second qubit (SWAP)

    static Gate hadamard(int target) { return {GateKind::hadamard, 0.0, target, 0}; }
    static Gate parity_phase(double theta, int target) {
        return {GateKind::parity_phase, theta, target, 0};
    }
    static Gate controlled_phase(double theta, int control, int target) {
        return {GateKind::controlled_phase, theta, control, target};
    }
    static Gate cnot(int control, int target) { return {GateKind::cnot, 0.0, control, target}; }
    static Gate swap(int a, int b) { return {GateKind::swap, 0.0, a, b}; }

    bool is_two_qubit() const {
        return kind == GateKind::controlled_phase || kind == GateKind::cnot ||
               kind == GateKind::swap;
    }

    void validate(int qubit_count) const {
        auto check = [qubit_count](int q) {
            if (q < 0 || q >= qubit_count) {
                throw std::out_of_range("gate qubit index " + std::to_string(q) +
                                        " outside register of " + std::to_string(qubit_count) +
                                        " qubits");
            }
        };
        check(q0);
        if (is_two_qubit()) {
            check(q1);
            if (q0 == q1) throw std::invalid_argument("two-qubit gate needs distinct qubits");
        }
    }
};

struct Circuit {
    int qubit_count = 0;
    std::vector<Gate> gates;

    explicit Circuit(int m) : qubit_count(m) { validate_qubit_count(m); }

    void push(const Gate& g) {
        g.validate(qubit_count);
        gates.push_back(g);
    }

    std::size_t size() const { return gates.size(); }

    /// Appends another circuit's gates with qubit indices shifted by `offset`.
    void append_offset(const Circuit& other, int offset) {
        for (Gate g : other.gates) {
            g.q0 += offset;
            if (g.is_two_qubit()) g.q1 += offset;
            push(g);
        }
    }
};

/// Adjoint circuit: gates reversed, phase angles negated. H, CNOT and SWAP
/// are their own inverses.
inline Circuit inverse(const Circuit& circuit) {
    Circuit inv(circuit.qubit_count);
    inv.gates.reserve(circuit.gates.size());
    for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
        Gate g = *it;
        if (g.kind == GateKind::parity_phase || g.kind == GateKind::controlled_phase) {
            g.theta = -g.theta;
        }
        inv.gates.push_back(g);
    }
    return inv;
}

struct GateCensus {
    std::size_t one_qubit = 0;
    std::size_t two_qubit = 0;
    std::size_t total = 0;

    GateCensus& operator+=(const GateCensus& o) {
        one_qubit += o.one_qubit;
        two_qubit += o.two_qubit;
        total += o.total;
        return *this;
    }
};

inline GateCensus gate_census(const Circuit& circuit) {
    GateCensus census;
    for (const Gate& g : circuit.gates) {
        if (g.is_two_qubit()) ++census.two_qubit;
        else ++census.one_qubit;
    }
    census.total = census.one_qubit + census.two_qubit;
    return census;
}

inline std::string format_angle(double theta) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", theta);
    return buf;
}

/// One gate per line: `H q`, `PP theta q`, `CP theta c t`, `CNOT c t`, `SWAP a b`.
inline void write_circuit_text(const Circuit& circuit, std::ostream& out) {
    for (const Gate& g : circuit.gates) {
        switch (g.kind) {
            case GateKind::hadamard: out << "H " << g.q0 << '\n'; break;
            case GateKind::parity_phase:
                out << "PP " << format_angle(g.theta) << ' ' << g.q0 << '\n';
                break;
            case GateKind::controlled_phase:
                out << "CP " << format_angle(g.theta) << ' ' << g.q0 << ' ' << g.q1 << '\n';
                break;
            case GateKind::cnot: out << "CNOT " << g.q0 << ' ' << g.q1 << '\n'; break;
            case GateKind::swap: out << "SWAP " << g.q0 << ' ' << g.q1 << '\n'; break;
        }
    }
}

inline Circuit parse_circuit_text(std::istream& in, int qubit_count) {
    Circuit circuit(qubit_count);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        std::string op;
        row >> op;
        double theta = 0.0;
        int a = 0, b = 0;
        bool ok = false;
        if (op == "H") {
            ok = static_cast<bool>(row >> a);
            if (ok) circuit.push(Gate::hadamard(a));
        } else if (op == "PP") {
            ok = static_cast<bool>(row >> theta >> a);
            if (ok) circuit.push(Gate::parity_phase(theta, a));
        } else if (op == "CP") {
            ok = static_cast<bool>(row >> theta >> a >> b);
            if (ok) circuit.push(Gate::controlled_phase(theta, a, b));
        } else if (op == "CNOT") {
            ok = static_cast<bool>(row >> a >> b);
            if (ok) circuit.push(Gate::cnot(a, b));
        } else if (op == "SWAP") {
            ok = static_cast<bool>(row >> a >> b);
            if (ok) circuit.push(Gate::swap(a, b));
        }
        if (!ok) {
            throw std::runtime_error("circuit text: bad line " + std::to_string(line_no) +
                                     ": " + line);
        }
    }
    return circuit;
}

}  // namespace qms
