// The two interchangeable multislice engines: a classical split-step FFT
// reference and a quantum-circuit implementation that runs gate by gate on a
// statevector. Both advance a plane wave through the slice stack
// psi -> Finv [ exp(i propagator) F [ exp(i slice_phase) psi ] ].
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qms/beam.hpp"
#include "qms/circuit.hpp"
#include "qms/diagonal.hpp"
#include "qms/fft.hpp"
#include "qms/potential.hpp"
#include "qms/qft.hpp"
#include "qms/specimen.hpp"
#include "qms/statevector.hpp"
#include "qms/wavefield.hpp"

namespace qms {

enum class EngineKind { classical, quantum_exact, quantum_truncated };

inline std::string engine_name(EngineKind e) {
    switch (e) {
        case EngineKind::classical: return "classical";
        case EngineKind::quantum_exact: return "quantum-exact";
        case EngineKind::quantum_truncated: return "quantum-truncated";
    }
    return "?";
}

struct Truncation {
    double tau_v = 0.0;
    double tau_p = 0.0;
};

struct RecordOptions {
    int cross_section_row = -1;  // -1: pick the row of maximum time-averaged intensity
    bool per_slice = true;
};

struct SimulationPlan {
    Specimen specimen;
    FieldGrid grid;
    BeamParams beam;
    EngineKind engine = EngineKind::classical;
    Truncation truncation;
    RecordOptions record;
    std::uint64_t seed = 0;
    double image_cutoff_cells = 3.0;
};

struct ErrorReport {
    double epsilon = 0.0;
    double s_v = 0.0;  // mean kept potential terms per distinct slice
    double s_p = 0.0;  // kept kinetic terms
    GateCensus census_untruncated;
    GateCensus census_truncated;
};

struct RunStats {
    int kinetic_walsh_transforms = 0;
    int potential_walsh_transforms = 0;
    double max_norm_drift = 0.0;
};

struct SimulationResult {
    WaveField final_field;
    std::vector<std::vector<double>> slice_grids;    // probability per slice when recording
    std::vector<std::vector<double>> cross_section;  // |psi(x, y0)|^2 per slice
    int cross_section_row = -1;
    ErrorReport report;  // epsilon left for the caller; s and census filled when truncating
    RunStats stats;
};

/// One classical multislice step, coordinate representation in and out.
inline void classical_step_inplace(WaveField& psi, const std::vector<double>& slice_phase,
                                   const std::vector<double>& propagator_phase) {
    if (psi.representation != Representation::coordinate) {
        throw std::invalid_argument("classical_step expects the coordinate representation");
    }
    if (psi.amplitudes.size() != slice_phase.size() ||
        psi.amplitudes.size() != propagator_phase.size()) {
        throw std::invalid_argument("classical_step: field shapes do not match");
    }
    for (std::size_t r = 0; r < psi.amplitudes.size(); ++r) {
        psi.amplitudes[r] *= std::polar(1.0, slice_phase[r]);
    }
    fft_2d_inplace(psi.amplitudes, psi.axis_points, false);
    for (std::size_t r = 0; r < psi.amplitudes.size(); ++r) {
        psi.amplitudes[r] *= std::polar(1.0, propagator_phase[r]);
    }
    fft_2d_inplace(psi.amplitudes, psi.axis_points, true);
}

inline WaveField classical_step(WaveField psi, const std::vector<double>& slice_phase,
                                const std::vector<double>& propagator_phase) {
    classical_step_inplace(psi, slice_phase, propagator_phase);
    return psi;
}

struct QuantumStepCircuits {
    Circuit potential;
    Circuit forward;
    Circuit kinetic;
    Circuit inverse;
};

/// The four circuits of one slice: truncated Walsh phase circuits for the
/// transmission and propagator diagonals, bracketed by the 2D transforms.
/// Composing them on a statevector equals classical_step up to global phase
/// when both thresholds are zero.
inline QuantumStepCircuits quantum_step_circuits(const std::vector<double>& slice_phase,
                                                 const std::vector<double>& propagator_phase,
                                                 const Truncation& truncation,
                                                 const FieldGrid& grid) {
    if (slice_phase.size() != grid.point_count() ||
        propagator_phase.size() != grid.point_count()) {
        throw std::invalid_argument("quantum_step_circuits: field shapes do not match the grid");
    }
    const int m = grid.qubit_count();
    const KeptTermSequence v_terms =
        truncate(walsh_decompose(DiagonalSpec(slice_phase)), TruncationPolicy(truncation.tau_v));
    const KeptTermSequence p_terms = truncate(walsh_decompose(DiagonalSpec(propagator_phase)),
                                              TruncationPolicy(truncation.tau_p));
    return QuantumStepCircuits{
        build_phase_circuit(v_terms, m),
        build_2d_transform(grid.bits_per_axis, FourierDirection::forward),
        build_phase_circuit(p_terms, m),
        build_2d_transform(grid.bits_per_axis, FourierDirection::inverse),
    };
}

namespace detail {

inline void validate_plan(const SimulationPlan& plan) {
    plan.specimen.validate();
    if (!(plan.truncation.tau_v >= 0.0 && plan.truncation.tau_v < 1.0) ||
        !(plan.truncation.tau_p >= 0.0 && plan.truncation.tau_p < 1.0)) {
        throw std::invalid_argument("truncation thresholds must lie in [0, 1)");
    }
    if (plan.record.cross_section_row >= static_cast<int>(plan.grid.points_per_axis)) {
        throw std::invalid_argument("cross-section row outside the grid");
    }
    if (plan.engine == EngineKind::classical &&
        (plan.truncation.tau_v > 0.0 || plan.truncation.tau_p > 0.0)) {
        throw std::invalid_argument("the classical engine does not support truncation");
    }
}

inline int resolve_cross_section_row(const std::vector<std::vector<double>>& slice_grids,
                                     std::size_t n_axis, int requested) {
    if (requested >= 0) return requested;
    if (slice_grids.empty()) return -1;
    std::vector<double> row_intensity(n_axis, 0.0);
    for (const auto& grid : slice_grids) {
        for (std::size_t y = 0; y < n_axis; ++y) {
            for (std::size_t x = 0; x < n_axis; ++x) row_intensity[y] += grid[y * n_axis + x];
        }
    }
    std::size_t best = 0;
    for (std::size_t y = 1; y < n_axis; ++y) {
        if (row_intensity[y] > row_intensity[best]) best = y;
    }
    return static_cast<int>(best);
}

}  // namespace detail

/// Advances a plane wave through all slices with the selected engine and
/// assembles the trajectory records. Configuration problems are reported
/// before any field is built.
inline SimulationResult run_simulation(const SimulationPlan& plan) {
    detail::validate_plan(plan);

    PotentialStack stack =
        build_potential_slices(plan.specimen, plan.grid, plan.beam, plan.image_cutoff_cells);
    stack.propagator_phase = build_propagator(plan.grid, plan.beam, stack.slice_thickness);

    const std::size_t n_axis = plan.grid.points_per_axis;
    const int slices = stack.slice_count;
    SimulationResult result;

    const bool fixed_row = plan.record.cross_section_row >= 0;
    auto record_slice = [&](const std::vector<double>& grid) {
        if (plan.record.per_slice) result.slice_grids.push_back(grid);
        if (fixed_row && !plan.record.per_slice) {
            const std::size_t y0 = static_cast<std::size_t>(plan.record.cross_section_row);
            result.cross_section.emplace_back(grid.begin() + y0 * n_axis,
                                              grid.begin() + (y0 + 1) * n_axis);
        }
    };
    auto track_norm = [&](double norm_sq) {
        result.stats.max_norm_drift =
            std::max(result.stats.max_norm_drift, std::abs(1.0 - norm_sq));
    };

    if (plan.engine == EngineKind::classical) {
        WaveField psi = init_plane_wave(plan.grid);
        for (int t = 0; t < slices; ++t) {
            classical_step_inplace(psi, stack.slice_phase(t), stack.propagator_phase);
            record_slice(probability_grid(psi));
            track_norm(psi.norm_squared());
        }
        result.final_field = std::move(psi);
    } else {
        StateVector sv = to_state_vector(init_plane_wave(plan.grid));
        const Circuit forward = build_2d_transform(plan.grid.bits_per_axis,
                                                   FourierDirection::forward);
        const Circuit backward = build_2d_transform(plan.grid.bits_per_axis,
                                                    FourierDirection::inverse);

        if (plan.engine == EngineKind::quantum_exact) {
            std::vector<DiagonalSpec> v_specs;
            v_specs.reserve(stack.cell_slice_phases.size());
            for (const auto& phases : stack.cell_slice_phases) v_specs.emplace_back(phases);
            const DiagonalSpec p_spec(stack.propagator_phase);
            for (int t = 0; t < slices; ++t) {
                exact_diagonal_apply(sv, v_specs[t % stack.slices_per_cell]);
                run_inplace(forward, sv);
                exact_diagonal_apply(sv, p_spec);
                run_inplace(backward, sv);
                record_slice(probability_grid(sv, n_axis));
                track_norm(sv.norm_squared());
            }
        } else {
            // Walsh preprocessing: the kinetic spectrum once per run, the
            // potential spectra once per distinct slice, reused across cells.
            const int m = plan.grid.qubit_count();
            const KeptTermSequence p_terms =
                truncate(walsh_decompose(DiagonalSpec(stack.propagator_phase)),
                         TruncationPolicy(plan.truncation.tau_p));
            ++result.stats.kinetic_walsh_transforms;
            const Circuit p_circuit = build_phase_circuit(p_terms, m);

            std::vector<Circuit> v_circuits;
            double kept_sum = 0.0;
            v_circuits.reserve(stack.cell_slice_phases.size());
            for (const auto& phases : stack.cell_slice_phases) {
                const KeptTermSequence v_terms = truncate(
                    walsh_decompose(DiagonalSpec(phases)), TruncationPolicy(plan.truncation.tau_v));
                ++result.stats.potential_walsh_transforms;
                kept_sum += static_cast<double>(v_terms.terms.size());
                v_circuits.push_back(build_phase_circuit(v_terms, m));
            }
            result.report.s_v = stack.cell_slice_phases.empty()
                                    ? 0.0
                                    : kept_sum / static_cast<double>(stack.cell_slice_phases.size());
            result.report.s_p = static_cast<double>(p_terms.terms.size());

            GateCensus executed;
            const GateCensus transform_census = [&] {
                GateCensus c = gate_census(forward);
                c += gate_census(backward);
                return c;
            }();
            const GateCensus p_census = gate_census(p_circuit);
            for (int t = 0; t < slices; ++t) {
                const Circuit& v_circuit = v_circuits[t % stack.slices_per_cell];
                run_inplace(v_circuit, sv);
                run_inplace(forward, sv);
                run_inplace(p_circuit, sv);
                run_inplace(backward, sv);
                executed += gate_census(v_circuit);
                executed += p_census;
                executed += transform_census;
                record_slice(probability_grid(sv, n_axis));
                track_norm(sv.norm_squared());
            }
            result.report.census_truncated = executed;
        }
        result.final_field = from_state_vector(sv, n_axis, Representation::coordinate);
    }

    result.cross_section_row = detail::resolve_cross_section_row(
        result.slice_grids, n_axis, plan.record.cross_section_row);
    if (plan.record.per_slice && result.cross_section_row >= 0) {
        const std::size_t y0 = static_cast<std::size_t>(result.cross_section_row);
        for (const auto& grid : result.slice_grids) {
            result.cross_section.emplace_back(grid.begin() + y0 * n_axis,
                                              grid.begin() + (y0 + 1) * n_axis);
        }
    }
    return result;
}

}  // namespace qms
