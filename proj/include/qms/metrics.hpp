// Error metrics and the truncation trade-off experiments: threshold sweeps,
// remaining-term fractions and gate-count reports.
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <vector>

#include "qms/engine.hpp"

namespace qms {

/// Average relative error sum|x - x_hat| / sum|x_hat| with x_hat the exact
/// reference. Not symmetric in its arguments.
inline double relative_error(const std::vector<double>& x, const std::vector<double>& x_hat) {
    if (x.size() != x_hat.size()) {
        throw std::invalid_argument("relative_error: shapes do not match");
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        num += std::abs(x[i] - x_hat[i]);
        den += std::abs(x_hat[i]);
    }
    if (!(den > 0.0)) throw std::invalid_argument("relative_error: zero-norm reference");
    return num / den;
}

/// Empirical potential threshold tau_V = (128 / 2^n) * 1e-3 that holds the
/// truncation error near 1%.
inline double tau_v_formula(int n) {
    if (n < 1) throw std::invalid_argument("bits per axis must be >= 1");
    return 128.0 / static_cast<double>(std::size_t{1} << n) * 1e-3;
}

enum class SweepVariable { potential, kinetic };

struct SweepRow {
    double tau = 0.0;
    double epsilon = 0.0;
    double s = 0.0;  // remaining terms for the varied operator
    GateCensus census;
};

/// Runs the full simulation once per threshold, truncating only the varied
/// operator (the other keeps all nonzero terms), and reports the error
/// against the tau = 0 result. Sweep points run in a parallel map when
/// jobs > 1; row order always follows the threshold list.
inline std::vector<SweepRow> truncation_sweep(const SimulationPlan& plan,
                                              const std::vector<double>& thresholds,
                                              SweepVariable vary, int jobs = 1) {
    if (plan.engine != EngineKind::quantum_truncated) {
        throw std::invalid_argument("truncation_sweep needs the quantum-truncated engine");
    }
    auto plan_for_tau = [&](double tau) {
        SimulationPlan p = plan;
        p.truncation.tau_v = vary == SweepVariable::potential ? tau : 0.0;
        p.truncation.tau_p = vary == SweepVariable::kinetic ? tau : 0.0;
        p.record.per_slice = false;
        p.record.cross_section_row = -1;
        return p;
    };

    const SimulationResult baseline = run_simulation(plan_for_tau(0.0));
    const std::vector<double> reference = probability_grid(baseline.final_field);

    std::vector<SweepRow> rows(thresholds.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < thresholds.size(); i = next.fetch_add(1)) {
            const double tau = thresholds[i];
            SweepRow row;
            row.tau = tau;
            // tau = 0 rows reuse the baseline and compare it against itself,
            // which makes their error exactly zero
            SimulationResult computed;
            const SimulationResult* result = &baseline;
            if (tau != 0.0) {
                computed = run_simulation(plan_for_tau(tau));
                result = &computed;
            }
            row.epsilon = relative_error(probability_grid(result->final_field), reference);
            row.s = vary == SweepVariable::potential ? result->report.s_v : result->report.s_p;
            row.census = result->report.census_truncated;
            rows[i] = row;
        }
    };
    if (jobs <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return rows;
}

struct RemainingFractionRow {
    int bits_per_axis = 0;
    double tau = 0.0;
    double fraction = 0.0;  // mean kept potential terms / (2^2n - 1)
};

/// Kept-term fraction of the potential operators under the empirical
/// thresholds, per grid size. Pure preprocessing; no wave is propagated.
inline std::vector<RemainingFractionRow> remaining_fraction(const Specimen& specimen,
                                                            const BeamParams& beam,
                                                            const std::vector<int>& n_values,
                                                            double image_cutoff_cells = 3.0) {
    std::vector<RemainingFractionRow> rows;
    rows.reserve(n_values.size());
    for (int n : n_values) {
        const FieldGrid grid = grid_for_specimen(n, specimen);
        const PotentialStack stack =
            build_potential_slices(specimen, grid, beam, image_cutoff_cells);
        const double tau = tau_v_formula(n);
        double kept = 0.0;
        for (const auto& phases : stack.cell_slice_phases) {
            const KeptTermSequence terms =
                truncate(walsh_decompose(DiagonalSpec(phases)), TruncationPolicy(tau));
            kept += static_cast<double>(terms.terms.size());
        }
        kept /= static_cast<double>(stack.cell_slice_phases.size());
        RemainingFractionRow row;
        row.bits_per_axis = n;
        row.tau = tau;
        row.fraction = kept / static_cast<double>((std::size_t{1} << (2 * n)) - 1);
        rows.push_back(row);
    }
    return rows;
}

struct GateReport {
    GateCensus untruncated;
    GateCensus truncated;
    double ratio = 0.0;  // untruncated.total / truncated.total
    double s_v_untruncated = 0.0, s_v_truncated = 0.0;
    double s_p_untruncated = 0.0, s_p_truncated = 0.0;
};

/// Gate totals of one full simulation: the untruncated baseline that runs
/// the complete Walsh series (2^2n - 1 phase gates per diagonal) versus the
/// empirical thresholds (tau_v from the 128/2^n formula, tau_p = 1e-10).
/// Circuits are built and counted without being executed.
inline GateReport gate_report(const SimulationPlan& plan) {
    PotentialStack stack =
        build_potential_slices(plan.specimen, plan.grid, plan.beam, plan.image_cutoff_cells);
    stack.propagator_phase = build_propagator(plan.grid, plan.beam, stack.slice_thickness);
    const int m = plan.grid.qubit_count();
    const int n = plan.grid.bits_per_axis;

    GateCensus transforms =
        gate_census(build_2d_transform(n, FourierDirection::forward));
    transforms += gate_census(build_2d_transform(n, FourierDirection::inverse));

    const WalshSpectrum p_spectrum = walsh_decompose(DiagonalSpec(stack.propagator_phase));
    const KeptTermSequence p_full = full_term_sequence(p_spectrum);
    const KeptTermSequence p_kept = truncate(p_spectrum, TruncationPolicy(1e-10));
    const GateCensus p_full_census = gate_census(build_phase_circuit(p_full, m));
    const GateCensus p_kept_census = gate_census(build_phase_circuit(p_kept, m));

    GateReport report;
    report.s_p_untruncated = static_cast<double>(p_full.terms.size());
    report.s_p_truncated = static_cast<double>(p_kept.terms.size());

    const double tau_v = tau_v_formula(n);
    std::vector<GateCensus> v_full_census, v_kept_census;
    for (const auto& phases : stack.cell_slice_phases) {
        const WalshSpectrum spectrum = walsh_decompose(DiagonalSpec(phases));
        const KeptTermSequence full = full_term_sequence(spectrum);
        const KeptTermSequence kept = truncate(spectrum, TruncationPolicy(tau_v));
        v_full_census.push_back(gate_census(build_phase_circuit(full, m)));
        v_kept_census.push_back(gate_census(build_phase_circuit(kept, m)));
        report.s_v_untruncated += static_cast<double>(full.terms.size());
        report.s_v_truncated += static_cast<double>(kept.terms.size());
    }
    const double distinct = static_cast<double>(stack.cell_slice_phases.size());
    report.s_v_untruncated /= distinct;
    report.s_v_truncated /= distinct;

    for (int t = 0; t < stack.slice_count; ++t) {
        const std::size_t i = static_cast<std::size_t>(t) % stack.cell_slice_phases.size();
        report.untruncated += v_full_census[i];
        report.untruncated += p_full_census;
        report.untruncated += transforms;
        report.truncated += v_kept_census[i];
        report.truncated += p_kept_census;
        report.truncated += transforms;
    }
    report.ratio = report.truncated.total == 0
                       ? 0.0
                       : static_cast<double>(report.untruncated.total) /
                             static_cast<double>(report.truncated.total);
    return report;
}

}  // namespace qms
