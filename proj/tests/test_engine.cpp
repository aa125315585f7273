#include <doctest.h>

#include <cstring>

#include "qms/engine.hpp"
#include "qms/metrics.hpp"
#include "test_util.hpp"

using namespace qms;

namespace {

AtomSpecies gold() {
    AtomSpecies au;
    au.label = "Au";
    au.a = {2.388, 4.226, 2.689, 1.255};
    au.b = {42.866, 9.743, 2.264, 0.306};
    au.debye_waller = 0.61;
    return au;
}

Specimen gold_fcc(int cells_z, int slices_per_cell = 16) {
    Specimen s;
    s.lattice_constant = 4.0782;
    s.cells = {1, 1, cells_z};
    s.slices_per_cell = slices_per_cell;
    const AtomSpecies au = gold();
    s.basis = {{0.0, 0.0, 0.0, au}, {0.5, 0.5, 0.0, au}, {0.5, 0.0, 0.5, au},
               {0.0, 0.5, 0.5, au}};
    return s;
}

SimulationPlan gold_plan(int grid_bits, int cells_z, EngineKind engine,
                         int slices_per_cell = 16) {
    const Specimen specimen = gold_fcc(cells_z, slices_per_cell);
    return SimulationPlan{specimen,
                          grid_for_specimen(grid_bits, specimen),
                          beam_params(100e3),
                          engine,
                          Truncation{},
                          RecordOptions{},
                          1,
                          3.0};
}

Specimen random_specimen(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    std::uniform_real_distribution<double> lattice(3.5, 4.5);
    std::uniform_int_distribution<int> atom_count(1, 4);
    Specimen s;
    s.lattice_constant = lattice(rng);
    s.cells = {1, 1, 1};
    s.slices_per_cell = 8;
    const AtomSpecies au = gold();
    const int atoms = atom_count(rng);
    for (int i = 0; i < atoms; ++i) {
        s.basis.push_back({frac(rng), frac(rng), frac(rng), au});
    }
    return s;
}

}  // namespace

TEST_CASE("plane wave initialization") {
    const FieldGrid grid(2, 4.0, 4.0);
    const WaveField field = init_plane_wave(grid);
    for (const cplx& a : field.amplitudes) CHECK(a == cplx{0.25, 0.0});
    CHECK(field.norm_squared() == 1.0);

    // identical to running a Hadamard on each qubit of |0...0>
    StateVector s = StateVector::zero_state(4);
    for (int q = 0; q < 4; ++q) apply_gate(s, Gate::hadamard(q));
    CHECK(test_util::max_abs_diff(s.amplitudes, to_state_vector(field).amplitudes) < 1e-15);
}

TEST_CASE("classical step identities") {
    const FieldGrid grid(3, 4.0, 4.0);
    const std::vector<double> zeros(grid.point_count(), 0.0);
    SUBCASE("zero potential and propagator is the identity") {
        WaveField psi = init_plane_wave(grid);
        const WaveField original = psi;
        classical_step_inplace(psi, zeros, zeros);
        CHECK(test_util::max_abs_diff(psi.amplitudes, original.amplitudes) < 1e-12);
    }
    SUBCASE("pure propagation leaves the momentum distribution unchanged") {
        WaveField psi = from_state_vector(test_util::random_state(6, 2), 8,
                                          Representation::coordinate);
        std::vector<cplx> before = psi.amplitudes;
        fft_2d_inplace(before, 8, false);
        const std::vector<double> propagator =
            build_propagator(grid, beam_params(100e3), 0.5);
        classical_step_inplace(psi, zeros, propagator);
        std::vector<cplx> after = psi.amplitudes;
        fft_2d_inplace(after, 8, false);
        for (std::size_t r = 0; r < before.size(); ++r) {
            CHECK(std::abs(std::norm(after[r]) - std::norm(before[r])) < 1e-12);
        }
        CHECK(std::abs(1.0 - psi.norm_squared()) < 1e-12);
    }
    SUBCASE("free-space evolution broadens a centered gaussian") {
        const std::size_t n = 8;
        WaveField psi;
        psi.axis_points = n;
        psi.amplitudes.resize(n * n);
        const double center = (n - 1) / 2.0;
        double norm = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            for (std::size_t x = 0; x < n; ++x) {
                const double d2 = (x - center) * (x - center) + (y - center) * (y - center);
                psi.amplitudes[y * n + x] = std::exp(-d2 / 2.0);
                norm += std::norm(psi.amplitudes[y * n + x]);
            }
        }
        for (cplx& a : psi.amplitudes) a /= std::sqrt(norm);
        auto width = [&](const WaveField& f) {
            double acc = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
                for (std::size_t x = 0; x < n; ++x) {
                    const double d2 =
                        (x - center) * (x - center) + (y - center) * (y - center);
                    acc += d2 * std::norm(f.amplitudes[y * n + x]);
                }
            }
            return acc;
        };
        const std::vector<double> propagator =
            build_propagator(grid, beam_params(100e3), 2.0);
        double previous = width(psi);
        for (int step = 0; step < 3; ++step) {
            classical_step_inplace(psi, zeros, propagator);
            const double now = width(psi);
            CHECK(now > previous);
            previous = now;
        }
    }
    SUBCASE("shape and representation preconditions") {
        WaveField psi = init_plane_wave(grid);
        CHECK_THROWS_AS(classical_step_inplace(psi, std::vector<double>(4, 0.0), zeros),
                        std::invalid_argument);
        psi.representation = Representation::momentum;
        CHECK_THROWS_AS(classical_step_inplace(psi, zeros, zeros), std::invalid_argument);
    }
}

TEST_CASE("quantum step circuits match the classical step at tau = 0") {
    const int n = 3;
    const FieldGrid grid(n, 4.0782, 4.0782);
    const std::vector<double> slice_phase = test_util::random_phases(64, 50);
    const std::vector<double> propagator = build_propagator(grid, beam_params(100e3), 0.25);

    const QuantumStepCircuits circuits =
        quantum_step_circuits(slice_phase, propagator, Truncation{0.0, 0.0}, grid);

    const StateVector in = test_util::random_state(2 * n, 51);
    StateVector quantum = in;
    run_inplace(circuits.potential, quantum);
    run_inplace(circuits.forward, quantum);
    run_inplace(circuits.kinetic, quantum);
    run_inplace(circuits.inverse, quantum);

    WaveField psi = from_state_vector(in, 8, Representation::coordinate);
    classical_step_inplace(psi, slice_phase, propagator);

    CHECK(test_util::phase_aligned_deviation(quantum.amplitudes, psi.amplitudes) < 1e-10);
}

TEST_CASE("kinetic circuit keeps all nonzero terms at tau_p = 1e-10") {
    const int n = 4;
    const FieldGrid grid(n, 4.0782, 4.0782);
    const std::vector<double> propagator = build_propagator(grid, beam_params(100e3), 0.25);
    const std::vector<double> zeros(grid.point_count(), 0.0);
    const QuantumStepCircuits circuits =
        quantum_step_circuits(zeros, propagator, Truncation{0.0, 1e-10}, grid);

    const WalshSpectrum spectrum = fwht(propagator);
    std::size_t nonzero = 0;
    for (std::uint64_t u = 1; u < spectrum.coefficients.size(); ++u) {
        if (std::abs(spectrum.coefficients[u]) >= 1e-15) ++nonzero;
    }
    CHECK(gate_census(circuits.kinetic).one_qubit == nonzero);

    // kept masks never mix the x and y registers
    const KeptTermSequence kept = truncate(spectrum, TruncationPolicy(1e-10));
    const std::uint64_t x_mask = (std::uint64_t{1} << n) - 1;
    for (const KeptTerm& term : kept.terms) {
        CHECK(((term.mask & x_mask) == 0 || (term.mask >> n) == 0));
    }
}

TEST_CASE("zero slices leave the input unchanged") {
    SimulationPlan plan = gold_plan(3, 0, EngineKind::classical);
    const SimulationResult result = run_simulation(plan);
    const WaveField start = init_plane_wave(plan.grid);
    CHECK(test_util::max_abs_diff(result.final_field.amplitudes, start.amplitudes) == 0.0);
    CHECK(result.slice_grids.empty());
}

TEST_CASE("classical and exact quantum engines agree on the default specimen") {
    const SimulationResult classical = run_simulation(gold_plan(4, 2, EngineKind::classical));
    const SimulationResult quantum = run_simulation(gold_plan(4, 2, EngineKind::quantum_exact));
    const double eps = relative_error(probability_grid(quantum.final_field),
                                      probability_grid(classical.final_field));
    CHECK(eps < 1e-9);
}

TEST_CASE("engine equivalence holds on random specimens") {
    for (int n : {3, 4, 5}) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            const Specimen specimen = random_specimen(900 + seed);
            SimulationPlan plan{specimen,         grid_for_specimen(n, specimen),
                                beam_params(100e3), EngineKind::classical,
                                Truncation{},      RecordOptions{-1, false},
                                seed,              3.0};
            const SimulationResult classical = run_simulation(plan);
            plan.engine = EngineKind::quantum_exact;
            const SimulationResult quantum = run_simulation(plan);
            CHECK(relative_error(probability_grid(quantum.final_field),
                                 probability_grid(classical.final_field)) < 1e-9);
        }
    }
}

TEST_CASE("gate-level truncated engine at tau = 0 equals the oracle engine") {
    SimulationPlan plan = gold_plan(3, 1, EngineKind::quantum_truncated, 8);
    const SimulationResult truncated = run_simulation(plan);
    plan.engine = EngineKind::quantum_exact;
    const SimulationResult exact = run_simulation(plan);
    CHECK(test_util::phase_aligned_deviation(truncated.final_field.amplitudes,
                                             exact.final_field.amplitudes) < 1e-9);
    CHECK(truncated.report.s_v > 0.0);
    CHECK(truncated.report.s_p > 0.0);
    CHECK(truncated.report.census_truncated.total > 0);
}

TEST_CASE("norm drift stays small across 64 slices in every engine") {
    for (EngineKind engine :
         {EngineKind::classical, EngineKind::quantum_exact, EngineKind::quantum_truncated}) {
        SimulationPlan plan = gold_plan(3, 8, engine, 8);  // 64 slices
        plan.record.per_slice = false;
        const SimulationResult result = run_simulation(plan);
        CHECK(result.stats.max_norm_drift < 1e-8);
    }
}

TEST_CASE("single-slice truncation error is bounded by the dropped weight") {
    const int n = 4;
    SimulationPlan plan = gold_plan(n, 1, EngineKind::quantum_truncated, 1);

    // pick a threshold that provably drops some terms: just above the
    // smallest nonzero relative coefficient of the slice spectrum
    const PotentialStack stack =
        build_potential_slices(plan.specimen, plan.grid, plan.beam, plan.image_cutoff_cells);
    const WalshSpectrum spectrum = fwht(stack.cell_slice_phases[0]);
    double smallest = 1.0;
    for (std::uint64_t u = 1; u < spectrum.coefficients.size(); ++u) {
        const double w = std::abs(spectrum.coefficients[u]);
        if (w >= 1e-15) smallest = std::min(smallest, w / spectrum.w_max);
    }
    const double tau = std::min(0.9, smallest * 10.0);

    plan.truncation.tau_v = tau;
    const SimulationResult truncated = run_simulation(plan);
    plan.truncation.tau_v = 0.0;
    const SimulationResult exact = run_simulation(plan);

    double dropped = 0.0;
    for (std::uint64_t u = 1; u < spectrum.coefficients.size(); ++u) {
        const double w = std::abs(spectrum.coefficients[u]);
        if (w >= 1e-15 && w < tau * spectrum.w_max) dropped += w;
    }
    CHECK(dropped > 0.0);
    const double eps = relative_error(probability_grid(truncated.final_field),
                                      probability_grid(exact.final_field));
    CHECK(eps <= 2.0 * dropped + 1e-12);
}

TEST_CASE("trajectories are bit-identical across repeated runs") {
    const SimulationPlan plan = gold_plan(3, 2, EngineKind::quantum_truncated, 8);
    const SimulationResult a = run_simulation(plan);
    const SimulationResult b = run_simulation(plan);
    REQUIRE(a.slice_grids.size() == b.slice_grids.size());
    for (std::size_t t = 0; t < a.slice_grids.size(); ++t) {
        CHECK(std::memcmp(a.slice_grids[t].data(), b.slice_grids[t].data(),
                          a.slice_grids[t].size() * sizeof(double)) == 0);
    }
    CHECK(std::memcmp(a.final_field.amplitudes.data(), b.final_field.amplitudes.data(),
                      a.final_field.amplitudes.size() * sizeof(cplx)) == 0);
}

TEST_CASE("walsh preprocessing runs once per distinct operator") {
    SimulationPlan plan = gold_plan(3, 4, EngineKind::quantum_truncated, 8);
    const SimulationResult result = run_simulation(plan);
    CHECK(result.stats.kinetic_walsh_transforms == 1);  // reused across all 32 slices
    CHECK(result.stats.potential_walsh_transforms == 8);
}

TEST_CASE("cross-section recording") {
    SimulationPlan plan = gold_plan(3, 2, EngineKind::classical, 8);
    SUBCASE("auto row picks the strongest row and records every slice") {
        const SimulationResult result = run_simulation(plan);
        CHECK(result.slice_grids.size() == 16);
        CHECK(result.cross_section.size() == 16);
        CHECK(result.cross_section_row >= 0);
        const std::size_t n = plan.grid.points_per_axis;
        const std::size_t y0 = static_cast<std::size_t>(result.cross_section_row);
        for (std::size_t x = 0; x < n; ++x) {
            CHECK(result.cross_section.back()[x] ==
                  result.slice_grids.back()[y0 * n + x]);
        }
    }
    SUBCASE("fixed row works without per-slice grids") {
        plan.record.per_slice = false;
        plan.record.cross_section_row = 3;
        const SimulationResult result = run_simulation(plan);
        CHECK(result.slice_grids.empty());
        CHECK(result.cross_section.size() == 16);
        CHECK(result.cross_section_row == 3);
    }
}

TEST_CASE("plan validation happens before compute") {
    SimulationPlan plan = gold_plan(3, 1, EngineKind::classical);
    plan.truncation.tau_v = 0.5;  // classical engine cannot truncate
    CHECK_THROWS_AS(run_simulation(plan), std::invalid_argument);
    plan = gold_plan(3, 1, EngineKind::quantum_truncated);
    plan.truncation.tau_p = 1.5;
    CHECK_THROWS_AS(run_simulation(plan), std::invalid_argument);
    plan = gold_plan(3, 1, EngineKind::classical);
    plan.record.cross_section_row = 8;
    CHECK_THROWS_AS(run_simulation(plan), std::invalid_argument);
}
