// Command implementations behind the qmslice tool: experiment orchestration
// and the file outputs. Kept separate from argument parsing so tests can call
// commands directly.
#pragma once

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qms/config.hpp"
#include "qms/diagonal.hpp"
#include "qms/engine.hpp"
#include "qms/io.hpp"
#include "qms/metrics.hpp"

namespace qms {

struct CliOptions {
    std::filesystem::path outdir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> engine;
    std::optional<double> tau_v;
    bool tau_v_auto = false;  // --tau-v auto: use the 128/2^n formula
    std::optional<double> tau_p;
    int jobs = 1;
    bool dump = false;
    bool dump_fields = false;
};

namespace detail {

inline ToolkitConfig apply_overrides(ToolkitConfig cfg, const CliOptions& opts) {
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.engine) {
        if (!parse_engine(*opts.engine)) {
            throw std::runtime_error("unknown engine: " + *opts.engine);
        }
        cfg.engine = *opts.engine;
    }
    if (opts.tau_v_auto) cfg.tau_v = tau_v_formula(cfg.grid_bits);
    else if (opts.tau_v) cfg.tau_v = *opts.tau_v;
    if (opts.tau_p) cfg.tau_p = *opts.tau_p;
    return cfg;
}

inline std::filesystem::path make_run_dir(const CliOptions& opts, const std::string& command,
                                          std::uint64_t seed) {
    std::ostringstream name;
    name << command << '-' << utc_timestamp() << '-' << seed;
    std::filesystem::path dir = opts.outdir / name.str();
    for (int suffix = 2; std::filesystem::exists(dir); ++suffix) {
        dir = opts.outdir / (name.str() + "-" + std::to_string(suffix));
    }
    std::filesystem::create_directories(dir);
    return dir;
}

/// Removes partial outputs when a command fails midway.
struct RunDirGuard {
    std::filesystem::path dir;
    bool keep = false;
    ~RunDirGuard() {
        if (!keep) {
            std::error_code ec;
            std::filesystem::remove_all(dir, ec);
        }
    }
};

inline nlohmann::json census_json(const GateCensus& c) {
    return {{"one_qubit", c.one_qubit}, {"two_qubit", c.two_qubit}, {"total", c.total}};
}

}  // namespace detail

inline int cmd_run(const std::filesystem::path& config_path, const CliOptions& opts,
                   std::ostream& out = std::cout) {
    const ToolkitConfig cfg = detail::apply_overrides(load_config(config_path), opts);
    const SimulationPlan plan = to_plan(cfg);
    const std::filesystem::path dir = detail::make_run_dir(opts, "run", cfg.seed);
    detail::RunDirGuard guard{dir};

    SimulationResult result = run_simulation(plan);
    const std::size_t n_axis = plan.grid.points_per_axis;

    // Error against the classical reference of the same configuration.
    if (plan.engine != EngineKind::classical) {
        SimulationPlan ref = plan;
        ref.engine = EngineKind::classical;
        ref.truncation = Truncation{};
        ref.record.per_slice = false;
        ref.record.cross_section_row = -1;
        const SimulationResult reference = run_simulation(ref);
        result.report.epsilon = relative_error(probability_grid(result.final_field),
                                               probability_grid(reference.final_field));
        if (plan.engine == EngineKind::quantum_truncated) {
            result.report.census_untruncated = gate_report(plan).untruncated;
        }
    }

    write_csv_matrix(dir / "final_grid.csv", probability_grid(result.final_field), n_axis,
                     n_axis);
    if (!result.slice_grids.empty()) {
        std::filesystem::create_directories(dir / "trajectory");
        for (std::size_t t = 0; t < result.slice_grids.size(); ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "slice_%04zu.csv", t);
            write_csv_matrix(dir / "trajectory" / name, result.slice_grids[t], n_axis, n_axis);
        }
    }
    if (!result.cross_section.empty()) {
        std::vector<double> image;
        image.reserve(result.cross_section.size() * n_axis);
        for (const auto& row : result.cross_section) {
            image.insert(image.end(), row.begin(), row.end());
        }
        write_csv_matrix(dir / "cross_section.csv", image, result.cross_section.size(), n_axis);
        write_pgm(dir / "cross_section.pgm", image, result.cross_section.size(), n_axis);
    }
    if (opts.dump_fields) {
        PotentialStack stack =
            build_potential_slices(plan.specimen, plan.grid, plan.beam, plan.image_cutoff_cells);
        stack.propagator_phase = build_propagator(plan.grid, plan.beam, stack.slice_thickness);
        std::filesystem::create_directories(dir / "fields");
        for (std::size_t t = 0; t < stack.cell_slice_phases.size(); ++t) {
            char name[32];
            std::snprintf(name, sizeof name, "slice_phase_%02zu.csv", t);
            write_csv_matrix(dir / "fields" / name, stack.cell_slice_phases[t], n_axis, n_axis);
        }
        write_csv_matrix(dir / "fields" / "propagator_phase.csv", stack.propagator_phase,
                         n_axis, n_axis);
    }

    nlohmann::json report;
    report["engine"] = engine_name(plan.engine);
    report["epsilon_vs_classical"] = result.report.epsilon;
    report["tau_v"] = plan.truncation.tau_v;
    report["tau_p"] = plan.truncation.tau_p;
    report["s_v"] = result.report.s_v;
    report["s_p"] = result.report.s_p;
    report["census_truncated"] = detail::census_json(result.report.census_truncated);
    report["census_untruncated"] = detail::census_json(result.report.census_untruncated);
    report["max_norm_drift"] = result.stats.max_norm_drift;
    report["kinetic_walsh_transforms"] = result.stats.kinetic_walsh_transforms;
    report["potential_walsh_transforms"] = result.stats.potential_walsh_transforms;
    report["cross_section_row"] = result.cross_section_row;
    report["slice_count"] = plan.specimen.slice_count();
    write_json(dir / "error_report.json", report);
    write_json(dir / "manifest.json", make_manifest(cfg, "run", cfg.seed));

    out << "run: wrote " << dir.string() << "\n"
        << "  engine " << engine_name(plan.engine) << ", " << plan.specimen.slice_count()
        << " slices, norm drift " << format_double(result.stats.max_norm_drift) << "\n";
    if (plan.engine != EngineKind::classical) {
        out << "  epsilon vs classical " << format_double(result.report.epsilon) << "\n";
    }
    guard.keep = true;
    return 0;
}

inline int cmd_sweep(const std::filesystem::path& config_path, const CliOptions& opts,
                     SweepVariable vary, const std::vector<double>& taus,
                     std::ostream& out = std::cout) {
    ToolkitConfig cfg = detail::apply_overrides(load_config(config_path), opts);
    cfg.engine = "quantum-truncated";  // sweeps exercise the truncated engine
    SimulationPlan plan = to_plan(cfg);
    const std::filesystem::path dir = detail::make_run_dir(opts, "sweep", cfg.seed);
    detail::RunDirGuard guard{dir};

    const std::vector<SweepRow> rows = truncation_sweep(plan, taus, vary, opts.jobs);

    std::ostringstream csv;
    csv << "tau,epsilon,s,one_qubit_gates,two_qubit_gates\n";
    for (const SweepRow& row : rows) {
        csv << format_double(row.tau) << ',' << format_double(row.epsilon) << ','
            << format_double(row.s) << ',' << row.census.one_qubit << ',' << row.census.two_qubit
            << '\n';
    }
    atomic_write(dir / "sweep.csv", csv.str());
    write_json(dir / "manifest.json", make_manifest(cfg, "sweep", cfg.seed));

    out << "sweep: wrote " << (dir / "sweep.csv").string() << " ("
        << (vary == SweepVariable::potential ? "potential" : "kinetic") << ", " << rows.size()
        << " thresholds)\n";
    guard.keep = true;
    return 0;
}

inline int cmd_gates(const std::filesystem::path& config_path, const CliOptions& opts,
                     std::ostream& out = std::cout) {
    const ToolkitConfig cfg = detail::apply_overrides(load_config(config_path), opts);
    const SimulationPlan plan = to_plan(cfg);
    const std::filesystem::path dir = detail::make_run_dir(opts, "gates", cfg.seed);
    detail::RunDirGuard guard{dir};

    const GateReport report = gate_report(plan);

    nlohmann::json j;
    j["untruncated"] = detail::census_json(report.untruncated);
    j["truncated"] = detail::census_json(report.truncated);
    j["reduction_ratio"] = report.ratio;
    j["tau_v"] = tau_v_formula(plan.grid.bits_per_axis);
    j["tau_p"] = 1e-10;
    j["s_v_untruncated"] = report.s_v_untruncated;
    j["s_v_truncated"] = report.s_v_truncated;
    j["s_p_untruncated"] = report.s_p_untruncated;
    j["s_p_truncated"] = report.s_p_truncated;
    write_json(dir / "gate_report.json", j);

    if (opts.dump) {
        std::filesystem::create_directories(dir / "circuits");
        PotentialStack stack =
            build_potential_slices(plan.specimen, plan.grid, plan.beam, plan.image_cutoff_cells);
        stack.propagator_phase = build_propagator(plan.grid, plan.beam, stack.slice_thickness);
        const int m = plan.grid.qubit_count();
        const double tau_v = tau_v_formula(plan.grid.bits_per_axis);

        auto dump_circuit = [&](const std::string& name, const Circuit& c) {
            std::ostringstream text;
            write_circuit_text(c, text);
            atomic_write(dir / "circuits" / name, text.str());
        };
        auto dump_terms = [&](const std::string& name, const KeptTermSequence& terms) {
            std::ostringstream text;
            dump_kept_terms(terms, text);
            atomic_write(dir / "circuits" / name, text.str());
        };

        dump_circuit("forward.txt", build_2d_transform(plan.grid.bits_per_axis,
                                                       FourierDirection::forward));
        dump_circuit("inverse.txt", build_2d_transform(plan.grid.bits_per_axis,
                                                       FourierDirection::inverse));
        const KeptTermSequence p_terms = truncate(
            walsh_decompose(DiagonalSpec(stack.propagator_phase)), TruncationPolicy(1e-10));
        dump_circuit("kinetic.txt", build_phase_circuit(p_terms, m));
        dump_terms("kinetic_terms.csv", p_terms);
        for (std::size_t t = 0; t < stack.cell_slice_phases.size(); ++t) {
            const KeptTermSequence v_terms =
                truncate(walsh_decompose(DiagonalSpec(stack.cell_slice_phases[t])),
                         TruncationPolicy(tau_v));
            char name[48];
            std::snprintf(name, sizeof name, "potential_%02zu.txt", t);
            dump_circuit(name, build_phase_circuit(v_terms, m));
            std::snprintf(name, sizeof name, "potential_terms_%02zu.csv", t);
            dump_terms(name, v_terms);
        }
    }
    write_json(dir / "manifest.json", make_manifest(cfg, "gates", cfg.seed));

    out << "gates: untruncated " << report.untruncated.total << " (1q "
        << report.untruncated.one_qubit << ", 2q " << report.untruncated.two_qubit
        << "), truncated " << report.truncated.total << " (1q " << report.truncated.one_qubit
        << ", 2q " << report.truncated.two_qubit << "), ratio "
        << format_double(report.ratio) << "\n"
        << "gates: wrote " << dir.string() << "\n";
    guard.keep = true;
    return 0;
}

inline int cmd_sample(const std::filesystem::path& config_path, const CliOptions& opts,
                      std::size_t shots, Representation representation,
                      std::ostream& out = std::cout) {
    if (shots < 1) throw std::runtime_error("sample: shots must be >= 1");
    ToolkitConfig cfg = detail::apply_overrides(load_config(config_path), opts);
    cfg.record_per_slice = false;
    cfg.cross_section_row = -1;
    const SimulationPlan plan = to_plan(cfg);
    const std::filesystem::path dir = detail::make_run_dir(opts, "sample", cfg.seed);
    detail::RunDirGuard guard{dir};

    const SimulationResult result = run_simulation(plan);
    WaveField field = result.final_field;
    if (representation == Representation::momentum) {
        fft_2d_inplace(field.amplitudes, field.axis_points, false);
        field.representation = Representation::momentum;
    }
    const StateVector state = to_state_vector(field);
    const std::vector<std::uint64_t> counts = measure_sample(state, shots, cfg.seed);

    const std::size_t n_axis = field.axis_points;
    std::ostringstream csv;
    csv << "index,x,y,count\n";
    for (std::size_t r = 0; r < counts.size(); ++r) {
        const auto [x, y] = unpack_index(r, n_axis);
        csv << r << ',' << x << ',' << y << ',' << counts[r] << '\n';
    }
    atomic_write(dir / "histogram.csv", csv.str());
    write_json(dir / "manifest.json", make_manifest(cfg, "sample", cfg.seed));

    out << "sample: " << shots << " shots ("
        << (representation == Representation::momentum ? "momentum" : "coordinate")
        << "), wrote " << (dir / "histogram.csv").string() << "\n";
    guard.keep = true;
    return 0;
}

inline int cmd_validate(const std::filesystem::path& config_path,
                        std::ostream& out = std::cout) {
    ConfigDiagnostics diag;
    const auto cfg = parse_config(config_path, diag);
    if (!cfg) {
        out << "config " << config_path.string() << " is not runnable:\n";
        for (const auto& e : diag.errors) out << "  - " << e << "\n";
        return 1;
    }
    const BeamParams beam = beam_params(cfg->voltage);
    const FieldGrid grid = grid_for_specimen(cfg->grid_bits, cfg->specimen);
    const double d = cfg->specimen.slice_thickness();
    const double d_p = cfg->potential_spread > 0.0 ? cfg->potential_spread : d;
    const ThicknessReport thickness =
        check_slice_thickness(d, d_p, beam, cfg->max_slice_thickness);

    out << "config " << config_path.string() << " is runnable\n"
        << "  engine              " << cfg->engine << "\n"
        << "  voltage             " << format_double(cfg->voltage) << " V\n"
        << "  wavelength          " << format_double(beam.wavelength) << " A\n"
        << "  mass ratio          " << format_double(beam.mass_ratio) << "\n"
        << "  sigma               " << format_double(beam.sigma) << " rad/(V A)\n"
        << "  wavenumber          " << format_double(beam.wavenumber) << " 1/A\n"
        << "  grid                " << grid.points_per_axis << " x " << grid.points_per_axis
        << " over " << format_double(grid.extent_x) << " x " << format_double(grid.extent_y)
        << " A\n"
        << "  pixel size          " << format_double(grid.pixel_size_x()) << " A\n"
        << "  slice thickness     " << format_double(d) << " A, " << cfg->specimen.slice_count()
        << " slices\n"
        << "  truncation          tau_v " << format_double(cfg->tau_v) << ", tau_p "
        << format_double(cfg->tau_p) << "\n"
        << "  " << (thickness.warning ? "WARNING: " : "") << thickness.message << "\n";
    return 0;
}

}  // namespace qms
