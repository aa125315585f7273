// Experiment configuration: JSON schema, validation diagnostics, resolution
// into a SimulationPlan, and the run manifest that makes runs repeatable.
#pragma once

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "qms/engine.hpp"
#include "qms/io.hpp"
#include "qms/metrics.hpp"
#include "qms/version.hpp"

namespace qms {

inline constexpr const char* kRngName = "mt19937_64/inverse-cdf-53bit";

struct ToolkitConfig {
    double voltage = 100000.0;  // V
    int grid_bits = 6;
    std::string engine = "classical";
    Specimen specimen;
    double tau_v = 0.0;
    double tau_p = 0.0;
    int cross_section_row = -1;
    bool record_per_slice = true;
    double image_cutoff_cells = 3.0;
    double max_slice_thickness = 1.0;   // advisory criterion scale, Angstrom
    double potential_spread = 0.0;      // d_p; 0 means "use the slice thickness"
    std::uint64_t seed = 1;

    std::filesystem::path config_path;
    std::map<std::string, std::string> input_digests;
};

struct ConfigDiagnostics {
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

inline std::optional<EngineKind> parse_engine(const std::string& name) {
    if (name == "classical") return EngineKind::classical;
    if (name == "quantum-exact") return EngineKind::quantum_exact;
    if (name == "quantum-truncated") return EngineKind::quantum_truncated;
    return std::nullopt;
}

namespace detail {

template <typename T>
bool fetch(const nlohmann::json& j, const std::string& key, T& out,
           ConfigDiagnostics& diag, bool required) {
    if (!j.contains(key)) {
        if (required) diag.errors.push_back("missing field: " + key);
        return false;
    }
    try {
        out = j.at(key).get<T>();
        return true;
    } catch (const std::exception&) {
        diag.errors.push_back("field has wrong type: " + key);
        return false;
    }
}

}  // namespace detail

/// Parses and cross-checks a config file, collecting every problem instead of
/// stopping at the first. Returns the resolved config only when clean.
inline std::optional<ToolkitConfig> parse_config(const std::filesystem::path& path,
                                                 ConfigDiagnostics& diag) {
    std::ifstream in(path);
    if (!in) {
        diag.errors.push_back("cannot open config file: " + path.string());
        return std::nullopt;
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        diag.errors.push_back(std::string("config is not valid JSON: ") + e.what());
        return std::nullopt;
    }

    ToolkitConfig cfg;
    cfg.config_path = path;
    cfg.input_digests["config"] = fnv1a64_file(path);

    detail::fetch(j, "voltage", cfg.voltage, diag, true);
    if (!(cfg.voltage > 0.0)) diag.errors.push_back("voltage must be positive");
    detail::fetch(j, "grid_bits", cfg.grid_bits, diag, true);
    if (cfg.grid_bits < 1 || 2 * cfg.grid_bits > kMaxQubits) {
        diag.errors.push_back("grid_bits outside supported range");
    }
    detail::fetch(j, "engine", cfg.engine, diag, false);
    if (!parse_engine(cfg.engine)) {
        diag.errors.push_back("engine must be classical, quantum-exact or quantum-truncated");
    }
    detail::fetch(j, "seed", cfg.seed, diag, false);
    detail::fetch(j, "image_cutoff_cells", cfg.image_cutoff_cells, diag, false);
    if (cfg.image_cutoff_cells < 1.0) {
        diag.errors.push_back("image_cutoff_cells must be at least 1 lattice constant");
    }
    detail::fetch(j, "max_slice_thickness", cfg.max_slice_thickness, diag, false);
    detail::fetch(j, "potential_spread_distance", cfg.potential_spread, diag, false);

    if (j.contains("truncation")) {
        const auto& t = j.at("truncation");
        detail::fetch(t, "tau_v", cfg.tau_v, diag, false);
        detail::fetch(t, "tau_p", cfg.tau_p, diag, false);
        for (double tau : {cfg.tau_v, cfg.tau_p}) {
            if (!(tau >= 0.0 && tau < 1.0)) {
                diag.errors.push_back("truncation thresholds must lie in [0, 1)");
                break;
            }
        }
    }
    if (j.contains("record")) {
        const auto& r = j.at("record");
        detail::fetch(r, "cross_section_row", cfg.cross_section_row, diag, false);
        detail::fetch(r, "per_slice", cfg.record_per_slice, diag, false);
    }

    if (!j.contains("specimen")) {
        diag.errors.push_back("missing field: specimen");
        return diag.ok() ? std::optional<ToolkitConfig>(cfg) : std::nullopt;
    }
    const auto& sp = j.at("specimen");
    detail::fetch(sp, "lattice_constant", cfg.specimen.lattice_constant, diag, true);
    if (!(cfg.specimen.lattice_constant > 0.0)) {
        diag.errors.push_back("specimen.lattice_constant must be positive");
    }
    detail::fetch(sp, "slices_per_cell", cfg.specimen.slices_per_cell, diag, true);
    if (cfg.specimen.slices_per_cell < 1) {
        diag.errors.push_back("specimen.slices_per_cell must be >= 1");
    }
    std::vector<int> cells;
    if (detail::fetch(sp, "cells", cells, diag, true)) {
        if (cells.size() != 3) {
            diag.errors.push_back("specimen.cells must have 3 entries");
        } else {
            cfg.specimen.cells = {cells[0], cells[1], cells[2]};
            if (cells[0] < 1 || cells[1] < 1 || cells[2] < 0) {
                diag.errors.push_back("specimen.cells must be >= 1 transversely and >= 0 deep");
            }
        }
    }

    std::map<std::string, AtomSpecies> species_table;
    if (sp.contains("species_files")) {
        for (const auto& [label, rel] : sp.at("species_files").items()) {
            const std::filesystem::path species_path =
                path.parent_path() / rel.get<std::string>();
            try {
                species_table[label] = load_species(species_path.string());
                cfg.input_digests["species:" + label] = fnv1a64_file(species_path);
            } catch (const std::exception& e) {
                diag.errors.push_back("species file '" + label + "': " + e.what());
            }
        }
    } else {
        diag.errors.push_back("missing field: specimen.species_files");
    }

    if (!sp.contains("basis") || !sp.at("basis").is_array() || sp.at("basis").empty()) {
        diag.errors.push_back("specimen.basis must be a non-empty array");
    } else {
        for (const auto& entry : sp.at("basis")) {
            BasisAtom atom;
            std::vector<double> pos;
            std::string label;
            ConfigDiagnostics local;
            detail::fetch(entry, "position", pos, local, true);
            detail::fetch(entry, "species", label, local, true);
            if (!local.ok() || pos.size() != 3) {
                diag.errors.push_back("specimen.basis entries need position[3] and species");
                continue;
            }
            atom.fx = pos[0];
            atom.fy = pos[1];
            atom.fz = pos[2];
            for (double f : pos) {
                if (!(f >= 0.0 && f < 1.0)) {
                    diag.errors.push_back("specimen.basis position must lie in [0, 1)");
                    break;
                }
            }
            auto it = species_table.find(label);
            if (it == species_table.end()) {
                diag.errors.push_back("specimen.basis references unknown species: " + label);
                continue;
            }
            atom.species = it->second;
            cfg.specimen.basis.push_back(atom);
        }
    }

    if (!diag.ok()) return std::nullopt;
    return cfg;
}

inline ToolkitConfig load_config(const std::filesystem::path& path) {
    ConfigDiagnostics diag;
    auto cfg = parse_config(path, diag);
    if (!cfg) {
        std::string message = "invalid config " + path.string() + ":";
        for (const auto& e : diag.errors) message += "\n  - " + e;
        throw std::runtime_error(message);
    }
    return *cfg;
}

inline SimulationPlan to_plan(const ToolkitConfig& cfg) {
    SimulationPlan plan{
        cfg.specimen,
        grid_for_specimen(cfg.grid_bits, cfg.specimen),
        beam_params(cfg.voltage),
        *parse_engine(cfg.engine),
        Truncation{cfg.tau_v, cfg.tau_p},
        RecordOptions{cfg.cross_section_row, cfg.record_per_slice},
        cfg.seed,
        cfg.image_cutoff_cells,
    };
    return plan;
}

/// Fully resolved configuration echo: together with the toolkit version and
/// seed this is sufficient to re-execute the run bit-identically.
inline nlohmann::json config_echo(const ToolkitConfig& cfg) {
    nlohmann::json j;
    j["voltage"] = cfg.voltage;
    j["grid_bits"] = cfg.grid_bits;
    j["engine"] = cfg.engine;
    j["truncation"] = {{"tau_v", cfg.tau_v}, {"tau_p", cfg.tau_p}};
    j["record"] = {{"cross_section_row", cfg.cross_section_row},
                   {"per_slice", cfg.record_per_slice}};
    j["image_cutoff_cells"] = cfg.image_cutoff_cells;
    j["max_slice_thickness"] = cfg.max_slice_thickness;
    j["potential_spread_distance"] = cfg.potential_spread;
    j["seed"] = cfg.seed;
    nlohmann::json sp;
    sp["lattice_constant"] = cfg.specimen.lattice_constant;
    sp["cells"] = cfg.specimen.cells;
    sp["slices_per_cell"] = cfg.specimen.slices_per_cell;
    sp["basis"] = nlohmann::json::array();
    for (const auto& atom : cfg.specimen.basis) {
        sp["basis"].push_back({{"position", {atom.fx, atom.fy, atom.fz}},
                               {"species", atom.species.label},
                               {"a", atom.species.a},
                               {"b", atom.species.b},
                               {"debye_waller_b", atom.species.debye_waller}});
    }
    j["specimen"] = sp;
    return j;
}

inline std::string utc_timestamp() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm_utc);
    return buf;
}

inline nlohmann::json make_manifest(const ToolkitConfig& cfg, const std::string& command,
                                    std::uint64_t seed) {
    nlohmann::json m;
    m["toolkit_version"] = kVersion;
    m["command"] = command;
    m["timestamp_utc"] = utc_timestamp();
    m["seed"] = seed;
    m["rng"] = kRngName;
    m["config_file"] = cfg.config_path.string();
    m["input_digests"] = cfg.input_digests;
    m["resolved_config"] = config_echo(cfg);
    return m;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace qms
