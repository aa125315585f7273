// qmslice: multislice electron diffraction with classical FFT and
// quantum-circuit engines.
#include <cmath>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qms/cli.hpp"

namespace {

std::vector<double> parse_taus(const std::string& spec) {
    std::vector<double> taus;
    if (spec.rfind("logrange(", 0) == 0 && spec.back() == ')') {
        double lo = 0, hi = 0;
        int count = 0;
        if (std::sscanf(spec.c_str(), "logrange(%lf,%lf,%d)", &lo, &hi, &count) != 3 ||
            count < 2 || !(lo > 0.0) || !(hi > lo)) {
            throw CLI::ValidationError("--taus", "expected logrange(lo,hi,count)");
        }
        for (int i = 0; i < count; ++i) {
            taus.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1)));
        }
        return taus;
    }
    std::istringstream in(spec);
    std::string cell;
    while (std::getline(in, cell, ',')) taus.push_back(std::stod(cell));
    if (taus.empty()) throw CLI::ValidationError("--taus", "no thresholds given");
    return taus;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multislice electron diffraction simulator with quantum-circuit engines"};
    app.require_subcommand(1);

    std::string config_path;
    qms::CliOptions opts;

    auto add_common = [&](CLI::App* cmd, bool with_engine) {
        cmd->add_option("config", config_path, "JSON config file")->required();
        cmd->add_option("--outdir", opts.outdir, "output directory root");
        cmd->add_option_function<std::string>(
            "--seed", [&](const std::string& v) { opts.seed = std::stoull(v); },
            "RNG seed override");
        cmd->add_option("--jobs", opts.jobs, "parallel sweep workers")
            ->check(CLI::PositiveNumber);
        if (with_engine) {
            cmd->add_option_function<std::string>(
                "--engine", [&](const std::string& v) { opts.engine = v; },
                "classical | quantum-exact | quantum-truncated");
            cmd->add_option_function<std::string>(
                "--tau-v",
                [&](const std::string& v) {
                    if (v == "auto") opts.tau_v_auto = true;
                    else opts.tau_v = std::stod(v);
                },
                "potential threshold, or 'auto' for 128/2^n");
            cmd->add_option_function<std::string>(
                "--tau-p", [&](const std::string& v) { opts.tau_p = std::stod(v); },
                "kinetic threshold");
        }
    };

    CLI::App* run = app.add_subcommand("run", "propagate a plane wave through the specimen");
    add_common(run, true);
    run->add_flag("--dump-fields", opts.dump_fields, "also write phase fields as CSV");

    CLI::App* sweep = app.add_subcommand("sweep", "truncation threshold sweep");
    add_common(sweep, false);
    std::string vary = "potential";
    std::string taus_spec;
    sweep->add_option("--vary", vary, "potential | kinetic")
        ->check(CLI::IsMember({"potential", "kinetic"}));
    sweep->add_option("--taus", taus_spec, "comma list or logrange(lo,hi,count)")->required();

    CLI::App* gates = app.add_subcommand("gates", "gate census before and after truncation");
    add_common(gates, false);
    gates->add_flag("--dump", opts.dump, "write circuit text files and kept-term tables");

    CLI::App* sample = app.add_subcommand("sample", "projective sampling of the final state");
    add_common(sample, true);
    std::size_t shots = 5000;
    std::string representation = "momentum";
    sample->add_option("--shots", shots, "number of samples")->check(CLI::PositiveNumber);
    sample->add_option("--representation", representation, "coord | momentum")
        ->check(CLI::IsMember({"coord", "momentum"}));

    CLI::App* validate = app.add_subcommand("validate", "check a config and print derived values");
    validate->add_option("config", config_path, "JSON config file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return qms::cmd_run(config_path, opts);
        if (sweep->parsed()) {
            return qms::cmd_sweep(config_path, opts,
                                  vary == "potential" ? qms::SweepVariable::potential
                                                      : qms::SweepVariable::kinetic,
                                  parse_taus(taus_spec));
        }
        if (gates->parsed()) return qms::cmd_gates(config_path, opts);
        if (sample->parsed()) {
            return qms::cmd_sample(config_path, opts, shots,
                                   representation == "momentum"
                                       ? qms::Representation::momentum
                                       : qms::Representation::coordinate);
        }
        if (validate->parsed()) return qms::cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
