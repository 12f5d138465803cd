// spdiff: batch front end for the diffraction-phase toolkit.
//
// Subcommands: rabi, resonance-scan, phase-budget, chirp-sweep,
// validate-config. Each experiment reads a strict-schema JSON config (or a
// previously emitted metadata sidecar), runs its sweep on a worker pool
// (capped by SPDIFF_THREADS), and writes an RFC-4180 CSV plus a JSON
// metadata sidecar under --out-dir. Exit code 0 only if all regime guards
// passed (or guards are soft and not in --strict mode).

#include "spdiff/experiments.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

using namespace spdiff;

namespace {

struct CommonArgs {
    std::string config_path;
    std::string engine;
    RunOptions opt;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--config", a.config_path, "scenario config JSON (or sidecar)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_flag("--strict", a.opt.strict, "turn soft regime guards into hard errors");
    cmd->add_option("--engine", a.engine, "engine override: analytic|oracle|both")
        ->check(CLI::IsMember({"analytic", "oracle", "both"}));
    cmd->add_option("--out-dir", a.opt.out_dir, "output directory")
        ->default_val(".");
    cmd->add_option("--seed", a.opt.seed, "seed for randomized property sweeps")
        ->default_val(0);
    cmd->add_flag("--snapshot", a.opt.snapshot, "write a regression baseline snapshot");
}

int run_one(const CommonArgs& a, const std::string& name,
            RunResult (*fn)(const ScenarioConfig&, const RunOptions&)) {
    try {
        ScenarioConfig cfg = load_config(a.config_path);
        CommonArgs args = a;
        if (!a.engine.empty()) {
            args.opt.has_engine_override = true;
            args.opt.engine_override = a.engine == "analytic" ? Engine::analytic
                                     : a.engine == "oracle" ? Engine::oracle
                                                            : Engine::both;
        }
        const RunResult r = fn(cfg, args.opt);
        write_outputs(r, args.opt.out_dir, name);
        std::cout << name << ": wrote " << r.table.rows.size() << " rows to "
                  << args.opt.out_dir << "/" << name << ".csv\n";
        if (!r.guards_ok) {
            std::cerr << name << ": soft guard violations (see sidecar)\n";
            return 2;
        }
        return 0;
    } catch (const std::exception& e) {
        std::cerr << name << ": error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"atomic diffraction phase toolkit"};
    app.require_subcommand(1);

    CommonArgs rabi_a, scan_a, budget_a, chirp_a;
    std::string validate_path;

    add_common(app.add_subcommand("rabi", "transfer vs time and detuning"), rabi_a);
    add_common(app.add_subcommand("resonance-scan", "oracle scan of omega_L"), scan_a);
    add_common(app.add_subcommand("phase-budget", "per-channel mirror phase budget"),
               budget_a);
    add_common(app.add_subcommand("chirp-sweep", "sweep alpha around -g"), chirp_a);
    auto* validate = app.add_subcommand("validate-config", "parse and guard-check only");
    validate->add_option("--config", validate_path, "scenario config JSON")
        ->required()
        ->check(CLI::ExistingFile);
    bool validate_strict = false;
    validate->add_flag("--strict", validate_strict, "hard-fail on guard violations");

    CLI11_PARSE(app, argc, argv);

    if (app.got_subcommand("rabi"))
        return run_one(rabi_a, "rabi", &run_rabi);
    if (app.got_subcommand("resonance-scan"))
        return run_one(scan_a, "resonance_scan", &run_resonance_scan);
    if (app.got_subcommand("phase-budget"))
        return run_one(budget_a, "phase_budget", &run_phase_budget);
    if (app.got_subcommand("chirp-sweep"))
        return run_one(chirp_a, "chirp_sweep", &run_chirp_sweep);
    if (app.got_subcommand("validate-config")) {
        try {
            ScenarioConfig cfg = load_config(validate_path);
            const auto guards = evaluate_guards(cfg, validate_strict);
            bool ok = true;
            for (const auto& g : guards) {
                std::cout << (g.ok ? "[ok]   " : "[WARN] ") << g.name;
                if (!g.ok) std::cout << ": " << g.message;
                std::cout << "\n";
                ok = ok && g.ok;
            }
            std::cout << "config valid (" << guards.size() << " guards checked)\n";
            return ok ? 0 : 2;
        } catch (const std::exception& e) {
            std::cerr << "validate-config: error: " << e.what() << "\n";
            return 1;
        }
    }
    return 1;
}
