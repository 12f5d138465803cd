#pragma once

// The four canonical batch experiments behind the CLI subcommands. Sweep
// points are dispatched to a worker pool (size capped by SPDIFF_THREADS);
// results are collected in deterministic sweep order.

#include "spdiff/config.hpp"
#include "spdiff/table.hpp"

#include <cstdint>
#include <functional>

namespace spdiff {

struct RunOptions {
    bool strict = false;
    Engine engine_override = Engine::both;
    bool has_engine_override = false;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool snapshot = false;
};

// Transfer probability vs time and vs detuning (two tables merged on an
// "axis" column), analytic and oracle columns side by side.
RunResult run_rabi(const ScenarioConfig& cfg, const RunOptions& opt);

// Scan omega_L and report oracle transfer plus the analytic resonance line.
RunResult run_resonance_scan(const ScenarioConfig& cfg, const RunOptions& opt);

// Per-channel budget lines, oracle comparison, ratio column, linearity
// doubling columns.
RunResult run_phase_budget(const ScenarioConfig& cfg, const RunOptions& opt);

// Sweep alpha around -g; report nu^(3), the sigma-dependent wave-vector
// terms, and the residual detuning slope.
RunResult run_chirp_sweep(const ScenarioConfig& cfg, const RunOptions& opt);

// Worker pool helper: evaluates fn(i) for i in [0,n) on up to SPDIFF_THREADS
// workers (default: hardware concurrency); completion is synchronous.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace spdiff
