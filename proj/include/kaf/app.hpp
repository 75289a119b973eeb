#pragma once

// Configuration and drivers behind the `run` and `sweep` commands.
//
// Run config (JSON):
//   {"filter": {"type": "krls-ald-reg" | "klms" | "lms" | "rls",
//               "kernel": {"family", "sigma", "degree"},
//               "lambda", "delta", "eta", "unregularized", "max_centers"},
//    "stream": {"generator", "length", "noise_std", "seed", "embed_L", "path"},
//    "trials": 1, "window": null, "timing": false, "out": "kaf_out",
//    "convergence": {"trailing": 100, "tolerance": 0.1}}
//
// A sweep config adds "grid": {"delta": [...], "lambda": [...],
// "sigma": [...], "eta": [...]}; missing axes keep the base value.
//
// Missing fields take the defaults above (filter: lambda 0.1, delta 0.01,
// eta 0.2, gaussian sigma 1). Command-line overrides win over the file.

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kaf/errors.hpp"
#include "kaf/experiments.hpp"

namespace kaf {

struct RunConfig {
    FilterConfig filter;
    StreamConfig stream;
    std::size_t trials = 1;
    std::optional<std::size_t> window;  // steady-state window; default final 10%
    ConvergenceRule convergence;
    bool timing = false;
    std::string out = "kaf_out";

    void validate() const;
};

struct Overrides {
    std::optional<double> delta, lambda, sigma, eta;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> trials;
    std::optional<bool> timing;
};

RunConfig parse_run_config(const nlohmann::json& j);
void apply_overrides(RunConfig& config, const Overrides& overrides);

nlohmann::json read_json_file(const std::string& path);

// Writes curves.csv (trials one after another), mean_curve.csv, summary.json
// and model.json (final model of the first trial) into config.out. On any
// failure nothing is left behind. Returns the summary document.
nlohmann::json execute_run(const RunConfig& config);

struct SweepConfig {
    RunConfig base;
    std::vector<double> delta, lambda, sigma, eta;

    // Cartesian product in (delta, lambda, sigma, eta) order.
    std::vector<FilterConfig> points() const;
};

SweepConfig parse_sweep_config(const nlohmann::json& j);

// One row per grid point, computed in parallel and written in grid order to
// sweep.csv and sweep.json. A failing point records its error and the sweep
// continues.
nlohmann::json execute_sweep(const SweepConfig& config);

// {"error": {"kind", "message", "field"}}
nlohmann::json error_json(const Error& e);

}  // namespace kaf
