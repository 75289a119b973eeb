#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kaf/matrix.hpp"
#include "kaf/online.hpp"

namespace kaf {

// Synthetic streams. x is the scalar driving sequence; the input at time t
// is the tapped delay line u(t) = [x(t), x(t-1), ..., x(t-L+1)].
//
//   nonlinear_sysid    x ~ N(0,1) iid;  d = tanh(0.5 x(t) + 0.3 x(t-1) x(t-2)) + noise
//   noisy_sinc         x ~ U(-3,3) iid; d = sinc(x(t)) + noise, sinc(x) = sin(pi x)/(pi x)
//   mackey_glass_like  x(t+1) = x(t) + 0.2 x(t-17) / (1 + x(t-17)^10) - 0.1 x(t),
//                      history 1.2 + U(-0.1,0.1), 1000 steps discarded;
//                      one-step-ahead prediction: u = [x(t-1), ..., x(t-L)], d = x(t) + noise
//   linear_plant       x ~ N(0,1) iid;  d = sum_i (-0.5)^i u_i + noise
//
// noise ~ N(0, noise_std^2). A csv stream reads rows "u_1,...,u_L,d".
enum class Generator { nonlinear_sysid, noisy_sinc, mackey_glass_like, linear_plant, csv };

const char* to_string(Generator g);
Generator parse_generator(const std::string& name);

struct StreamConfig {
    Generator generator = Generator::nonlinear_sysid;
    std::size_t length = 1000;  // number of (u, d) samples produced
    double noise_std = 0.1;
    std::uint64_t seed = 1;
    std::size_t embed_L = 3;
    std::string path;  // csv only

    void validate() const;
};

void to_json(nlohmann::json& j, const StreamConfig& c);
void from_json(const nlohmann::json& j, StreamConfig& c);

struct Sample {
    Vector u;
    double d = 0.0;
};

using Stream = std::vector<Sample>;

// Deterministic in the config (seed included).
Stream generate(const StreamConfig& config);

Stream read_csv_stream(const std::string& path, std::size_t input_dim);

double sinc(double x);

struct CurveRecord {
    std::size_t n = 0;
    double y = 0.0;
    double d = 0.0;
    double e = 0.0;
    double e2 = 0.0;
    double dict_size = 0.0;  // fractional only in averaged curves
    double step_seconds = 0.0;
};

struct LearningCurve {
    std::vector<CurveRecord> records;
};

// Mean of e^2 over the final `window` records.
double steady_state_mse(const LearningCurve& curve, std::size_t window);

// Default window: the final 10% of the curve (at least one record).
std::size_t default_window(std::size_t length);

// First n from which the trailing moving MSE (over `trailing` records) stays
// within `tolerance` (relative) of the steady-state MSE for the rest of the
// curve. nullopt if it never settles.
std::optional<std::size_t> convergence_step(const LearningCurve& curve, std::size_t window,
                                            std::size_t trailing = 100, double tolerance = 0.1);

struct TrialSummary {
    double steady_state_mse = 0.0;
    std::optional<std::size_t> convergence_step;
    double final_dict_size = 0.0;
    double total_seconds = 0.0;
    std::size_t samples = 0;
};

struct ConvergenceRule {
    std::size_t trailing = 100;
    double tolerance = 0.1;
};

TrialSummary summarize(const LearningCurve& curve, std::optional<std::size_t> window = std::nullopt,
                       ConvergenceRule rule = {});
nlohmann::json to_json(const TrialSummary& s);

struct TrialOptions {
    bool timing = false;  // record wall time per step; off keeps output byte-reproducible
    bool parallel = true;  // run_trials: spread trials over the worker pool
};

// Feeds the stream through a fresh filter. Filter errors are rethrown with
// the failing step index in the message.
LearningCurve run_trial(const FilterConfig& filter, const Stream& stream, TrialOptions options = {},
                        nlohmann::json* final_snapshot = nullptr);
LearningCurve run_trial(const FilterConfig& filter, const StreamConfig& stream, TrialOptions options = {},
                        nlohmann::json* final_snapshot = nullptr);

// Trial t uses seed stream.seed + t. Runs on the worker pool; results come
// back in trial order.
std::vector<LearningCurve> run_trials(const FilterConfig& filter, const StreamConfig& stream, std::size_t trials,
                                      TrialOptions options = {}, nlohmann::json* first_snapshot = nullptr);

// Pointwise mean over curves of equal length.
LearningCurve average_curves(const std::vector<LearningCurve>& curves);

// "n,y,d,e,e2,dict_size,step_seconds", curves one after another, 17
// significant digits.
void write_curves_csv(std::ostream& os, const std::vector<LearningCurve>& curves);

// printf("%.17g")
std::string format_double(double v);

// Worker count from KAF_THREADS, else the hardware concurrency (>= 1).
std::size_t worker_count();

// Calls fn(i) for i in [0, count) on up to worker_count() threads. The
// first exception (lowest index) is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace kaf
