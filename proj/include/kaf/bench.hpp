#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "kaf/online.hpp"

namespace kaf {

struct BenchPoint {
    std::size_t size = 0;  // dictionary size (KRLS), expansion length (KLMS), step index (linear)
    double median_seconds = 0.0;
    double rel_iqr = 0.0;
    bool unstable = false;  // rel_iqr > 0.5
};

struct BenchResult {
    FilterKind filter = FilterKind::krls_ald_reg;
    std::vector<BenchPoint> points;
    double slope = 0.0;  // least-squares slope of log(median) against log(size)
};

struct BenchOptions {
    std::size_t reps = 21;  // timed steps per size
    std::uint64_t seed = 7;
};

// Per-step wall time as a function of model size. The input stream is
// spread so widely relative to the Gaussian width (inputs in [-100,100]^3,
// sigma = 1, delta = 0.5) that every KRLS sample is admitted; each timed
// KRLS step therefore grows the dictionary by one. Sizes must be strictly
// increasing and at least `reps` apart.
BenchResult bench(FilterKind filter, const std::vector<std::size_t>& sizes, BenchOptions options = {});

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys);

nlohmann::json to_json(const BenchResult& r);

}  // namespace kaf
