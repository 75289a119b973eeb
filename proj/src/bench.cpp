#include "kaf/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "kaf/errors.hpp"
#include "kaf/experiments.hpp"
#include "kaf/random.hpp"

namespace kaf {

namespace {

constexpr std::size_t kInputDim = 3;

Sample draw(Rng& rng) {
    Sample s;
    s.u.resize(kInputDim);
    for (auto& v : s.u) v = rng.uniform(-100.0, 100.0);
    s.d = rng.normal();
    return s;
}

double quantile(std::vector<double> sorted, double q) {
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace

double loglog_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size() || xs.size() < 2) throw ValidationError("slope fit needs at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

BenchResult bench(FilterKind kind, const std::vector<std::size_t>& sizes, BenchOptions options) {
    if (sizes.size() < 2) throw ValidationError("bench needs at least two sizes", "sizes");
    if (options.reps == 0) throw ValidationError("bench needs reps >= 1", "reps");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] == 0) throw ValidationError("bench sizes must be positive", "sizes");
        if (i > 0 && sizes[i] < sizes[i - 1] + options.reps) {
            throw ValidationError("bench sizes must increase by at least reps", "sizes");
        }
    }

    FilterConfig config;
    config.kind = kind;
    config.kernel = KernelSpec::gaussian(1.0);
    config.delta = 0.5;
    config.lambda = 0.1;
    config.eta = kind == FilterKind::lms ? 1e-4 : 0.2;

    Rng rng(options.seed);
    OnlineFilter filter(config, kInputDim);
    const bool linear = kind == FilterKind::lms || kind == FilterKind::rls;
    std::size_t steps = 0;
    auto size_of = [&] { return linear ? steps : filter.size(); };

    BenchResult result;
    result.filter = kind;
    for (std::size_t target : sizes) {
        while (size_of() < target) {
            const Sample s = draw(rng);
            filter.step(s.u, s.d);
            ++steps;
        }
        std::vector<double> times;
        times.reserve(options.reps);
        for (std::size_t r = 0; r < options.reps; ++r) {
            const Sample s = draw(rng);
            const auto t0 = std::chrono::steady_clock::now();
            filter.step(s.u, s.d);
            times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
            ++steps;
        }
        std::sort(times.begin(), times.end());
        BenchPoint p;
        p.size = target;
        p.median_seconds = quantile(times, 0.5);
        p.rel_iqr = p.median_seconds > 0.0 ? (quantile(times, 0.75) - quantile(times, 0.25)) / p.median_seconds : 0.0;
        p.unstable = p.rel_iqr > 0.5;
        result.points.push_back(p);
    }

    std::vector<double> xs, ys;
    for (const auto& p : result.points) {
        xs.push_back(static_cast<double>(p.size));
        ys.push_back(std::max(p.median_seconds, 1e-12));
    }
    result.slope = loglog_slope(xs, ys);
    return result;
}

nlohmann::json to_json(const BenchResult& r) {
    nlohmann::json points = nlohmann::json::array();
    for (const auto& p : r.points) {
        points.push_back({{"size", p.size},
                          {"median_seconds", p.median_seconds},
                          {"rel_iqr", p.rel_iqr},
                          {"unstable", p.unstable}});
    }
    return {{"filter", to_string(r.filter)}, {"slope", r.slope}, {"points", points}};
}

}  // namespace kaf
