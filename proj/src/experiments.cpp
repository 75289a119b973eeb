#include "kaf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <thread>

#include "kaf/errors.hpp"
#include "kaf/random.hpp"

namespace kaf {

const char* to_string(Generator g) {
    switch (g) {
        case Generator::nonlinear_sysid: return "nonlinear_sysid";
        case Generator::noisy_sinc: return "noisy_sinc";
        case Generator::mackey_glass_like: return "mackey_glass_like";
        case Generator::linear_plant: return "linear_plant";
        case Generator::csv: return "csv";
    }
    return "unknown";
}

Generator parse_generator(const std::string& name) {
    if (name == "nonlinear_sysid") return Generator::nonlinear_sysid;
    if (name == "noisy_sinc") return Generator::noisy_sinc;
    if (name == "mackey_glass_like") return Generator::mackey_glass_like;
    if (name == "linear_plant") return Generator::linear_plant;
    if (name == "csv") return Generator::csv;
    throw ValidationError("unknown generator '" + name + "'", "stream.generator");
}

void StreamConfig::validate() const {
    if (embed_L < 1) throw ValidationError("stream: embed_L must be >= 1", "stream.embed_L");
    if (generator == Generator::csv) {
        if (path.empty()) throw ValidationError("stream: csv generator needs a path", "stream.path");
        return;
    }
    if (length <= embed_L) {
        throw ValidationError("stream: length must exceed embed_L (nothing left after embedding)", "stream.length");
    }
    if (!(noise_std >= 0.0) || !std::isfinite(noise_std)) {
        throw ValidationError("stream: noise_std must be >= 0", "stream.noise_std");
    }
}

void to_json(nlohmann::json& j, const StreamConfig& c) {
    j = nlohmann::json{{"generator", to_string(c.generator)},
                       {"length", c.length},
                       {"noise_std", c.noise_std},
                       {"seed", c.seed},
                       {"embed_L", c.embed_L}};
    if (c.generator == Generator::csv) j["path"] = c.path;
}

void from_json(const nlohmann::json& j, StreamConfig& c) {
    if (!j.is_object()) throw ValidationError("stream must be an object", "stream");
    StreamConfig out;
    try {
        out.generator = parse_generator(j.value("generator", std::string("nonlinear_sysid")));
        out.length = j.value("length", out.length);
        out.noise_std = j.value("noise_std", out.noise_std);
        out.seed = j.value("seed", out.seed);
        out.embed_L = j.value("embed_L", out.embed_L);
        out.path = j.value("path", std::string());
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("stream: ") + e.what(), "stream");
    }
    c = out;
}

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

namespace {

// Samples with u(t) = [x(t), ..., x(t-L+1)] for t = first, ..., first+length-1.
Stream embed(const std::vector<double>& x, std::size_t first, std::size_t length, std::size_t l) {
    Stream s(length);
    for (std::size_t n = 0; n < length; ++n) {
        const std::size_t t = first + n;
        s[n].u.resize(l);
        for (std::size_t j = 0; j < l; ++j) s[n].u[j] = x[t - j];
    }
    return s;
}

void add_noise(Stream& s, double noise_std, Rng& rng) {
    if (noise_std == 0.0) return;
    for (auto& sample : s) sample.d += noise_std * rng.normal();
}

}  // namespace

Stream generate(const StreamConfig& c) {
    c.validate();
    if (c.generator == Generator::csv) {
        Stream s = read_csv_stream(c.path, c.embed_L);
        if (c.length > 0 && c.length < s.size()) s.resize(c.length);
        return s;
    }
    Rng rng(c.seed);
    const std::size_t l = c.embed_L;
    Stream s;
    switch (c.generator) {
        case Generator::nonlinear_sysid: {
            const std::size_t first = std::max<std::size_t>(l - 1, 2);
            std::vector<double> x(first + c.length);
            for (auto& v : x) v = rng.normal();
            s = embed(x, first, c.length, l);
            for (std::size_t n = 0; n < c.length; ++n) {
                const std::size_t t = first + n;
                s[n].d = std::tanh(0.5 * x[t] + 0.3 * x[t - 1] * x[t - 2]);
            }
            break;
        }
        case Generator::noisy_sinc: {
            const std::size_t first = l - 1;
            std::vector<double> x(first + c.length);
            for (auto& v : x) v = rng.uniform(-3.0, 3.0);
            s = embed(x, first, c.length, l);
            for (std::size_t n = 0; n < c.length; ++n) s[n].d = sinc(x[first + n]);
            break;
        }
        case Generator::linear_plant: {
            const std::size_t first = l - 1;
            std::vector<double> x(first + c.length);
            for (auto& v : x) v = rng.normal();
            s = embed(x, first, c.length, l);
            for (auto& sample : s) {
                double w = 1.0;
                for (double ui : sample.u) {
                    sample.d += w * ui;
                    w *= -0.5;
                }
            }
            break;
        }
        case Generator::mackey_glass_like: {
            constexpr std::size_t tau = 17;
            constexpr std::size_t warmup = 1000;
            std::vector<double> z(tau + 1);
            for (auto& v : z) v = 1.2 + rng.uniform(-0.1, 0.1);
            const std::size_t total = warmup + l + c.length;
            while (z.size() < tau + 1 + total) {
                const std::size_t t = z.size() - 1;
                const double lagged = z[t - tau];
                z.push_back(z[t] + 0.2 * lagged / (1.0 + std::pow(lagged, 10)) - 0.1 * z[t]);
            }
            std::vector<double> x(z.end() - static_cast<std::ptrdiff_t>(l + c.length), z.end());
            // Predict x(t) from the L values before it.
            s = embed(x, l - 1, c.length, l);
            for (std::size_t n = 0; n < c.length; ++n) s[n].d = x[l + n];
            break;
        }
        case Generator::csv: break;
    }
    add_noise(s, c.noise_std, rng);
    return s;
}

Stream read_csv_stream(const std::string& path, std::size_t input_dim) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open stream file '" + path + "'");
    Stream s;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> values;
        std::stringstream ss(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(ss, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str()) {
                numeric = false;
                break;
            }
            values.push_back(v);
        }
        if (!numeric) {
            if (s.empty() && line_no == 1) continue;  // header
            throw ValidationError(path + ":" + std::to_string(line_no) + ": non-numeric value", "stream.path");
        }
        if (values.size() != input_dim + 1) {
            throw ValidationError(path + ":" + std::to_string(line_no) + ": expected " + std::to_string(input_dim + 1) +
                                      " columns",
                                  "stream.path");
        }
        Sample sample;
        sample.d = values.back();
        values.pop_back();
        sample.u = std::move(values);
        s.push_back(std::move(sample));
    }
    if (s.empty()) throw ValidationError("stream file '" + path + "' has no samples", "stream.path");
    return s;
}

double steady_state_mse(const LearningCurve& curve, std::size_t window) {
    const auto& r = curve.records;
    if (window == 0 || window > r.size()) {
        throw ValidationError("steady-state window must be in [1, curve length]", "window");
    }
    double sum = 0.0;
    for (std::size_t i = r.size() - window; i < r.size(); ++i) sum += r[i].e2;
    return sum / static_cast<double>(window);
}

std::size_t default_window(std::size_t length) { return std::max<std::size_t>(1, length / 10); }

std::optional<std::size_t> convergence_step(const LearningCurve& curve, std::size_t window, std::size_t trailing,
                                            double tolerance) {
    const auto& r = curve.records;
    if (r.empty() || trailing == 0) return std::nullopt;
    const double target = steady_state_mse(curve, window);
    std::vector<double> moving(r.size());
    double running = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        running += r[i].e2;
        if (i >= trailing) running -= r[i - trailing].e2;
        moving[i] = running / static_cast<double>(std::min(i + 1, trailing));
    }
    std::optional<std::size_t> settled;
    for (std::size_t i = r.size(); i-- > 0;) {
        if (std::abs(moving[i] - target) > tolerance * target) break;
        settled = r[i].n;
    }
    return settled;
}

TrialSummary summarize(const LearningCurve& curve, std::optional<std::size_t> window, ConvergenceRule rule) {
    if (curve.records.empty()) throw ValidationError("cannot summarize an empty curve");
    const std::size_t w = window.value_or(default_window(curve.records.size()));
    TrialSummary s;
    s.steady_state_mse = steady_state_mse(curve, w);
    s.convergence_step = convergence_step(curve, w, rule.trailing, rule.tolerance);
    s.final_dict_size = curve.records.back().dict_size;
    for (const auto& rec : curve.records) s.total_seconds += rec.step_seconds;
    s.samples = curve.records.size();
    return s;
}

nlohmann::json to_json(const TrialSummary& s) {
    nlohmann::json j{{"steady_state_mse", s.steady_state_mse},
                     {"final_dict_size", s.final_dict_size},
                     {"total_seconds", s.total_seconds},
                     {"samples", s.samples}};
    j["convergence_step"] = s.convergence_step ? nlohmann::json(*s.convergence_step) : nlohmann::json(nullptr);
    return j;
}

LearningCurve run_trial(const FilterConfig& filter, const Stream& stream, TrialOptions options,
                        nlohmann::json* final_snapshot) {
    if (stream.empty()) throw ValidationError("stream is empty");
    OnlineFilter f(filter, stream.front().u.size());
    LearningCurve curve;
    curve.records.reserve(stream.size());
    for (std::size_t i = 0; i < stream.size(); ++i) {
        StepOutput out;
        try {
            if (options.timing) {
                const auto t0 = std::chrono::steady_clock::now();
                out = f.step(stream[i].u, stream[i].d);
                out.step_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            } else {
                out = f.step(stream[i].u, stream[i].d);
            }
        } catch (const Error& e) {
            throw Error(e.kind(), "step " + std::to_string(i + 1) + ": " + e.what(), e.field());
        }
        CurveRecord rec;
        rec.n = i + 1;
        rec.y = out.y;
        rec.d = stream[i].d;
        rec.e = out.e;
        rec.e2 = out.e * out.e;
        rec.dict_size = static_cast<double>(out.dict_size);
        rec.step_seconds = out.step_seconds;
        curve.records.push_back(rec);
    }
    if (final_snapshot != nullptr) *final_snapshot = f.snapshot();
    return curve;
}

LearningCurve run_trial(const FilterConfig& filter, const StreamConfig& stream, TrialOptions options,
                        nlohmann::json* final_snapshot) {
    return run_trial(filter, generate(stream), options, final_snapshot);
}

std::vector<LearningCurve> run_trials(const FilterConfig& filter, const StreamConfig& stream, std::size_t trials,
                                      TrialOptions options, nlohmann::json* first_snapshot) {
    if (trials == 0) throw ValidationError("trials must be >= 1", "trials");
    filter.validate();
    stream.validate();
    std::vector<LearningCurve> curves(trials);
    auto one = [&](std::size_t t) {
        StreamConfig sc = stream;
        sc.seed = stream.seed + t;
        curves[t] = run_trial(filter, sc, options, t == 0 ? first_snapshot : nullptr);
    };
    if (options.parallel) {
        parallel_for(trials, one);
    } else {
        for (std::size_t t = 0; t < trials; ++t) one(t);
    }
    return curves;
}

LearningCurve average_curves(const std::vector<LearningCurve>& curves) {
    if (curves.empty()) throw ValidationError("no curves to average");
    const std::size_t len = curves.front().records.size();
    for (const auto& c : curves) {
        if (c.records.size() != len) throw DimensionError("curves differ in length");
    }
    LearningCurve mean;
    mean.records.resize(len);
    const double inv = 1.0 / static_cast<double>(curves.size());
    for (std::size_t i = 0; i < len; ++i) {
        CurveRecord& m = mean.records[i];
        m.n = curves.front().records[i].n;
        for (const auto& c : curves) {
            const CurveRecord& r = c.records[i];
            m.y += r.y;
            m.d += r.d;
            m.e += r.e;
            m.e2 += r.e2;
            m.dict_size += r.dict_size;
            m.step_seconds += r.step_seconds;
        }
        m.y *= inv;
        m.d *= inv;
        m.e *= inv;
        m.e2 *= inv;
        m.dict_size *= inv;
        m.step_seconds *= inv;
    }
    return mean;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_curves_csv(std::ostream& os, const std::vector<LearningCurve>& curves) {
    os << "n,y,d,e,e2,dict_size,step_seconds\n";
    for (const auto& c : curves) {
        for (const auto& r : c.records) {
            os << r.n << ',' << format_double(r.y) << ',' << format_double(r.d) << ',' << format_double(r.e) << ','
               << format_double(r.e2) << ',' << format_double(r.dict_size) << ',' << format_double(r.step_seconds)
               << '\n';
        }
    }
}

std::size_t worker_count() {
    if (const char* env = std::getenv("KAF_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min(worker_count(), count);
    std::vector<std::exception_ptr> errors(count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) {
            try {
                fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace kaf
