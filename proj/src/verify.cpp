#include "kaf/verify.hpp"

#include <algorithm>
#include <cmath>

#include "kaf/errors.hpp"
#include "kaf/experiments.hpp"
#include "kaf/online.hpp"
#include "kaf/oracle.hpp"
#include "kaf/random.hpp"

namespace kaf {

namespace {

Eigen::Map<const Eigen::VectorXd> view(const Vector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Inputs uniform in [-range, range]^dim; d = sin(u0) cos(u1) + 0.1 N(0,1).
Stream box_stream(std::size_t n, std::size_t dim, double range, std::uint64_t seed) {
    Rng rng(seed);
    Stream s(n);
    for (auto& sample : s) {
        sample.u.resize(dim);
        for (auto& v : sample.u) v = rng.uniform(-range, range);
        sample.d = std::sin(sample.u[0]) * std::cos(dim > 1 ? sample.u[1] : 0.0) + 0.1 * rng.normal();
    }
    return s;
}

void note_failure(VerifyReport& r, bool ok, std::size_t step) {
    if (!ok && !r.first_failing_step) r.first_failing_step = step;
}

VerifyReport krls_batch(const VerifyOptions& o) {
    VerifyReport r;
    r.suite = "krls-batch";
    r.tolerance = 1e-8;
    const std::size_t n = o.samples.value_or(300);
    const Stream stream = box_stream(n, 2, 1.5, o.seed);

    FilterConfig config;
    config.kind = FilterKind::krls_ald_reg;
    config.kernel = KernelSpec::gaussian(1.0);
    config.lambda = 0.1;
    config.delta = 0.01;
    OnlineFilter filter(config, 2);
    oracle::BatchReplay replay(config.kernel, config.lambda, config.delta);

    std::size_t decision_mismatches = 0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        const StepOutput out = filter.step(stream[i].u, stream[i].d);
        const bool oracle_grew = replay.push(stream[i].u, stream[i].d);
        if (oracle_grew != out.grew) {
            ++decision_mismatches;
            note_failure(r, false, i + 1);
            break;
        }
        const Eigen::VectorXd expected = replay.solve().alpha;
        const Eigen::VectorXd actual = view(filter.krls()->alpha());
        const double scale = std::max(expected.norm(), 1e-300);
        const double dev = (actual - expected).norm() / scale;
        r.max_deviation = std::max(r.max_deviation, dev);
        note_failure(r, dev <= r.tolerance, i + 1);
    }
    const RegKrls& k = *filter.krls();
    r.details = {{"samples", n},
                 {"grow_steps", k.grow_steps() + 1},  // + the initializing sample
                 {"unchanged_steps", k.unchanged_steps()},
                 {"dictionary_size", k.dictionary().size()},
                 {"decision_mismatches", decision_mismatches},
                 {"p_invariant_residual", k.p_invariant_residual()}};
    r.passed = !r.first_failing_step;
    return r;
}

VerifyReport klms_feature(const VerifyOptions& o) {
    VerifyReport r;
    r.suite = "klms-feature";
    r.tolerance = 1e-10;
    const std::size_t n = o.samples.value_or(200);
    constexpr double eta = 0.1;
    Rng rng(o.seed);

    FilterConfig config;
    config.kind = FilterKind::klms;
    config.kernel = KernelSpec::polynomial(2);
    config.eta = eta;
    OnlineFilter klms(config, 2);

    Eigen::VectorXd w = Eigen::VectorXd::Zero(6);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector u{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        const double d = u[0] * u[1] + std::sin(u[0]) + 0.05 * rng.normal();
        const Eigen::VectorXd phi = view(oracle::polynomial_features(u, 2));
        const double y_lms = w.dot(phi);
        w += eta * (d - y_lms) * phi;
        const double y_klms = klms.step(u, d).y;
        const double dev = std::abs(y_klms - y_lms);
        r.max_deviation = std::max(r.max_deviation, dev);
        note_failure(r, dev <= r.tolerance, i + 1);
    }
    r.details = {{"samples", n}, {"eta", eta}, {"degree", 2}, {"input_dim", 2}};
    r.passed = !r.first_failing_step;
    return r;
}

VerifyReport gram_psd(const VerifyOptions& o) {
    VerifyReport r;
    r.suite = "gram-psd";
    constexpr std::size_t sets = 50;
    const std::size_t points = o.samples.value_or(50);
    r.tolerance = 1e-10 * static_cast<double>(points);
    Rng rng(o.seed);
    const KernelSpec spec = KernelSpec::gaussian(1.0);
    double lowest = INFINITY;
    for (std::size_t s = 0; s < sets; ++s) {
        std::vector<Vector> pts(points, Vector(3));
        for (auto& p : pts) {
            for (auto& v : p) v = rng.uniform(-1.0, 1.0);
        }
        const double min_eig = oracle::min_eigenvalue(oracle::to_eigen(gram(spec, pts)));
        lowest = std::min(lowest, min_eig);
        r.max_deviation = std::max(r.max_deviation, -min_eig);
        note_failure(r, min_eig >= -r.tolerance, s + 1);
    }
    r.details = {{"sets", sets}, {"points", points}, {"min_eigenvalue", lowest}};
    r.passed = !r.first_failing_step;
    return r;
}

VerifyReport inverse_consistency(const VerifyOptions& o) {
    VerifyReport r;
    r.suite = "inverse-consistency";
    r.tolerance = 1e-8;
    const std::size_t n = o.samples.value_or(500);
    const Stream stream = box_stream(n, 2, 1.5, o.seed);

    FilterConfig config;
    config.kind = FilterKind::krls_ald_reg;
    config.kernel = KernelSpec::gaussian(1.0);
    config.lambda = 0.1;
    config.delta = 0.01;
    OnlineFilter filter(config, 2);
    std::size_t growths = 0;
    double max_dense_gap = 0.0;
    for (std::size_t i = 0; i < stream.size(); ++i) {
        if (!filter.step(stream[i].u, stream[i].d).grew) continue;
        ++growths;
        const Dictionary& dict = filter.krls()->dictionary();
        const double dev = identity_residual_inf(multiply(dict.gram(), dict.gram_inv()));
        const Eigen::MatrixXd dense = oracle::to_eigen(dict.gram()).inverse();
        max_dense_gap = std::max(max_dense_gap, (oracle::to_eigen(dict.gram_inv()) - dense).cwiseAbs().maxCoeff() /
                                                    dense.cwiseAbs().maxCoeff());
        r.max_deviation = std::max(r.max_deviation, dev);
        note_failure(r, dev <= r.tolerance, i + 1);
    }
    r.details = {{"samples", n},
                 {"growths", growths},
                 {"dictionary_size", filter.size()},
                 {"max_relative_gap_to_dense_inverse", max_dense_gap}};
    r.passed = !r.first_failing_step;
    return r;
}

}  // namespace

VerifySuite parse_verify_suite(const std::string& name) {
    if (name == "krls-batch") return VerifySuite::krls_batch;
    if (name == "klms-feature") return VerifySuite::klms_feature;
    if (name == "gram-psd") return VerifySuite::gram_psd;
    if (name == "inverse-consistency") return VerifySuite::inverse_consistency;
    throw ValidationError("unknown verify suite '" + name + "'", "suite");
}

const char* to_string(VerifySuite suite) {
    switch (suite) {
        case VerifySuite::krls_batch: return "krls-batch";
        case VerifySuite::klms_feature: return "klms-feature";
        case VerifySuite::gram_psd: return "gram-psd";
        case VerifySuite::inverse_consistency: return "inverse-consistency";
    }
    return "unknown";
}

VerifyReport run_verify(VerifySuite suite, VerifyOptions options) {
    switch (suite) {
        case VerifySuite::krls_batch: return krls_batch(options);
        case VerifySuite::klms_feature: return klms_feature(options);
        case VerifySuite::gram_psd: return gram_psd(options);
        case VerifySuite::inverse_consistency: return inverse_consistency(options);
    }
    throw ValidationError("unknown verify suite");
}

nlohmann::json to_json(const VerifyReport& r) {
    nlohmann::json j{{"suite", r.suite},
                     {"max_deviation", r.max_deviation},
                     {"tolerance", r.tolerance},
                     {"passed", r.passed},
                     {"details", r.details}};
    j["first_failing_step"] = r.first_failing_step ? nlohmann::json(*r.first_failing_step) : nlohmann::json(nullptr);
    return j;
}

}  // namespace kaf
