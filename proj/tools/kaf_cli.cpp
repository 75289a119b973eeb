// kaf: run, sweep, verify and bench front end.
//
//   kaf run config.json [--delta D] [--lambda L] [--sigma S] [--eta E] [--seed N] [--out DIR]
//   kaf sweep config.json [--out DIR]
//   kaf verify krls-batch|klms-feature|gram-psd|inverse-consistency [--samples N] [--seed N]
//   kaf bench krls-ald-reg|klms|lms|rls [--sizes 50,100,200,400,800] [--reps 21] [--out FILE]
//
// Exit codes: 0 ok, 1 bad input, 2 numerical failure or verify breach, 3 I/O.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kaf/app.hpp"
#include "kaf/bench.hpp"
#include "kaf/verify.hpp"

namespace {

int fail(const kaf::Error& e) {
    std::cout << kaf::error_json(e).dump() << '\n';
    return kaf::exit_code(e.kind());
}

std::string bench_csv(const kaf::BenchResult& r) {
    std::ostringstream os;
    os << "size,median_seconds,rel_iqr,unstable\n";
    for (const auto& p : r.points) {
        os << p.size << ',' << kaf::format_double(p.median_seconds) << ',' << kaf::format_double(p.rel_iqr) << ','
           << (p.unstable ? 1 : 0) << '\n';
    }
    os << "# slope," << kaf::format_double(r.slope) << '\n';
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"kernel adaptive filtering harness"};
    app.require_subcommand(1);

    std::string config_path;
    kaf::Overrides ov;
    double delta = 0, lambda = 0, sigma = 0, eta = 0;
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    std::string out;

    auto* run = app.add_subcommand("run", "run trials from a JSON config");
    run->add_option("config", config_path, "config file")->required();
    auto* o_delta = run->add_option("--delta", delta, "ALD threshold");
    auto* o_lambda = run->add_option("--lambda", lambda, "regularization");
    auto* o_sigma = run->add_option("--sigma", sigma, "gaussian width");
    auto* o_eta = run->add_option("--eta", eta, "step size");
    auto* o_seed = run->add_option("--seed", seed, "stream seed");
    auto* o_trials = run->add_option("--trials", trials, "trial count");
    auto* o_out = run->add_option("--out", out, "output directory");
    auto* o_timing = run->add_flag("--timing", "record per-step wall time");

    std::string sweep_path, sweep_out;
    auto* sweep = app.add_subcommand("sweep", "grid sweep from a JSON config");
    sweep->add_option("config", sweep_path, "config file with a grid")->required();
    auto* o_sweep_out = sweep->add_option("--out", sweep_out, "output directory");

    std::string suite;
    std::size_t samples = 0;
    std::uint64_t verify_seed = 2024;
    auto* verify = app.add_subcommand("verify", "oracle equivalence suite");
    verify->add_option("suite", suite, "suite name")
        ->required()
        ->check(CLI::IsMember({"krls-batch", "klms-feature", "gram-psd", "inverse-consistency"}));
    auto* o_samples = verify->add_option("--samples", samples, "stream length or points per set");
    verify->add_option("--seed", verify_seed, "seed");

    std::string filter;
    std::vector<std::size_t> sizes{50, 100, 200, 400, 800};
    kaf::BenchOptions bopts;
    std::string bench_out;
    auto* benchc = app.add_subcommand("bench", "per-step cost against model size");
    benchc->add_option("filter", filter, "filter type")
        ->required()
        ->check(CLI::IsMember({"krls-ald-reg", "klms", "lms", "rls"}));
    benchc->add_option("--sizes", sizes, "model sizes")->delimiter(',');
    benchc->add_option("--reps", bopts.reps, "timed steps per size");
    benchc->add_option("--seed", bopts.seed, "seed");
    benchc->add_option("--out", bench_out, "CSV file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return fail(kaf::ValidationError(e.what()));
    }

    try {
        if (*run) {
            if (*o_delta) ov.delta = delta;
            if (*o_lambda) ov.lambda = lambda;
            if (*o_sigma) ov.sigma = sigma;
            if (*o_eta) ov.eta = eta;
            if (*o_seed) ov.seed = seed;
            if (*o_trials) ov.trials = trials;
            if (*o_out) ov.out = out;
            if (*o_timing) ov.timing = true;
            kaf::RunConfig config = kaf::parse_run_config(kaf::read_json_file(config_path));
            kaf::apply_overrides(config, ov);
            const auto summary = kaf::execute_run(config);
            std::cout << summary["summary"].dump() << '\n';
            return 0;
        }
        if (*sweep) {
            kaf::SweepConfig config = kaf::parse_sweep_config(kaf::read_json_file(sweep_path));
            if (*o_sweep_out) config.base.out = sweep_out;
            const auto doc = kaf::execute_sweep(config);
            std::cout << "points " << doc["rows"].size() << " -> " << config.base.out << '\n';
            return 0;
        }
        if (*verify) {
            kaf::VerifyOptions vo;
            vo.seed = verify_seed;
            if (*o_samples) vo.samples = samples;
            const auto report = kaf::run_verify(kaf::parse_verify_suite(suite), vo);
            std::printf("%s max_deviation=%.17g tolerance=%.3g %s\n", report.suite.c_str(), report.max_deviation,
                        report.tolerance, report.passed ? "PASS" : "FAIL");
            std::cout << kaf::to_json(report).dump() << '\n';
            return report.passed ? 0 : 2;
        }
        if (*benchc) {
            const auto result = kaf::bench(kaf::parse_filter_kind(filter), sizes, bopts);
            const std::string csv = bench_csv(result);
            if (bench_out.empty()) {
                std::cout << csv;
            } else {
                std::ofstream f(bench_out, std::ios::binary | std::ios::trunc);
                if (!f || !(f << csv)) throw kaf::IoError("cannot write '" + bench_out + "'");
                std::printf("slope %.17g\n", result.slope);
            }
            for (const auto& p : result.points) {
                if (p.unstable) std::fprintf(stderr, "warning: size %zu timing unstable\n", p.size);
            }
            return 0;
        }
    } catch (const kaf::Error& e) {
        return fail(e);
    } catch (const std::exception& e) {
        return fail(kaf::NumericalError(e.what()));
    }
    return 1;
}
