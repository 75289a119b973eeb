#include "kaf/app.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace kaf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Files are staged as "<name>.tmp" and renamed together on commit; anything
// still staged when the writer dies is deleted.
class StagedOutputs {
public:
    explicit StagedOutputs(fs::path dir) : dir_(std::move(dir)) {}
    StagedOutputs(const StagedOutputs&) = delete;
    StagedOutputs& operator=(const StagedOutputs&) = delete;

    ~StagedOutputs() {
        std::error_code ec;
        for (const auto& [tmp, final_path] : staged_) fs::remove(tmp, ec);
    }

    void stage(const std::string& name, const std::string& content) {
        const fs::path final_path = dir_ / name;
        fs::path tmp = final_path;
        tmp += ".tmp";
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        staged_.emplace_back(tmp, final_path);
        if (!out || !(out << content) || !out.flush()) throw IoError("cannot write '" + tmp.string() + "'");
    }

    void commit() {
        for (const auto& [tmp, final_path] : staged_) {
            std::error_code ec;
            fs::rename(tmp, final_path, ec);
            if (ec) throw IoError("cannot rename '" + tmp.string() + "': " + ec.message());
        }
        staged_.clear();
    }

private:
    fs::path dir_;
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
}

std::vector<double> number_list(const json& grid, const char* key) {
    if (!grid.contains(key)) return {};
    const json& v = grid.at(key);
    if (!v.is_array() || v.empty()) throw ValidationError(std::string("grid.") + key + " must be a nonempty array",
                                                          std::string("grid.") + key);
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ValidationError(std::string("grid.") + key + " must hold numbers",
                                                  std::string("grid.") + key);
        out.push_back(x.get<double>());
    }
    return out;
}

json summary_document(const RunConfig& config, const std::vector<LearningCurve>& curves) {
    json per_trial = json::array();
    for (const auto& c : curves) per_trial.push_back(to_json(summarize(c, config.window, config.convergence)));
    return json{{"filter", config.filter},
                {"stream", config.stream},
                {"trials", config.trials},
                {"window", config.window ? json(*config.window) : json(nullptr)},
                {"convergence", {{"trailing", config.convergence.trailing}, {"tolerance", config.convergence.tolerance}}},
                {"summary", to_json(summarize(average_curves(curves), config.window, config.convergence))},
                {"trial_summaries", per_trial}};
}

}  // namespace

void RunConfig::validate() const {
    try {
        filter.validate();
    } catch (const ValidationError& e) {
        throw ValidationError(e.what(), e.field().empty() ? "filter" : "filter." + e.field());
    }
    stream.validate();
    if (trials == 0) throw ValidationError("trials must be >= 1", "trials");
    if (convergence.trailing == 0) throw ValidationError("convergence.trailing must be >= 1", "convergence.trailing");
    if (!(convergence.tolerance > 0.0)) {
        throw ValidationError("convergence.tolerance must be positive", "convergence.tolerance");
    }
    if (window && *window == 0) throw ValidationError("window must be >= 1", "window");
    if (window && stream.generator != Generator::csv && *window > stream.length) {
        throw ValidationError("window exceeds stream length", "window");
    }
}

RunConfig parse_run_config(const json& j) {
    if (!j.is_object()) throw ValidationError("config must be a JSON object");
    RunConfig c;
    try {
        if (j.contains("filter")) c.filter = j.at("filter").get<FilterConfig>();
    } catch (const ValidationError& e) {
        throw ValidationError(e.what(), e.field().rfind("filter", 0) == 0 ? e.field() : "filter." + e.field());
    }
    if (j.contains("stream")) c.stream = j.at("stream").get<StreamConfig>();
    try {
        c.trials = j.value("trials", c.trials);
        if (j.contains("window") && !j.at("window").is_null()) c.window = j.at("window").get<std::size_t>();
        c.timing = j.value("timing", c.timing);
        c.out = j.value("out", c.out);
        if (j.contains("convergence")) {
            const json& cv = j.at("convergence");
            c.convergence.trailing = cv.value("trailing", c.convergence.trailing);
            c.convergence.tolerance = cv.value("tolerance", c.convergence.tolerance);
        }
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config: ") + e.what());
    }
    return c;
}

void apply_overrides(RunConfig& c, const Overrides& o) {
    if (o.delta) c.filter.delta = *o.delta;
    if (o.lambda) c.filter.lambda = *o.lambda;
    if (o.sigma) c.filter.kernel.sigma = *o.sigma;
    if (o.eta) c.filter.eta = *o.eta;
    if (o.seed) c.stream.seed = *o.seed;
    if (o.out) c.out = *o.out;
    if (o.trials) c.trials = *o.trials;
    if (o.timing) c.timing = *o.timing;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

json execute_run(const RunConfig& config) {
    config.validate();
    json snapshot;
    TrialOptions options;
    options.timing = config.timing;
    const auto curves = run_trials(config.filter, config.stream, config.trials, options, &snapshot);
    const json summary = summary_document(config, curves);

    std::ostringstream all, mean;
    write_curves_csv(all, curves);
    write_curves_csv(mean, {average_curves(curves)});

    ensure_dir(config.out);
    StagedOutputs out(config.out);
    out.stage("curves.csv", all.str());
    out.stage("mean_curve.csv", mean.str());
    out.stage("summary.json", summary.dump(2) + "\n");
    out.stage("model.json", snapshot.dump() + "\n");
    out.commit();
    return summary;
}

std::vector<FilterConfig> SweepConfig::points() const {
    const FilterConfig& b = base.filter;
    auto axis = [](const std::vector<double>& values, double fallback) {
        return values.empty() ? std::vector<double>{fallback} : values;
    };
    std::vector<FilterConfig> out;
    for (double d : axis(delta, b.delta)) {
        for (double l : axis(lambda, b.lambda)) {
            for (double s : axis(sigma, b.kernel.sigma)) {
                for (double e : axis(eta, b.eta)) {
                    FilterConfig f = b;
                    f.delta = d;
                    f.lambda = l;
                    f.kernel.sigma = s;
                    f.eta = e;
                    out.push_back(f);
                }
            }
        }
    }
    return out;
}

SweepConfig parse_sweep_config(const json& j) {
    SweepConfig c;
    c.base = parse_run_config(j);
    if (!j.contains("grid") || !j.at("grid").is_object()) throw ValidationError("sweep needs a grid object", "grid");
    const json& g = j.at("grid");
    c.delta = number_list(g, "delta");
    c.lambda = number_list(g, "lambda");
    c.sigma = number_list(g, "sigma");
    c.eta = number_list(g, "eta");
    return c;
}

json execute_sweep(const SweepConfig& config) {
    config.base.stream.validate();
    if (config.base.trials == 0) throw ValidationError("trials must be >= 1", "trials");
    const auto points = config.points();
    std::vector<json> rows(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        RunConfig rc = config.base;
        rc.filter = points[i];
        json row{{"point", i},
                 {"delta", rc.filter.delta},
                 {"lambda", rc.filter.lambda},
                 {"sigma", rc.filter.kernel.sigma},
                 {"eta", rc.filter.eta}};
        try {
            rc.validate();
            TrialOptions options;
            options.timing = rc.timing;
            options.parallel = false;
            const auto curves = run_trials(rc.filter, rc.stream, rc.trials, options);
            row["summary"] = to_json(summarize(average_curves(curves), rc.window, rc.convergence));
        } catch (const Error& e) {
            row["error"] = error_json(e)["error"];
        }
        rows[i] = std::move(row);
    });

    std::ostringstream csv;
    csv << "point,delta,lambda,sigma,eta,steady_state_mse,final_dict_size,convergence_step,total_seconds,error\n";
    for (const auto& row : rows) {
        csv << row["point"].get<std::size_t>() << ',' << format_double(row["delta"].get<double>()) << ','
            << format_double(row["lambda"].get<double>()) << ',' << format_double(row["sigma"].get<double>()) << ','
            << format_double(row["eta"].get<double>()) << ',';
        if (row.contains("summary")) {
            const json& s = row["summary"];
            csv << format_double(s["steady_state_mse"].get<double>()) << ','
                << format_double(s["final_dict_size"].get<double>()) << ','
                << (s["convergence_step"].is_null() ? std::string() : s["convergence_step"].dump()) << ','
                << format_double(s["total_seconds"].get<double>()) << ",\n";
        } else {
            csv << ",,,," << row["error"]["kind"].get<std::string>() << '\n';
        }
    }
    json doc{{"stream", config.base.stream}, {"trials", config.base.trials}, {"rows", rows}};

    ensure_dir(config.base.out);
    StagedOutputs out(config.base.out);
    out.stage("sweep.csv", csv.str());
    out.stage("sweep.json", doc.dump(2) + "\n");
    out.commit();
    return doc;
}

json error_json(const Error& e) {
    json err{{"kind", to_string(e.kind())}, {"message", e.what()}};
    err["field"] = e.field().empty() ? json(nullptr) : json(e.field());
    return json{{"error", err}};
}

}  // namespace kaf
