#include "kaf/online.hpp"

#include <cmath>

#include "kaf/errors.hpp"
#include "kaf/snapshot.hpp"

namespace kaf {

const char* to_string(FilterKind kind) {
    switch (kind) {
        case FilterKind::klms: return "klms";
        case FilterKind::krls_ald_reg: return "krls-ald-reg";
        case FilterKind::lms: return "lms";
        case FilterKind::rls: return "rls";
    }
    return "unknown";
}

FilterKind parse_filter_kind(const std::string& name) {
    if (name == "klms") return FilterKind::klms;
    if (name == "krls-ald-reg") return FilterKind::krls_ald_reg;
    if (name == "lms") return FilterKind::lms;
    if (name == "rls") return FilterKind::rls;
    throw ValidationError("unknown filter '" + name + "'", "filter.type");
}

KrlsParams FilterConfig::krls_params() const {
    KrlsParams p;
    p.kernel = kernel;
    p.lambda = lambda;
    p.delta = delta;
    p.unregularized = unregularized;
    return p;
}

KlmsParams FilterConfig::klms_params() const {
    KlmsParams p;
    p.kernel = kernel;
    p.eta = eta;
    p.max_centers = max_centers;
    return p;
}

LinearParams FilterConfig::linear_params() const {
    LinearParams p;
    p.algorithm = kind == FilterKind::rls ? LinearAlgorithm::rls : LinearAlgorithm::lms;
    p.eta = eta;
    p.lambda = lambda;
    return p;
}

void FilterConfig::validate() const {
    switch (kind) {
        case FilterKind::krls_ald_reg: krls_params().validate(); break;
        case FilterKind::klms: klms_params().validate(); break;
        case FilterKind::lms:
        case FilterKind::rls: linear_params().validate(); break;
    }
}

void to_json(nlohmann::json& j, const FilterConfig& c) {
    j = nlohmann::json{{"type", to_string(c.kind)}, {"kernel", c.kernel}, {"lambda", c.lambda},
                       {"delta", c.delta},          {"eta", c.eta},       {"unregularized", c.unregularized},
                       {"max_centers", c.max_centers}};
}

void from_json(const nlohmann::json& j, FilterConfig& c) {
    if (!j.is_object()) throw ValidationError("filter must be an object", "filter");
    FilterConfig out;
    try {
        out.kind = parse_filter_kind(j.value("type", std::string("krls-ald-reg")));
        if (j.contains("kernel")) out.kernel = j.at("kernel").get<KernelSpec>();
        out.lambda = j.value("lambda", out.lambda);
        out.delta = j.value("delta", out.delta);
        out.eta = j.value("eta", out.eta);
        out.unregularized = j.value("unregularized", out.unregularized);
        out.max_centers = j.value("max_centers", out.max_centers);
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("filter: ") + e.what(), "filter");
    }
    c = out;
}

OnlineFilter::OnlineFilter(FilterConfig config, std::size_t input_dim)
    : config_(std::move(config)), input_dim_(input_dim) {
    config_.validate();
    if (input_dim_ == 0) throw DimensionError("filter: input dimension must be at least 1");
    if (config_.kind == FilterKind::lms || config_.kind == FilterKind::rls) {
        state_.emplace<LinearFilter>(config_.linear_params(), input_dim_);
    }
}

bool OnlineFilter::started() const noexcept { return !std::holds_alternative<std::monostate>(state_); }

StepOutput OnlineFilter::step(std::span<const double> u, double d) {
    if (u.size() != input_dim_) throw DimensionError("filter: input dimension mismatch");
    return std::visit(
        [&](auto& s) -> StepOutput {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                StepOutput out;
                out.y = 0.0;
                out.e = d;
                out.grew = true;
                out.dict_size = 1;
                if (config_.kind == FilterKind::krls_ald_reg) {
                    state_ = RegKrls::init(config_.krls_params(), u, d);
                } else {
                    state_ = Klms::init(config_.klms_params(), u, d);
                }
                return out;
            } else {
                return s.step(u, d);
            }
        },
        state_);
}

double OnlineFilter::predict(std::span<const double> u) const {
    return std::visit(
        [&](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                if (u.size() != input_dim_) throw DimensionError("filter: input dimension mismatch");
                return 0.0;
            } else {
                return s.predict(u);
            }
        },
        state_);
}

std::size_t OnlineFilter::size() const {
    if (const auto* k = krls()) return k->dictionary().size();
    if (const auto* k = klms()) return k->n();
    return 0;
}

nlohmann::json OnlineFilter::snapshot(bool resume_exact) const {
    if (const auto* k = krls()) return to_snapshot(*k, KrlsSnapshotOptions{resume_exact, false});
    if (const auto* k = klms()) return to_snapshot(*k);
    if (const auto* l = linear()) return to_snapshot(*l);
    return nullptr;
}

}  // namespace kaf
