#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "json.hpp"
#include "kaf/filter.hpp"
#include "kaf/klms.hpp"
#include "kaf/krls.hpp"
#include "kaf/linear.hpp"

namespace kaf {

enum class FilterKind { klms, krls_ald_reg, lms, rls };

const char* to_string(FilterKind kind);
FilterKind parse_filter_kind(const std::string& name);

// One filter and all of its hyperparameters. Unused fields are ignored.
struct FilterConfig {
    FilterKind kind = FilterKind::krls_ald_reg;
    KernelSpec kernel;
    double lambda = 0.1;
    double delta = 0.01;
    double eta = 0.2;
    bool unregularized = false;
    std::size_t max_centers = 0;

    KrlsParams krls_params() const;
    KlmsParams klms_params() const;
    LinearParams linear_params() const;
    void validate() const;
};

void to_json(nlohmann::json& j, const FilterConfig& config);
void from_json(const nlohmann::json& j, FilterConfig& config);

// Uniform driver over the four filters. The kernel filters are created by
// their first sample; that step predicts 0.
class OnlineFilter {
public:
    OnlineFilter(FilterConfig config, std::size_t input_dim);

    StepOutput step(std::span<const double> u, double d);
    double predict(std::span<const double> u) const;
    std::size_t size() const;

    const FilterConfig& config() const noexcept { return config_; }
    bool started() const noexcept;

    // Model snapshot JSON; nullptr before the first sample.
    nlohmann::json snapshot(bool resume_exact = false) const;

    const RegKrls* krls() const noexcept { return std::get_if<RegKrls>(&state_); }
    const Klms* klms() const noexcept { return std::get_if<Klms>(&state_); }
    const LinearFilter* linear() const noexcept { return std::get_if<LinearFilter>(&state_); }

private:
    FilterConfig config_;
    std::size_t input_dim_;
    std::variant<std::monostate, RegKrls, Klms, LinearFilter> state_;
};

}  // namespace kaf
