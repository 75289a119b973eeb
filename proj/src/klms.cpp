#include "kaf/klms.hpp"

#include <cmath>
#include <string>

#include "kaf/errors.hpp"
#include "kaf/simd/kernels.hpp"

namespace kaf {

void KlmsParams::validate() const {
    kernel.validate();
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("klms requires eta > 0", "eta");
}

Klms Klms::init(const KlmsParams& params, std::span<const double> u, double d) {
    params.validate();
    if (u.empty()) throw DimensionError("klms: input dimension must be at least 1");
    require_finite(u, "klms input");
    if (!std::isfinite(d)) throw NumericalError("klms init: non-finite target");
    Klms f(params, u.size());
    f.centers_.push_back(u);
    f.coeffs_.push_back(params.eta * d);
    return f;
}

Klms Klms::restore(const KlmsParams& params, const std::vector<Vector>& centers, Vector coeffs) {
    params.validate();
    if (centers.empty()) throw ValidationError("klms restore: no centers", "centers");
    if (centers.size() != coeffs.size()) throw DimensionError("klms restore: centers and coeffs differ in length");
    require_finite(coeffs, "klms coeffs");
    Klms f(params, centers.front().size());
    for (const auto& c : centers) {
        require_finite(c, "klms center");
        f.centers_.push_back(c);
    }
    f.coeffs_ = std::move(coeffs);
    return f;
}

double Klms::predict(std::span<const double> u) const {
    if (u.size() != centers_.dim()) throw DimensionError("klms predict: input dimension mismatch");
    require_finite(u, "klms input");
    Vector k(coeffs_.size());
    kernel_vector(params_.kernel, centers_, u, k);
    return simd::active().dot(k.data(), coeffs_.data(), coeffs_.size());
}

StepOutput Klms::step(std::span<const double> u, double d) {
    if (!std::isfinite(d)) throw NumericalError("klms step: non-finite target");
    if (params_.max_centers != 0 && coeffs_.size() >= params_.max_centers) {
        throw CapacityError("klms: expansion reached max_centers = " + std::to_string(params_.max_centers));
    }
    StepOutput out;
    out.y = predict(u);
    out.e = d - out.y;
    if (coeffs_.size() == coeffs_.capacity()) coeffs_.reserve(2 * coeffs_.size() + 8);
    centers_.push_back(u);
    coeffs_.push_back(params_.eta * out.e);
    out.grew = true;
    out.dict_size = coeffs_.size();
    return out;
}

}  // namespace kaf
