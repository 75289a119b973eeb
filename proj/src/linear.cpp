#include "kaf/linear.hpp"

#include <cmath>

#include "kaf/errors.hpp"
#include "kaf/kernels.hpp"

namespace kaf {

void LinearParams::validate() const {
    if (algorithm == LinearAlgorithm::lms && !(eta >= 0.0 && std::isfinite(eta))) {
        throw ValidationError("lms requires eta >= 0", "eta");
    }
    if (algorithm == LinearAlgorithm::rls && !(lambda > 0.0 && std::isfinite(lambda))) {
        throw ValidationError("rls requires lambda > 0", "lambda");
    }
}

LinearFilter::LinearFilter(const LinearParams& params, std::size_t input_dim)
    : params_(params), weights_(input_dim, 0.0) {
    params_.validate();
    if (input_dim == 0) throw DimensionError("linear filter: input dimension must be at least 1");
    if (params_.algorithm == LinearAlgorithm::rls) {
        p_ = DenseMatrix::identity(input_dim);
        for (std::size_t i = 0; i < input_dim; ++i) p_(i, i) = 1.0 / params_.lambda;
    }
}

LinearFilter LinearFilter::restore(const LinearParams& params, Vector weights, std::optional<DenseMatrix> p) {
    LinearFilter f(params, weights.size());
    require_finite(weights, "linear weights");
    f.weights_ = std::move(weights);
    if (params.algorithm == LinearAlgorithm::rls) {
        if (!p || p->dim() != f.weights_.size()) throw DimensionError("rls restore: P missing or of wrong size");
        f.p_ = std::move(*p);
    }
    return f;
}

double LinearFilter::predict(std::span<const double> u) const {
    if (u.size() != weights_.size()) throw DimensionError("linear predict: input dimension mismatch");
    require_finite(u, "linear input");
    return dot(weights_, u);
}

StepOutput LinearFilter::step(std::span<const double> u, double d) {
    if (!std::isfinite(d)) throw NumericalError("linear step: non-finite target");
    StepOutput out;
    out.y = predict(u);
    out.e = d - out.y;
    const std::size_t l = weights_.size();
    if (params_.algorithm == LinearAlgorithm::lms) {
        for (std::size_t i = 0; i < l; ++i) weights_[i] += params_.eta * out.e * u[i];
    } else {
        Vector pu(l);
        gemv(p_, u, pu);
        const double denom = 1.0 + dot(u, pu);
        if (!std::isfinite(denom) || denom <= 0.0) throw NumericalError("rls: lost positive definiteness");
        for (std::size_t i = 0; i < l; ++i) weights_[i] += pu[i] / denom * out.e;
        rank1_update(p_, -1.0 / denom, pu, pu);
    }
    ++n_;
    out.dict_size = 0;
    return out;
}

}  // namespace kaf
