#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "kaf/filter.hpp"
#include "kaf/matrix.hpp"

namespace kaf {

enum class LinearAlgorithm { lms, rls };

struct LinearParams {
    LinearAlgorithm algorithm = LinearAlgorithm::lms;
    double eta = 0.2;     // LMS step size
    double lambda = 0.1;  // RLS initial inverse correlation is I / lambda

    void validate() const;
};

// Linear transversal filter y = w^T u with the textbook LMS or RLS
// (forgetting factor 1) weight update. Weights start at zero.
//
// With P(0) = I / lambda the RLS weights after n samples equal the ridge
// solution (U^T U + lambda I)^-1 U^T d.
class LinearFilter {
public:
    LinearFilter(const LinearParams& params, std::size_t input_dim);

    static LinearFilter restore(const LinearParams& params, Vector weights, std::optional<DenseMatrix> p);

    StepOutput step(std::span<const double> u, double d);
    double predict(std::span<const double> u) const;

    const LinearParams& params() const noexcept { return params_; }
    const Vector& weights() const noexcept { return weights_; }
    // RLS inverse correlation matrix; empty for LMS.
    const DenseMatrix& p() const noexcept { return p_; }
    std::size_t n() const noexcept { return n_; }

private:
    LinearParams params_;
    Vector weights_;
    DenseMatrix p_;
    std::size_t n_ = 0;
};

}  // namespace kaf
