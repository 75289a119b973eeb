#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "kaf/filter.hpp"
#include "kaf/kernels.hpp"
#include "kaf/matrix.hpp"

namespace kaf {

struct KlmsParams {
    KernelSpec kernel;
    double eta = 0.2;
    // Abort once the expansion would exceed this many terms; 0 means no cap.
    std::size_t max_centers = 0;

    void validate() const;
};

// Kernel least-mean-square filter: a growing RBF expansion
//
//   f(u) = sum_i coeffs[i] k(centers[i], u),  coeffs[i] = eta * e(i)
//
// Every sample adds one term. The first prediction is 0, so the first
// coefficient is eta * d(1).
class Klms {
public:
    static Klms init(const KlmsParams& params, std::span<const double> u, double d);
    static Klms restore(const KlmsParams& params, const std::vector<Vector>& centers, Vector coeffs);

    StepOutput step(std::span<const double> u, double d);
    double predict(std::span<const double> u) const;

    const KlmsParams& params() const noexcept { return params_; }
    const CenterSet& centers() const noexcept { return centers_; }
    const Vector& coeffs() const noexcept { return coeffs_; }
    std::size_t n() const noexcept { return coeffs_.size(); }

private:
    explicit Klms(const KlmsParams& params, std::size_t dim) : params_(params), centers_(dim) {}

    KlmsParams params_;
    CenterSet centers_;
    Vector coeffs_;
};

}  // namespace kaf
