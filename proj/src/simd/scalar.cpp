#include "kaf/simd/kernels.hpp"

namespace kaf::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void sub_sq_accumulate(const double* col, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double diff = col[i] - s;
        out[i] += diff * diff;
    }
}

}  // namespace kaf::simd::scalar
