#include "kaf/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "kaf/errors.hpp"
#include "kaf/simd/kernels.hpp"

namespace kaf {

DenseMatrix::DenseMatrix(std::size_t dim) : dim_(dim), capacity_(dim), data_(dim * dim, 0.0) {}

void DenseMatrix::reserve(std::size_t dim) {
    if (dim <= capacity_) return;
    dim = std::max({dim, 2 * capacity_, std::size_t{4}});
    std::vector<double> next(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) {
        std::copy_n(data_.data() + i * capacity_, dim_, next.data() + i * dim);
    }
    data_ = std::move(next);
    capacity_ = dim;
}

void DenseMatrix::grow() {
    reserve(dim_ + 1);
    const std::size_t k = dim_;
    ++dim_;
    for (std::size_t i = 0; i < dim_; ++i) {
        (*this)(i, k) = 0.0;
        (*this)(k, i) = 0.0;
    }
}

DenseMatrix DenseMatrix::identity(std::size_t dim) {
    DenseMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::from_rows(const std::vector<Vector>& rows) {
    DenseMatrix m(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows.size()) throw DimensionError("matrix rows must form a square matrix");
        std::copy(rows[i].begin(), rows[i].end(), m.row(i));
    }
    return m;
}

std::vector<Vector> DenseMatrix::to_rows() const {
    std::vector<Vector> rows(dim_);
    for (std::size_t i = 0; i < dim_; ++i) rows[i].assign(row(i), row(i) + dim_);
    return rows;
}

bool DenseMatrix::operator==(const DenseMatrix& other) const {
    if (dim_ != other.dim_) return false;
    for (std::size_t i = 0; i < dim_; ++i) {
        if (!std::equal(row(i), row(i) + dim_, other.row(i))) return false;
    }
    return true;
}

void gemv(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    const std::size_t k = a.dim();
    if (x.size() != k || y.size() != k) throw DimensionError("gemv: size mismatch");
    const auto& t = simd::active();
    for (std::size_t i = 0; i < k; ++i) y[i] = t.dot(a.row(i), x.data(), k);
}

void gemv_t(const DenseMatrix& a, std::span<const double> x, std::span<double> y) {
    const std::size_t k = a.dim();
    if (x.size() != k || y.size() != k) throw DimensionError("gemv_t: size mismatch");
    const auto& t = simd::active();
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < k; ++i) t.axpy(x[i], a.row(i), y.data(), k);
}

void rank1_update(DenseMatrix& a, double alpha, std::span<const double> x, std::span<const double> y) {
    const std::size_t k = a.dim();
    if (x.size() != k || y.size() != k) throw DimensionError("rank1_update: size mismatch");
    const auto& t = simd::active();
    for (std::size_t i = 0; i < k; ++i) t.axpy(alpha * x[i], y.data(), a.row(i), k);
}

double dot(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError("dot: size mismatch");
    return simd::active().dot(x.data(), y.data(), x.size());
}

DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.dim() != b.dim()) throw DimensionError("multiply: size mismatch");
    const std::size_t k = a.dim();
    DenseMatrix c(k);
    const auto& t = simd::active();
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t l = 0; l < k; ++l) t.axpy(a(i, l), b.row(l), c.row(i), k);
    }
    return c;
}

double identity_residual_inf(const DenseMatrix& a) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < a.dim(); ++j) sum += std::abs(a(i, j) - (i == j ? 1.0 : 0.0));
        worst = std::max(worst, sum);
    }
    return worst;
}

}  // namespace kaf
