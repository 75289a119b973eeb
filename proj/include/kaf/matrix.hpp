#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace kaf {

using Vector = std::vector<double>;

// Square row-major matrix whose dimension grows by one row and column at a
// time. Storage is reserved with a row stride equal to the capacity, which
// doubles when exhausted, so appending is amortized O(K).
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t dim);

    std::size_t dim() const noexcept { return dim_; }
    std::size_t stride() const noexcept { return capacity_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * capacity_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * capacity_ + j]; }

    double* row(std::size_t i) noexcept { return data_.data() + i * capacity_; }
    const double* row(std::size_t i) const noexcept { return data_.data() + i * capacity_; }

    // Appends a zero row and column.
    void grow();
    // Ensures storage for at least `dim` rows/columns (growing geometrically)
    // without changing dim().
    void reserve(std::size_t dim);

    static DenseMatrix identity(std::size_t dim);
    static DenseMatrix from_rows(const std::vector<Vector>& rows);
    std::vector<Vector> to_rows() const;

    bool operator==(const DenseMatrix& other) const;

private:
    std::size_t dim_ = 0;
    std::size_t capacity_ = 0;
    std::vector<double> data_;
};

// y = A x
void gemv(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
// y = A^T x
void gemv_t(const DenseMatrix& a, std::span<const double> x, std::span<double> y);
// A += alpha * x y^T
void rank1_update(DenseMatrix& a, double alpha, std::span<const double> x, std::span<const double> y);

double dot(std::span<const double> x, std::span<const double> y);

// C = A B (test and diagnostic use; O(K^3)).
DenseMatrix multiply(const DenseMatrix& a, const DenseMatrix& b);

// max_i sum_j |A_ij - I_ij|
double identity_residual_inf(const DenseMatrix& a);

}  // namespace kaf
