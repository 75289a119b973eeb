#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "kaf/kernels.hpp"
#include "kaf/matrix.hpp"

namespace kaf {

// Outcome of the approximate-linear-dependency test of one input against
// the current dictionary.
struct AldResult {
    Vector h;            // h_i = k(c_i, u)
    Vector a;            // least-squares expansion coefficients, Kinv * h
    double kuu = 0.0;    // k(u, u)
    double d2 = 0.0;     // residual, clamped at 0
    double d2_raw = 0.0; // residual before clamping
    bool admitted = false;
};

// Ordered center dictionary with its Gram matrix and a maintained inverse.
class Dictionary {
public:
    static constexpr double kDefaultGrowthFloor = 1e-12;

    // The first input always becomes the first center.
    Dictionary(const KernelSpec& spec, std::span<const double> first);

    // Rebuilds gram and its inverse by re-admitting `centers` in order.
    static Dictionary from_centers(const KernelSpec& spec, const std::vector<Vector>& centers);

    // Adopts stored matrices after checking gram against the centers
    // (1e-12) and gram * gram_inv against I (1e-8, infinity norm).
    static Dictionary from_parts(const KernelSpec& spec, const std::vector<Vector>& centers, DenseMatrix gram,
                                 DenseMatrix gram_inv);

    // Read-only. Admits when the clamped residual exceeds `delta`.
    AldResult ald_test(std::span<const double> u, double delta) const;

    // Appends u. Throws NumericalError if ald.d2_raw is below the growth
    // floor; the dictionary is unchanged in that case.
    void grow(std::span<const double> u, const AldResult& ald);

    std::size_t size() const noexcept { return centers_.size(); }
    std::size_t input_dim() const noexcept { return centers_.dim(); }
    const KernelSpec& spec() const noexcept { return spec_; }
    const CenterSet& centers() const noexcept { return centers_; }
    const DenseMatrix& gram() const noexcept { return gram_; }
    const DenseMatrix& gram_inv() const noexcept { return gram_inv_; }

    double growth_floor() const noexcept { return growth_floor_; }
    void set_growth_floor(double floor) noexcept { growth_floor_ = floor; }

    // FNV-1a over the raw bytes of the centers in row order.
    std::uint64_t centers_checksum() const;

private:
    Dictionary(const KernelSpec& spec, std::size_t dim) : spec_(spec), centers_(dim) {}

    KernelSpec spec_;
    CenterSet centers_;
    DenseMatrix gram_;
    DenseMatrix gram_inv_;
    double growth_floor_ = kDefaultGrowthFloor;
};

std::uint64_t checksum_rows(const std::vector<Vector>& rows);

}  // namespace kaf
