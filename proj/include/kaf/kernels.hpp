#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "kaf/matrix.hpp"

namespace kaf {

enum class KernelFamily { gaussian, polynomial };

// Mercer kernel and its hyperparameters.
//
//   gaussian:   k(u, v) = exp(-|u - v|^2 / sigma^2)
//   polynomial: k(u, v) = (u.v + 1)^degree
//
// The Gaussian width divides by sigma^2, not the 2 sigma^2 found in many
// texts; sigma = s here matches sigma = s / sqrt(2) in that convention.
struct KernelSpec {
    KernelFamily family = KernelFamily::gaussian;
    double sigma = 1.0;
    int degree = 1;

    static KernelSpec gaussian(double sigma);
    static KernelSpec polynomial(int degree);

    // Throws ValidationError unless sigma > 0 (gaussian) / degree >= 1 (polynomial).
    void validate() const;

    bool operator==(const KernelSpec&) const = default;
};

void to_json(nlohmann::json& j, const KernelSpec& spec);
void from_json(const nlohmann::json& j, KernelSpec& spec);

// Throws NumericalError naming `what` if any entry is NaN or infinite.
void require_finite(std::span<const double> values, const char* what);

// k(u, v). Checks dimensions and finiteness.
double eval(const KernelSpec& spec, std::span<const double> u, std::span<const double> v);

// k(u, v) without boundary checks. Interior hot paths only.
double eval_unchecked(const KernelSpec& spec, std::span<const double> u, std::span<const double> v);

// [k(p_i, p_j)]_ij for a nonempty point set of uniform dimension.
DenseMatrix gram(const KernelSpec& spec, const std::vector<Vector>& points);

// f(.) = sum_i coeffs[i] k(centers[i], .)
struct Expansion {
    Vector coeffs;
    std::vector<Vector> centers;
};

// <h, g> = sum_ij a_i b_j k(c_i, c~_j) in the kernel's RKHS.
double expansion_inner_product(const KernelSpec& spec, const Expansion& h, const Expansion& g);

// Input vectors of one fixed dimension stored column-wise (one contiguous
// array per coordinate), so a kernel against every stored point is a run of
// element-wise passes.
class CenterSet {
public:
    explicit CenterSet(std::size_t dim = 0) : columns_(dim) {}

    std::size_t dim() const noexcept { return columns_.size(); }
    std::size_t size() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }

    void push_back(std::span<const double> u);
    Vector at(std::size_t i) const;
    std::vector<Vector> to_rows() const;
    const double* column(std::size_t j) const noexcept { return columns_[j].data(); }

    bool operator==(const CenterSet&) const = default;

private:
    std::vector<Vector> columns_;
};

// out[i] = k(centers[i], u). `out` must have centers.size() entries; u is
// assumed finite and of matching dimension.
void kernel_vector(const KernelSpec& spec, const CenterSet& centers, std::span<const double> u,
                   std::span<double> out);

}  // namespace kaf
