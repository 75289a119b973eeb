#include "kaf/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "kaf/errors.hpp"

namespace kaf {

namespace {

double norm_inf(const DenseMatrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m.dim(); ++j) sum += std::abs(m(i, j));
        worst = std::max(worst, sum);
    }
    return worst;
}

}  // namespace

Dictionary::Dictionary(const KernelSpec& spec, std::span<const double> first)
    : spec_(spec), centers_(first.size()), gram_(1), gram_inv_(1) {
    spec_.validate();
    if (first.empty()) throw DimensionError("dictionary: input dimension must be at least 1");
    require_finite(first, "dictionary input");
    const double k11 = eval_unchecked(spec_, first, first);
    if (!(k11 > 0.0)) throw NumericalError("dictionary: k(u, u) must be positive for the first center");
    centers_.push_back(first);
    gram_(0, 0) = k11;
    gram_inv_(0, 0) = 1.0 / k11;
}

Dictionary Dictionary::from_centers(const KernelSpec& spec, const std::vector<Vector>& centers) {
    if (centers.empty()) throw ValidationError("dictionary needs at least one center", "centers");
    Dictionary dict(spec, centers.front());
    for (std::size_t i = 1; i < centers.size(); ++i) {
        AldResult ald = dict.ald_test(centers[i], 0.0);
        ald.admitted = true;
        dict.grow(centers[i], ald);
    }
    return dict;
}

Dictionary Dictionary::from_parts(const KernelSpec& spec, const std::vector<Vector>& centers, DenseMatrix gram,
                                  DenseMatrix gram_inv) {
    spec.validate();
    if (centers.empty()) throw ValidationError("dictionary needs at least one center", "centers");
    const std::size_t k = centers.size();
    if (gram.dim() != k || gram_inv.dim() != k) throw DimensionError("dictionary: stored matrices do not match centers");
    Dictionary dict(spec, centers.front().size());
    for (const auto& c : centers) dict.centers_.push_back(c);
    const DenseMatrix expected = kaf::gram(spec, centers);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!(std::abs(expected(i, j) - gram(i, j)) <= 1e-12)) {
                throw ValidationError("dictionary: stored gram does not match centers", "gram");
            }
        }
    }
    if (!(identity_residual_inf(multiply(gram, gram_inv)) <= 1e-8)) {
        throw ValidationError("dictionary: stored gram_inv is not the inverse of gram", "gram_inv");
    }
    dict.gram_ = std::move(gram);
    dict.gram_inv_ = std::move(gram_inv);
    return dict;
}

AldResult Dictionary::ald_test(std::span<const double> u, double delta) const {
    if (u.size() != input_dim()) throw DimensionError("ald_test: input dimension does not match dictionary");
    require_finite(u, "ald_test input");
    if (!(delta >= 0.0)) throw ValidationError("ald_test: delta must be nonnegative", "delta");
    const std::size_t k = size();
    AldResult r;
    r.h.resize(k);
    r.a.resize(k);
    kernel_vector(spec_, centers_, u, r.h);
    gemv(gram_inv_, r.h, r.a);
    r.kuu = eval_unchecked(spec_, u, u);
    r.d2_raw = r.kuu - dot(r.h, r.a);
    if (!std::isfinite(r.d2_raw)) {
        std::ostringstream msg;
        msg << "ald_test: non-finite residual; gram condition estimate "
            << norm_inf(gram_) * norm_inf(gram_inv_);
        throw NumericalError(msg.str());
    }
    r.d2 = std::max(r.d2_raw, 0.0);
    r.admitted = r.d2 > delta;
    return r;
}

void Dictionary::grow(std::span<const double> u, const AldResult& ald) {
    const std::size_t k = size();
    if (u.size() != input_dim()) throw DimensionError("grow: input dimension does not match dictionary");
    if (ald.h.size() != k || ald.a.size() != k) throw DimensionError("grow: ALD result was computed elsewhere");
    if (!ald.admitted) throw ValidationError("grow: ALD result does not admit the input");
    if (!(ald.d2_raw >= growth_floor_)) {
        std::ostringstream msg;
        msg << "grow: near-singular extension, residual " << ald.d2_raw << " below floor " << growth_floor_;
        throw NumericalError(msg.str());
    }

    gram_.reserve(k + 1);
    gram_inv_.reserve(k + 1);

    // [[Kinv + a a^T / d2, -a / d2], [-a^T / d2, 1 / d2]]
    const double d2 = ald.d2_raw;
    rank1_update(gram_inv_, 1.0 / d2, ald.a, ald.a);
    gram_inv_.grow();
    for (std::size_t i = 0; i < k; ++i) {
        gram_inv_(i, k) = -ald.a[i] / d2;
        gram_inv_(k, i) = -ald.a[i] / d2;
    }
    gram_inv_(k, k) = 1.0 / d2;

    gram_.grow();
    for (std::size_t i = 0; i < k; ++i) {
        gram_(i, k) = ald.h[i];
        gram_(k, i) = ald.h[i];
    }
    gram_(k, k) = ald.kuu;
    centers_.push_back(u);
}

std::uint64_t checksum_rows(const std::vector<Vector>& rows) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const auto& row : rows) {
        for (double v : row) {
            unsigned char bytes[sizeof(double)];
            std::memcpy(bytes, &v, sizeof(double));
            for (unsigned char b : bytes) {
                hash ^= b;
                hash *= 0x100000001b3ULL;
            }
        }
    }
    return hash;
}

std::uint64_t Dictionary::centers_checksum() const { return checksum_rows(centers_.to_rows()); }

}  // namespace kaf
