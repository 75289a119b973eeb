#pragma once

#include <optional>
#include <span>
#include <utility>

#include "kaf/dictionary.hpp"
#include "kaf/filter.hpp"
#include "kaf/kernels.hpp"
#include "kaf/matrix.hpp"

namespace kaf {

struct KrlsParams {
    KernelSpec kernel;
    double lambda = 0.1;
    // Admission threshold compared directly against the ALD residual d2.
    // Pass delta^2 to reproduce a threshold stated on the residual norm.
    double delta = 0.01;
    // Permits lambda = 0 and relaxes the degeneracy floors to exact zero.
    bool unregularized = false;
    double degeneracy_floor = 1e-12;

    void validate() const;
};

// Regularized kernel RLS with approximate-linear-dependency sparsification.
//
// Maintains, for dictionary Gram matrix Kd and the (implicit) sample-to-
// dictionary coefficient matrix A,
//
//   M     = A^T A
//   P     = (M Kd + lambda I)^-1
//   alpha = P A^T d
//
// When the new input is approximately dependent on the dictionary, A gains
// the row a = Kd^-1 h and P takes a rank-one update. Otherwise the input is
// appended as a center, A gains an indicator row (old rows padded with 0),
// and P is extended with the block-inverse identity. Both branches cost
// O(K^2) for K centers.
//
// A step either fully succeeds or throws with the state untouched.
class RegKrls {
public:
    static RegKrls init(const KrlsParams& params, std::span<const double> u, double d);

    // Reassembles a filter from stored parts. Without P and M the filter can
    // predict but not step.
    static RegKrls restore(const KrlsParams& params, Dictionary dict, Vector alpha, std::optional<DenseMatrix> p,
                           std::optional<DenseMatrix> m, std::size_t n);

    StepOutput step(std::span<const double> u, double d);
    double predict(std::span<const double> u) const;

    const KrlsParams& params() const noexcept { return params_; }
    const Dictionary& dictionary() const noexcept { return dict_; }
    const Vector& alpha() const noexcept { return alpha_; }
    const DenseMatrix& p() const noexcept { return p_; }
    const DenseMatrix& m() const noexcept { return m_; }
    std::size_t n() const noexcept { return n_; }
    bool resumable() const noexcept { return resumable_; }

    // Counts of how each step was handled since init.
    std::size_t grow_steps() const noexcept { return grow_steps_; }
    std::size_t unchanged_steps() const noexcept { return unchanged_steps_; }

    // || P (M Kd + lambda I) - I ||_inf. O(K^3).
    double p_invariant_residual() const;

private:
    RegKrls(const KrlsParams& params, Dictionary dict) : params_(params), dict_(std::move(dict)) {}

    double floor() const noexcept { return params_.unregularized ? 0.0 : params_.degeneracy_floor; }

    KrlsParams params_;
    Dictionary dict_;
    Vector alpha_;
    DenseMatrix p_;
    DenseMatrix m_;
    std::size_t n_ = 0;
    bool resumable_ = true;
    std::size_t grow_steps_ = 0;
    std::size_t unchanged_steps_ = 0;
};

}  // namespace kaf
