#include "kaf/krls.hpp"

#include <cmath>
#include <sstream>

#include "kaf/errors.hpp"

namespace kaf {

void KrlsParams::validate() const {
    kernel.validate();
    if (!std::isfinite(lambda) || lambda < 0.0 || (lambda == 0.0 && !unregularized)) {
        throw ValidationError("krls-ald-reg requires lambda > 0 (lambda = 0 needs the unregularized flag)",
                              "lambda");
    }
    if (!(delta >= 0.0)) throw ValidationError("krls-ald-reg requires delta >= 0", "delta");
    if (!(degeneracy_floor >= 0.0)) throw ValidationError("degeneracy floor must be >= 0", "degeneracy_floor");
}

RegKrls RegKrls::init(const KrlsParams& params, std::span<const double> u, double d) {
    params.validate();
    if (!std::isfinite(d)) throw NumericalError("krls init: non-finite target");
    RegKrls f(params, Dictionary(params.kernel, u));
    const double k11 = f.dict_.gram()(0, 0);
    const double denom = k11 + params.lambda;
    f.p_ = DenseMatrix(1);
    f.p_(0, 0) = 1.0 / denom;
    f.m_ = DenseMatrix(1);
    f.m_(0, 0) = 1.0;
    f.alpha_ = {d / denom};
    f.n_ = 1;
    return f;
}

RegKrls RegKrls::restore(const KrlsParams& params, Dictionary dict, Vector alpha, std::optional<DenseMatrix> p,
                         std::optional<DenseMatrix> m, std::size_t n) {
    params.validate();
    if (!(dict.spec() == params.kernel)) throw ValidationError("restore: dictionary kernel differs from params");
    const std::size_t k = dict.size();
    if (alpha.size() != k) throw DimensionError("restore: alpha length does not match dictionary size");
    if (p.has_value() != m.has_value()) throw ValidationError("restore: P and M must be given together");
    if (p && (p->dim() != k || m->dim() != k)) throw DimensionError("restore: P/M size does not match dictionary");
    require_finite(alpha, "restore alpha");
    RegKrls f(params, std::move(dict));
    f.alpha_ = std::move(alpha);
    f.n_ = n;
    if (p) {
        f.p_ = std::move(*p);
        f.m_ = std::move(*m);
    } else {
        f.resumable_ = false;
    }
    return f;
}

StepOutput RegKrls::step(std::span<const double> u, double d) {
    if (!resumable_) throw ValidationError("krls: restored without P and M; cannot continue training");
    if (!std::isfinite(d)) throw NumericalError("krls step: non-finite target");
    AldResult ald = dict_.ald_test(u, params_.delta);
    const std::size_t k = dict_.size();

    StepOutput out;
    out.y = dot(ald.h, alpha_);
    out.e = d - out.y;

    if (!ald.admitted) {
        Vector s(k), pa(k), r(k);
        gemv(dict_.gram(), ald.a, s);  // s = Kd a
        gemv(p_, ald.a, pa);
        const double denom = 1.0 + dot(s, pa);
        if (!std::isfinite(denom) || std::abs(denom) <= floor()) {
            std::ostringstream msg;
            msg << "krls: degenerate rank-one denominator " << denom << " at step " << n_ + 1;
            throw NumericalError(msg.str());
        }
        gemv_t(p_, s, r);  // r^T = s^T P
        const double innovation = d - dot(s, alpha_);

        // Commit.
        for (std::size_t i = 0; i < k; ++i) alpha_[i] += pa[i] / denom * innovation;
        rank1_update(p_, -1.0 / denom, pa, r);
        rank1_update(m_, 1.0, ald.a, ald.a);
        ++unchanged_steps_;
    } else {
        if (!(ald.d2_raw >= dict_.growth_floor())) {
            std::ostringstream msg;
            msg << "krls: near-singular dictionary extension (residual " << ald.d2_raw << ") at step " << n_ + 1;
            throw NumericalError(msg.str());
        }
        Vector mh(k), z_a(k), z(k);
        gemv(m_, ald.h, mh);
        gemv(p_, mh, z_a);     // z_A = P M h
        gemv_t(p_, ald.h, z);  // z = P^T h
        const double gamma = params_.lambda + ald.kuu - dot(ald.h, z_a);
        if (!std::isfinite(gamma) || std::abs(gamma) <= floor()) {
            std::ostringstream msg;
            msg << "krls: degenerate Schur complement " << gamma << " at step " << n_ + 1;
            throw NumericalError(msg.str());
        }
        p_.reserve(k + 1);
        m_.reserve(k + 1);
        if (alpha_.size() == alpha_.capacity()) alpha_.reserve(2 * k + 8);

        // Commit. P <- (1/gamma) [[gamma P + z_A z^T, -z_A], [-z^T, 1]]
        rank1_update(p_, 1.0 / gamma, z_a, z);
        p_.grow();
        for (std::size_t i = 0; i < k; ++i) {
            p_(i, k) = -z_a[i] / gamma;
            p_(k, i) = -z[i] / gamma;
        }
        p_(k, k) = 1.0 / gamma;

        const double scaled = out.e / gamma;
        for (std::size_t i = 0; i < k; ++i) alpha_[i] -= z_a[i] * scaled;
        alpha_.push_back(scaled);

        m_.grow();
        m_(k, k) = 1.0;
        dict_.grow(u, ald);
        out.grew = true;
        ++grow_steps_;
    }
    ++n_;
    out.dict_size = dict_.size();
    return out;
}

double RegKrls::predict(std::span<const double> u) const {
    if (u.size() != dict_.input_dim()) throw DimensionError("krls predict: input dimension mismatch");
    require_finite(u, "krls predict input");
    Vector h(dict_.size());
    kernel_vector(dict_.spec(), dict_.centers(), u, h);
    return dot(h, alpha_);
}

double RegKrls::p_invariant_residual() const {
    DenseMatrix op = multiply(m_, dict_.gram());
    for (std::size_t i = 0; i < op.dim(); ++i) op(i, i) += params_.lambda;
    return identity_residual_inf(multiply(p_, op));
}

}  // namespace kaf
