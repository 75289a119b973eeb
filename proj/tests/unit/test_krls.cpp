#include "doctest.h"

#include <cmath>

#include <Eigen/Dense>

#include "kaf/errors.hpp"
#include "kaf/krls.hpp"
#include "kaf/oracle.hpp"
#include "kaf/random.hpp"

using namespace kaf;

namespace {

KrlsParams params(KernelSpec spec, double lambda, double delta) {
    KrlsParams p;
    p.kernel = spec;
    p.lambda = lambda;
    p.delta = delta;
    return p;
}

Vector random_point(Rng& rng, std::size_t dim, double r) {
    Vector v(dim);
    for (auto& x : v) x = rng.uniform(-r, r);
    return v;
}

double target(const Vector& u, Rng& rng) { return std::sin(u[0]) * std::cos(u[1]) + 0.1 * rng.normal(); }

Eigen::Map<const Eigen::VectorXd> view(const Vector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double rel_dev(const Vector& got, const Eigen::VectorXd& want) {
    return (view(got) - want).norm() / std::max(want.norm(), 1e-300);
}

// P (M Kd + lambda I) built densely from the filter state
Eigen::MatrixXd p_product(const RegKrls& f) {
    const Eigen::MatrixXd kd = oracle::to_eigen(f.dictionary().gram());
    Eigen::MatrixXd op = oracle::to_eigen(f.m()) * kd;
    op.diagonal().array() += f.params().lambda;
    return oracle::to_eigen(f.p()) * op;
}

void check_same_state(const RegKrls& a, const RegKrls& b) {
    CHECK(a.alpha() == b.alpha());
    CHECK(a.p() == b.p());
    CHECK(a.m() == b.m());
    CHECK(a.n() == b.n());
    CHECK(a.dictionary().centers() == b.dictionary().centers());
    CHECK(a.dictionary().gram() == b.dictionary().gram());
    CHECK(a.dictionary().gram_inv() == b.dictionary().gram_inv());
}

}  // namespace

TEST_CASE("init worked values") {
    const KernelSpec g = KernelSpec::gaussian(1.0);
    RegKrls f = RegKrls::init(params(g, 1.0, 0.01), Vector{0.2}, 2.0);
    CHECK(f.alpha() == Vector{1.0});
    CHECK(f.p()(0, 0) == 0.5);
    CHECK(f.m()(0, 0) == 1.0);
    CHECK(f.n() == 1);

    CHECK(RegKrls::init(params(g, 1.0, 0.01), Vector{0.2}, 0.0).alpha() == Vector{0.0});

    RegKrls q = RegKrls::init(params(KernelSpec::polynomial(1), 1.0, 0.01), Vector{1.0}, 3.0);
    CHECK(q.alpha()[0] == doctest::Approx(1.0));
    CHECK(q.p()(0, 0) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("init rejects bad parameters") {
    const KernelSpec g = KernelSpec::gaussian(1.0);
    for (double lambda : {0.0, -0.1, double(NAN)}) {
        try {
            RegKrls::init(params(g, lambda, 0.01), Vector{0.0}, 1.0);
            FAIL("expected a validation error");
        } catch (const ValidationError& e) {
            CHECK(e.field() == "lambda");
        }
    }
    CHECK_THROWS_AS(RegKrls::init(params(g, 0.1, -1.0), Vector{0.0}, 1.0), ValidationError);
    CHECK_THROWS_AS(RegKrls::init(params(g, 0.1, 0.0), Vector{0.0}, NAN), NumericalError);
    KrlsParams unreg = params(g, 0.0, 0.01);
    unreg.unregularized = true;
    CHECK(RegKrls::init(unreg, Vector{0.0}, 2.0).alpha() == Vector{2.0});
}

TEST_CASE("duplicate sample takes the rank-one branch") {
    RegKrls f = RegKrls::init(params(KernelSpec::gaussian(1.0), 1.0, 0.01), Vector{0.5}, 3.0);
    const StepOutput out = f.step(Vector{0.5}, 3.0);
    CHECK_FALSE(out.grew);
    CHECK(out.dict_size == 1);
    CHECK(out.y == doctest::Approx(1.5));
    CHECK(out.e == doctest::Approx(1.5));
    CHECK(f.alpha()[0] == doctest::Approx(2.0));
    CHECK(f.p()(0, 0) == doctest::Approx(1.0 / 3.0));
    CHECK(f.m()(0, 0) == 2.0);
    CHECK(f.unchanged_steps() == 1);
}

TEST_CASE("far second sample grows with alpha near (K + lambda I)^-1 d") {
    RegKrls f = RegKrls::init(params(KernelSpec::gaussian(1.0), 1.0, 0.5), Vector{0.0}, 1.0);
    const StepOutput out = f.step(Vector{10.0}, 1.0);
    CHECK(out.grew);
    CHECK(out.dict_size == 2);
    CHECK(f.alpha()[0] == doctest::Approx(0.5));
    CHECK(f.alpha()[1] == doctest::Approx(0.5));
    CHECK(f.p()(1, 1) == doctest::Approx(0.5));  // 1 / gamma, gamma = 2
    CHECK(f.grow_steps() == 1);
}

TEST_CASE("zero innovation") {
    Rng rng(1);
    RegKrls f = RegKrls::init(params(KernelSpec::gaussian(1.0), 0.1, 0.05), Vector{0.0, 0.0}, 0.3);
    for (int t = 0; t < 30; ++t) {
        const Vector u = random_point(rng, 2, 1.5);
        f.step(u, target(u, rng));
    }

    SUBCASE("unchanged branch keeps alpha and still moves P") {
        const Vector u = f.dictionary().centers().at(2);
        const Vector before = f.alpha();
        const DenseMatrix p_before = f.p();
        const StepOutput out = f.step(u, f.predict(u));
        CHECK_FALSE(out.grew);
        CHECK(std::abs(out.e) <= 1e-15);
        for (std::size_t i = 0; i < before.size(); ++i) CHECK(std::abs(f.alpha()[i] - before[i]) <= 1e-12);
        CHECK_FALSE(f.p() == p_before);
    }
    SUBCASE("growth branch appends a zero coefficient") {
        const Vector u{5.0, 5.0};
        const Vector before = f.alpha();
        const StepOutput out = f.step(u, f.predict(u));
        CHECK(out.grew);
        CHECK(out.e == 0.0);
        CHECK(f.alpha().back() == 0.0);
        for (std::size_t i = 0; i < before.size(); ++i) CHECK(f.alpha()[i] == before[i]);
    }
}

TEST_CASE("a-priori error uses the pre-update coefficients") {
    Rng rng(2);
    RegKrls f = RegKrls::init(params(KernelSpec::gaussian(1.0), 0.1, 0.01), Vector{0.0, 0.0}, 0.1);
    for (int t = 0; t < 50; ++t) {
        const Vector u = random_point(rng, 2, 1.5);
        const double d = target(u, rng);
        const double y = f.predict(u);
        const StepOutput out = f.step(u, d);
        CHECK(out.y == y);
        CHECK(out.e == d - y);
    }
}

TEST_CASE("property: recursive equals batch with both branches interleaved") {
    Rng rng(3);
    const KrlsParams p = params(KernelSpec::gaussian(1.0), 0.1, 0.01);
    Vector u0 = random_point(rng, 2, 1.5);
    double d0 = target(u0, rng);
    RegKrls f = RegKrls::init(p, u0, d0);
    oracle::BatchReplay replay(p.kernel, p.lambda, p.delta);
    replay.push(u0, d0);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
        const Vector u = random_point(rng, 2, 1.5);
        const double d = target(u, rng);
        const bool grew = f.step(u, d).grew;
        REQUIRE(grew == replay.push(u, d));
        worst = std::max(worst, rel_dev(f.alpha(), replay.solve().alpha));
    }
    CHECK(worst <= 1e-8);
    CHECK(f.grow_steps() >= 10);
    CHECK(f.unchanged_steps() >= 10);
}

TEST_CASE("property: repeated visits to one center approach its ridge solution") {
    Rng rng(4);
    const KrlsParams p = params(KernelSpec::gaussian(1.0), 0.1, 0.01);
    RegKrls f = RegKrls::init(p, Vector{0.0, 0.0}, 0.0);
    oracle::BatchReplay replay(p.kernel, p.lambda, p.delta);
    replay.push({0.0, 0.0}, 0.0);
    for (const Vector u : {Vector{2.0, 0.0}, Vector{0.0, 2.0}}) {
        f.step(u, 0.0);
        replay.push(u, 0.0);
    }
    const Vector c = f.dictionary().centers().at(1);
    for (int t = 0; t < 50; ++t) {
        f.step(c, 1.0);
        replay.push(c, 1.0);
        CHECK(rel_dev(f.alpha(), replay.solve().alpha) <= 1e-8);
    }
    CHECK(f.predict(c) > 0.95);
    CHECK(f.predict(c) < 1.0);
}

TEST_CASE("property: KRR limit with delta = 0") {
    Rng rng(5);
    const KrlsParams p = params(KernelSpec::gaussian(1.0), 0.1, 0.0);
    std::vector<Vector> xs;
    Vector ds;
    for (int t = 0; t < 60; ++t) {
        xs.push_back(random_point(rng, 2, 3.0));
        ds.push_back(target(xs.back(), rng));
    }
    RegKrls f = RegKrls::init(p, xs[0], ds[0]);
    for (std::size_t t = 1; t < xs.size(); ++t) CHECK(f.step(xs[t], ds[t]).grew);
    CHECK(f.dictionary().size() == xs.size());
    CHECK(rel_dev(f.alpha(), oracle::batch_krr(xs, ds, p.kernel, p.lambda)) <= 1e-8);
}

TEST_CASE("property: P invariant after every step and after each growth") {
    Rng rng(6);
    RegKrls f = RegKrls::init(params(KernelSpec::gaussian(1.0), 0.1, 0.01), Vector{0.0, 0.0}, 0.0);
    for (int t = 0; t < 200; ++t) {
        const Vector u = random_point(rng, 2, 1.5);
        const bool grew = f.step(u, target(u, rng)).grew;
        const double k = static_cast<double>(f.dictionary().size());
        const Eigen::MatrixXd prod = p_product(f);
        const double res = (prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).cwiseAbs().rowwise().sum().maxCoeff();
        CHECK(res <= 1e-6 * k);
        if (grew) CHECK(res <= 1e-8);
        CHECK(std::abs(res - f.p_invariant_residual()) <= 1e-12);
    }
}

TEST_CASE("property: failed steps leave the state bit-identical") {
    Rng rng(7);
    KrlsParams p = params(KernelSpec::gaussian(1.0), 0.1, 0.0);
    RegKrls f = RegKrls::init(p, Vector{0.0, 0.0}, 0.0);
    for (int t = 0; t < 20; ++t) {
        const Vector u = random_point(rng, 2, 3.0);
        f.step(u, target(u, rng));
    }
    const RegKrls saved = f;
    // delta = 0 admits anything with d2 > 0; 1e-7 away gives d2 ~ 1e-14, under the growth floor
    Vector near = f.dictionary().centers().at(3);
    near[0] += 1e-7;
    CHECK_THROWS_AS(f.step(near, 1.0), NumericalError);
    check_same_state(f, saved);
    CHECK_THROWS_AS(f.step(Vector{0.0}, 1.0), DimensionError);
    check_same_state(f, saved);
    CHECK_THROWS_AS(f.step(Vector{NAN, 0.0}, 1.0), NumericalError);
    check_same_state(f, saved);
    CHECK_THROWS_AS(f.step(Vector{0.0, 0.0}, INFINITY), NumericalError);
    check_same_state(f, saved);
    // still usable afterwards
    CHECK_NOTHROW(f.step(Vector{0.5, 0.5}, 0.2));
}

TEST_CASE("predict") {
    const KrlsParams p = params(KernelSpec::gaussian(1.0), 1.0, 0.01);
    const Vector c{0.3, 0.1};
    const RegKrls one = RegKrls::restore(p, Dictionary(p.kernel, c), {1.0}, std::nullopt, std::nullopt, 1);
    CHECK(one.predict(c) == 1.0);
    CHECK_FALSE(one.resumable());
    CHECK_THROWS_AS(one.predict(Vector{1.0}), DimensionError);

    Rng rng(8);
    std::vector<Vector> centers{c};
    for (int i = 0; i < 9; ++i) centers.push_back(random_point(rng, 2, 3.0));
    const Dictionary dict = Dictionary::from_centers(p.kernel, centers);
    const RegKrls zero = RegKrls::restore(p, dict, Vector(10, 0.0), std::nullopt, std::nullopt, 10);
    CHECK(zero.predict(random_point(rng, 2, 1.0)) == 0.0);

    Vector alpha(10);
    for (auto& a : alpha) a = rng.uniform(-1.0, 1.0);
    RegKrls any = RegKrls::restore(p, dict, alpha, std::nullopt, std::nullopt, 10);
    for (int t = 0; t < 20; ++t) {
        const Vector u = random_point(rng, 2, 3.0);
        double brute = 0.0;
        for (std::size_t i = 0; i < centers.size(); ++i) brute += alpha[i] * oracle::kernel(p.kernel, centers[i], u);
        CHECK(std::abs(any.predict(u) - brute) <= 1e-12);
        // f(u) = <f, k(u, .)>
        CHECK(std::abs(any.predict(u) - expansion_inner_product(p.kernel, {alpha, centers}, {{1.0}, {u}})) <= 1e-12);
    }
    CHECK_THROWS_AS(any.step(c, 1.0), ValidationError);
}
