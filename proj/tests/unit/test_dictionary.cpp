#include "doctest.h"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "kaf/dictionary.hpp"
#include "kaf/errors.hpp"
#include "kaf/oracle.hpp"
#include "kaf/random.hpp"

using namespace kaf;

namespace {

Vector random_point(Rng& rng, std::size_t dim, double r = 1.0) {
    Vector v(dim);
    for (auto& x : v) x = rng.uniform(-r, r);
    return v;
}

double max_abs_diff(const DenseMatrix& a, const Eigen::MatrixXd& b) {
    return (oracle::to_eigen(a) - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("ald: input already in the dictionary") {
    for (const KernelSpec& spec : {KernelSpec::gaussian(1.0), KernelSpec::polynomial(1), KernelSpec::polynomial(2)}) {
        const Vector c{0.4, -0.7};
        const Dictionary dict(spec, c);
        for (double delta : {0.0, 0.01, 1.0}) {
            const AldResult r = dict.ald_test(c, delta);
            CHECK(r.a.size() == 1);
            CHECK(r.a[0] == doctest::Approx(1.0));
            CHECK(r.d2 <= 1e-12);
            CHECK_FALSE(r.admitted);
        }
    }
}

TEST_CASE("ald: gaussian worked case") {
    const Dictionary dict(KernelSpec::gaussian(1.0), Vector{0.0});
    const AldResult r = dict.ald_test(Vector{2.0}, 0.01);
    CHECK(r.h[0] == doctest::Approx(std::exp(-4.0)));
    CHECK(r.a[0] == doctest::Approx(std::exp(-4.0)));
    CHECK(r.d2 == doctest::Approx(1.0 - std::exp(-8.0)).epsilon(1e-14));
    CHECK(r.d2 == doctest::Approx(0.99966).epsilon(1e-5));
    CHECK(r.kuu == 1.0);
    CHECK(r.admitted);
}

TEST_CASE("ald: polynomial p=1 worked case agrees with explicit features") {
    const Dictionary dict(KernelSpec::polynomial(1), Vector{1.0});
    CHECK(dict.gram()(0, 0) == 2.0);
    const AldResult r = dict.ald_test(Vector{3.0}, 0.5);
    CHECK(r.h[0] == 4.0);
    CHECK(r.a[0] == doctest::Approx(2.0));
    CHECK(r.d2 == doctest::Approx(2.0));
    CHECK(r.admitted);
    // phi(1) = [1,1], phi(3) = [3,1]; least-squares residual of [3,1] on [1,1]
    CHECK(oracle::feature_space_residual({{1.0}}, {3.0}, 1) == doctest::Approx(2.0));
}

TEST_CASE("ald: errors") {
    const Dictionary dict(KernelSpec::gaussian(1.0), Vector{0.0, 0.0});
    CHECK_THROWS_AS(dict.ald_test(Vector{1.0}, 0.1), DimensionError);
    CHECK_THROWS_AS(dict.ald_test(Vector{NAN, 0.0}, 0.1), NumericalError);
    CHECK_THROWS_AS(dict.ald_test(Vector{0.0, 1.0}, -0.1), ValidationError);
}

TEST_CASE("grow: worked case") {
    Dictionary dict(KernelSpec::gaussian(1.0), Vector{0.0});
    const AldResult r = dict.ald_test(Vector{2.0}, 0.01);
    dict.grow(Vector{2.0}, r);
    REQUIRE(dict.size() == 2);
    CHECK(dict.gram()(0, 0) == 1.0);
    CHECK(dict.gram()(1, 1) == 1.0);
    CHECK(dict.gram()(0, 1) == std::exp(-4.0));
    CHECK(dict.gram()(1, 0) == std::exp(-4.0));
    CHECK(identity_residual_inf(multiply(dict.gram_inv(), dict.gram())) <= 1e-10);
}

TEST_CASE("grow: refuses a near-singular extension and stays unchanged") {
    Dictionary dict(KernelSpec::gaussian(1.0), Vector{0.0});
    const AldResult dup = dict.ald_test(Vector{0.0}, 0.0);
    CHECK_THROWS_AS(dict.grow(Vector{0.0}, dup), ValidationError);  // not admitted

    AldResult forced = dup;
    forced.admitted = true;
    const DenseMatrix g = dict.gram(), gi = dict.gram_inv();
    CHECK_THROWS_AS(dict.grow(Vector{0.0}, forced), NumericalError);
    CHECK(dict.size() == 1);
    CHECK(dict.gram() == g);
    CHECK(dict.gram_inv() == gi);

    // 1e-7 apart: d2 ~ 1e-14, below the default floor
    const AldResult tiny = dict.ald_test(Vector{1e-7}, 0.0);
    CHECK(tiny.admitted);
    CHECK_THROWS_AS(dict.grow(Vector{1e-7}, tiny), NumericalError);
    dict.set_growth_floor(0.0);
    CHECK_NOTHROW(dict.grow(Vector{1e-7}, tiny));
}

TEST_CASE("property: gram_inv tracks dense inversion on a random stream") {
    Rng rng(7);
    const KernelSpec spec = KernelSpec::gaussian(1.0);
    Dictionary dict(spec, random_point(rng, 2, 2.0));
    std::size_t grown = 0;
    for (int t = 0; t < 100; ++t) {
        const Vector u = random_point(rng, 2, 2.0);
        const AldResult r = dict.ald_test(u, 0.1);
        if (!r.admitted) continue;
        dict.grow(u, r);
        ++grown;
        const Eigen::MatrixXd dense = oracle::to_eigen(dict.gram()).inverse();
        CHECK(max_abs_diff(dict.gram_inv(), dense) <= 1e-8);
        CHECK(max_abs_diff(dict.gram(), oracle::gram(spec, dict.centers().to_rows())) <= 1e-12);
    }
    CHECK(grown > 5);
}

TEST_CASE("property: every center tests as exactly represented") {
    Rng rng(8);
    Dictionary dict(KernelSpec::gaussian(0.8), random_point(rng, 3));
    for (int t = 0; t < 60; ++t) {
        const Vector u = random_point(rng, 3);
        const AldResult r = dict.ald_test(u, 0.05);
        if (r.admitted) dict.grow(u, r);
    }
    REQUIRE(dict.size() > 3);
    for (std::size_t i = 0; i < dict.size(); ++i) {
        const AldResult r = dict.ald_test(dict.centers().at(i), 0.0);
        CHECK(r.d2 <= 1e-10);
        for (std::size_t j = 0; j < dict.size(); ++j) CHECK(std::abs(r.a[j] - (i == j ? 1.0 : 0.0)) <= 1e-8);
    }
}

TEST_CASE("property: d2 equals the explicit feature-space residual") {
    Rng rng(9);
    for (int p : {1, 2}) {
        for (std::size_t dim = 1; dim <= 3; ++dim) {
            const KernelSpec spec = KernelSpec::polynomial(p);
            const std::size_t feature_dim = p == 1 ? dim + 1 : (dim + 1) * (dim + 2) / 2;
            Dictionary dict(spec, random_point(rng, dim));
            // keep the Gram well conditioned: admit only clearly new directions
            for (int t = 0; t < 200 && dict.size() + 1 < feature_dim; ++t) {
                const Vector u = random_point(rng, dim);
                const AldResult r = dict.ald_test(u, 0.05);
                if (r.admitted) dict.grow(u, r);
            }
            for (int t = 0; t < 20; ++t) {
                const Vector u = random_point(rng, dim);
                const double expected = oracle::feature_space_residual(dict.centers().to_rows(), u, p);
                CAPTURE(p);
                CAPTURE(dim);
                CHECK(std::abs(dict.ald_test(u, 0.0).d2_raw - expected) <= 1e-10);
            }
        }
    }
}

TEST_CASE("property: dictionary size at the delta extremes") {
    Rng rng(10);
    std::vector<Vector> stream;
    for (int t = 0; t < 60; ++t) stream.push_back(random_point(rng, 2, 3.0));
    const KernelSpec spec = KernelSpec::gaussian(1.0);

    Dictionary never(spec, stream[0]);
    Dictionary always(spec, stream[0]);
    for (std::size_t t = 1; t < stream.size(); ++t) {
        const AldResult r = never.ald_test(stream[t], std::numeric_limits<double>::infinity());
        CHECK_FALSE(r.admitted);
        const AldResult s = always.ald_test(stream[t], 0.0);
        REQUIRE(s.admitted);
        always.grow(stream[t], s);
    }
    CHECK(never.size() == 1);
    CHECK(always.size() == stream.size());
}

TEST_CASE("from_centers and from_parts rebuild the same dictionary") {
    Rng rng(11);
    const KernelSpec spec = KernelSpec::gaussian(1.0);
    Dictionary dict(spec, random_point(rng, 2, 2.0));
    for (int t = 0; t < 40; ++t) {
        const Vector u = random_point(rng, 2, 2.0);
        const AldResult r = dict.ald_test(u, 0.05);
        if (r.admitted) dict.grow(u, r);
    }
    const auto rows = dict.centers().to_rows();
    const Dictionary again = Dictionary::from_centers(spec, rows);
    CHECK(again.centers() == dict.centers());
    CHECK(again.gram() == dict.gram());
    CHECK(again.gram_inv() == dict.gram_inv());
    CHECK(again.centers_checksum() == dict.centers_checksum());
    CHECK(checksum_rows(rows) == dict.centers_checksum());

    const Dictionary parts = Dictionary::from_parts(spec, rows, dict.gram(), dict.gram_inv());
    CHECK(parts.gram_inv() == dict.gram_inv());

    DenseMatrix bad_inv = dict.gram_inv();
    bad_inv(0, 0) += 1e-3;
    CHECK_THROWS_AS(Dictionary::from_parts(spec, rows, dict.gram(), bad_inv), ValidationError);
    DenseMatrix bad_gram = dict.gram();
    bad_gram(0, 1) += 1e-6;
    CHECK_THROWS(Dictionary::from_parts(spec, rows, bad_gram, dict.gram_inv()));

    auto moved = rows;
    moved[0][0] += 1e-9;
    CHECK(checksum_rows(moved) != dict.centers_checksum());
}
