#include "doctest.h"

#include <Eigen/Dense>

#include "kaf/errors.hpp"
#include "kaf/matrix.hpp"
#include "kaf/oracle.hpp"
#include "kaf/random.hpp"

using namespace kaf;

namespace {

DenseMatrix random_matrix(Rng& rng, std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.uniform(-1.0, 1.0);
    }
    return m;
}

Vector random_vector(Rng& rng, std::size_t n) {
    Vector v(n);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

Eigen::Map<const Eigen::VectorXd> view(const Vector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

TEST_CASE("grow keeps contents and zero-fills the new border") {
    DenseMatrix m(2);
    m(0, 0) = 1;
    m(0, 1) = 2;
    m(1, 0) = 3;
    m(1, 1) = 4;
    for (int k = 0; k < 20; ++k) m.grow();
    REQUIRE(m.dim() == 22);
    CHECK(m.stride() >= 22);
    CHECK(m(0, 0) == 1);
    CHECK(m(0, 1) == 2);
    CHECK(m(1, 0) == 3);
    CHECK(m(1, 1) == 4);
    for (std::size_t i = 0; i < 22; ++i) {
        for (std::size_t j = 0; j < 22; ++j) {
            if (i > 1 || j > 1) CHECK(m(i, j) == 0.0);
        }
    }
}

TEST_CASE("reserve grows geometrically") {
    DenseMatrix m(10);
    m.reserve(11);
    CHECK(m.stride() >= 20);
    const std::size_t s = m.stride();
    m.reserve(12);
    CHECK(m.stride() == s);
    CHECK(m.dim() == 10);
}

TEST_CASE("from_rows / to_rows round trip and shape check") {
    const std::vector<Vector> rows{{1, 2, 3}, {4, 5, 6}, {7, 8, 9}};
    const DenseMatrix m = DenseMatrix::from_rows(rows);
    CHECK(m.to_rows() == rows);
    CHECK_THROWS_AS(DenseMatrix::from_rows({{1, 2}, {3}}), DimensionError);
}

TEST_CASE("gemv, gemv_t, rank1_update, multiply match Eigen") {
    Rng rng(3);
    for (std::size_t n : {1u, 2u, 5u, 17u, 64u}) {
        CAPTURE(n);
        DenseMatrix a = random_matrix(rng, n);
        a.reserve(n + 3);  // stride differs from dim
        const Vector x = random_vector(rng, n);
        const Vector z = random_vector(rng, n);
        const Eigen::MatrixXd ea = oracle::to_eigen(a);

        Vector y(n), yt(n);
        gemv(a, x, y);
        gemv_t(a, x, yt);
        CHECK((view(y) - ea * view(x)).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK((view(yt) - ea.transpose() * view(x)).cwiseAbs().maxCoeff() <= 1e-13);
        CHECK(std::abs(dot(x, z) - view(x).dot(view(z))) <= 1e-13);

        DenseMatrix b = random_matrix(rng, n);
        const Eigen::MatrixXd prod = oracle::to_eigen(multiply(a, b));
        CHECK((prod - ea * oracle::to_eigen(b)).cwiseAbs().maxCoeff() <= 1e-12);

        rank1_update(a, 0.5, x, z);
        CHECK((oracle::to_eigen(a) - (ea + 0.5 * view(x) * view(z).transpose())).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("identity residual is the infinity norm of A - I") {
    DenseMatrix m = DenseMatrix::identity(3);
    CHECK(identity_residual_inf(m) == 0.0);
    m(0, 1) = -0.25;
    m(0, 2) = 0.5;
    m(2, 2) = 1.125;
    CHECK(identity_residual_inf(m) == doctest::Approx(0.75));
}
