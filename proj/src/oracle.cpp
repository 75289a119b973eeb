#include "kaf/oracle.hpp"

#include <cmath>
#include <sstream>

#include "kaf/errors.hpp"

namespace kaf::oracle {

namespace {

Eigen::Map<const Eigen::VectorXd> view(const Vector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double kernel(const KernelSpec& spec, const Vector& u, const Vector& v) {
    if (u.size() != v.size()) throw DimensionError("oracle kernel: dimension mismatch");
    if (spec.family == KernelFamily::gaussian) {
        return std::exp(-(view(u) - view(v)).squaredNorm() / (spec.sigma * spec.sigma));
    }
    return std::pow(view(u).dot(view(v)) + 1.0, spec.degree);
}

Eigen::MatrixXd gram(const KernelSpec& spec, const std::vector<Vector>& points) {
    const auto n = static_cast<Eigen::Index>(points.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) k(i, j) = kernel(spec, points[i], points[j]);
    }
    return k;
}

BatchReplay::BatchReplay(const KernelSpec& spec, double lambda, double delta)
    : spec_(spec), lambda_(lambda), delta_(delta) {}

bool BatchReplay::push(const Vector& u, double d) {
    const auto k = static_cast<Eigen::Index>(centers_.size());
    bool admit = true;
    Eigen::VectorXd row;
    if (k > 0) {
        Eigen::VectorXd h(k);
        for (Eigen::Index i = 0; i < k; ++i) h(i) = kernel(spec_, centers_[i], u);
        Eigen::VectorXd a = gram_.partialPivLu().solve(h);
        const double d2 = std::max(kernel(spec_, u, u) - h.dot(a), 0.0);
        admit = d2 > delta_;
        row = std::move(a);
    }
    if (admit) {
        centers_.push_back(u);
        Eigen::MatrixXd next(k + 1, k + 1);
        next.topLeftCorner(k, k) = gram_;
        for (Eigen::Index i = 0; i < k; ++i) {
            next(i, k) = kernel(spec_, centers_[i], u);
            next(k, i) = next(i, k);
        }
        next(k, k) = kernel(spec_, u, u);
        gram_ = std::move(next);
        row = Eigen::VectorXd::Zero(k + 1);
        row(k) = 1.0;
    }
    rows_.push_back(std::move(row));
    targets_.push_back(d);
    admitted_.push_back(admit);
    return admit;
}

Eigen::MatrixXd BatchReplay::a_matrix() const {
    const auto k = static_cast<Eigen::Index>(centers_.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows_.size()), k);
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        a.row(static_cast<Eigen::Index>(i)).head(rows_[i].size()) = rows_[i].transpose();
    }
    return a;
}

Eigen::VectorXd BatchReplay::targets() const { return view(targets_); }

BatchReplay::Solution BatchReplay::solve() const {
    const Eigen::MatrixXd a = a_matrix();
    const Eigen::MatrixXd system =
        a.transpose() * a * gram_ + lambda_ * Eigen::MatrixXd::Identity(gram_.rows(), gram_.cols());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    Solution s;
    s.rcond = lu.rcond();
    if (!(s.rcond > 1e-15)) {
        std::ostringstream msg;
        msg << "batch solve: singular system (rcond " << s.rcond << ")";
        throw NumericalError(msg.str());
    }
    s.alpha = lu.solve(a.transpose() * targets());
    return s;
}

Eigen::VectorXd BatchReplay::solve_lambda_gram() const {
    const Eigen::MatrixXd a = a_matrix();
    const Eigen::MatrixXd system = a.transpose() * a * gram_ + lambda_ * gram_;
    return system.partialPivLu().solve(a.transpose() * targets());
}

BatchResult batch_solve_regularized(const BatchProblem& problem) {
    if (problem.inputs.size() != problem.targets.size() || problem.inputs.empty()) {
        throw DimensionError("batch problem: inputs and targets must be nonempty and of equal length");
    }
    BatchReplay replay(problem.spec, problem.lambda, problem.delta);
    for (std::size_t i = 0; i < problem.inputs.size(); ++i) replay.push(problem.inputs[i], problem.targets[i]);
    const auto sol = replay.solve();
    return {sol.alpha, replay.centers(), replay.a_matrix(), sol.rcond};
}

Eigen::VectorXd batch_krr(const std::vector<Vector>& inputs, const Vector& targets, const KernelSpec& spec,
                          double lambda) {
    if (inputs.size() != targets.size() || inputs.empty()) {
        throw DimensionError("batch_krr: inputs and targets must be nonempty and of equal length");
    }
    if (!(lambda > 0.0)) throw ValidationError("batch_krr requires lambda > 0", "lambda");
    Eigen::MatrixXd k = oracle::gram(spec, inputs);
    k.diagonal().array() += lambda;
    return k.partialPivLu().solve(view(targets));
}

Eigen::VectorXd cost_gradient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& kd, const Eigen::VectorXd& d,
                              double lambda, const Eigen::VectorXd& alpha) {
    const Eigen::MatrixXd ak = a * kd;
    return 2.0 * ak.transpose() * (ak * alpha - d) + 2.0 * lambda * kd * alpha;
}

double regularized_cost(const Eigen::MatrixXd& a, const Eigen::MatrixXd& kd, const Eigen::VectorXd& d,
                        double lambda, const Eigen::VectorXd& alpha) {
    return (a * kd * alpha - d).squaredNorm() + lambda * alpha.dot(kd * alpha);
}

Vector polynomial_features(const Vector& u, int degree) {
    Vector phi;
    if (degree == 1) {
        phi = u;
        phi.push_back(1.0);
        return phi;
    }
    if (degree != 2) throw ValidationError("explicit features exist here only for degree 1 or 2", "degree");
    const double r2 = std::sqrt(2.0);
    for (double x : u) phi.push_back(x * x);
    for (std::size_t i = 0; i < u.size(); ++i) {
        for (std::size_t j = i + 1; j < u.size(); ++j) phi.push_back(r2 * u[i] * u[j]);
    }
    for (double x : u) phi.push_back(r2 * x);
    phi.push_back(1.0);
    return phi;
}

double feature_space_residual(const std::vector<Vector>& centers, const Vector& u, int degree) {
    const Vector target = polynomial_features(u, degree);
    Eigen::MatrixXd basis(static_cast<Eigen::Index>(target.size()), static_cast<Eigen::Index>(centers.size()));
    for (std::size_t i = 0; i < centers.size(); ++i) {
        basis.col(static_cast<Eigen::Index>(i)) = view(polynomial_features(centers[i], degree));
    }
    const Eigen::VectorXd t = view(target);
    const Eigen::VectorXd coef = basis.completeOrthogonalDecomposition().solve(t);
    return (basis * coef - t).squaredNorm();
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

Eigen::MatrixXd to_eigen(const DenseMatrix& m) {
    const auto k = static_cast<Eigen::Index>(m.dim());
    Eigen::MatrixXd out(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) out(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
    return out;
}

}  // namespace kaf::oracle
