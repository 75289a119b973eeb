#pragma once

// Dense batch solvers used to check the online recursions. Everything here
// is O(n^3) or worse and deliberately shares no arithmetic with the filters:
// kernels are re-evaluated locally and all linear algebra goes through Eigen.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "kaf/kernels.hpp"

namespace kaf::oracle {

double kernel(const KernelSpec& spec, const Vector& u, const Vector& v);

Eigen::MatrixXd gram(const KernelSpec& spec, const std::vector<Vector>& points);

// Builds the center dictionary and the full sample-to-dictionary matrix A
// one sample at a time, then solves
//
//   alpha = (A^T A Kd + lambda I)^-1 A^T d
//
// An admitted sample gets an indicator row (earlier rows padded with 0); a
// rejected one gets the row a = Kd^-1 h from a fresh LU solve.
class BatchReplay {
public:
    BatchReplay(const KernelSpec& spec, double lambda, double delta);

    // Returns true when the sample became a center.
    bool push(const Vector& u, double d);

    struct Solution {
        Eigen::VectorXd alpha;
        double rcond = 0.0;  // reciprocal condition estimate of the system
    };
    // Throws NumericalError if the system is singular (e.g. lambda = 0).
    Solution solve() const;

    // Same A, Kd, d with lambda Kd in place of lambda I. Diagnostic only.
    Eigen::VectorXd solve_lambda_gram() const;

    const std::vector<Vector>& centers() const { return centers_; }
    const std::vector<bool>& admitted() const { return admitted_; }
    Eigen::MatrixXd a_matrix() const;
    const Eigen::MatrixXd& gram_matrix() const { return gram_; }
    Eigen::VectorXd targets() const;
    double lambda() const { return lambda_; }

private:
    KernelSpec spec_;
    double lambda_;
    double delta_;
    std::vector<Vector> centers_;
    std::vector<Eigen::VectorXd> rows_;  // each padded lazily to K on read
    std::vector<double> targets_;
    std::vector<bool> admitted_;
    Eigen::MatrixXd gram_;
};

struct BatchProblem {
    std::vector<Vector> inputs;
    Vector targets;
    KernelSpec spec;
    double lambda = 0.1;
    double delta = 0.01;
};

struct BatchResult {
    Eigen::VectorXd alpha;
    std::vector<Vector> centers;
    Eigen::MatrixXd a;
    double rcond = 0.0;
};

BatchResult batch_solve_regularized(const BatchProblem& problem);

// (K + lambda I)^-1 d over every input.
Eigen::VectorXd batch_krr(const std::vector<Vector>& inputs, const Vector& targets, const KernelSpec& spec,
                          double lambda);

// Gradient of ||A Kd alpha - d||^2 + lambda alpha^T Kd alpha.
Eigen::VectorXd cost_gradient(const Eigen::MatrixXd& a, const Eigen::MatrixXd& kd, const Eigen::VectorXd& d,
                              double lambda, const Eigen::VectorXd& alpha);

double regularized_cost(const Eigen::MatrixXd& a, const Eigen::MatrixXd& kd, const Eigen::VectorXd& d,
                        double lambda, const Eigen::VectorXd& alpha);

// Explicit feature map of the polynomial kernel for degree 1 or 2:
// phi(u).phi(v) = (u.v + 1)^p exactly.
Vector polynomial_features(const Vector& u, int degree);

// Least-squares residual min_a |sum_i a_i phi(c_i) - phi(u)|^2 computed in
// the explicit polynomial feature space.
double feature_space_residual(const std::vector<Vector>& centers, const Vector& u, int degree);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

Eigen::MatrixXd to_eigen(const DenseMatrix& m);

}  // namespace kaf::oracle
