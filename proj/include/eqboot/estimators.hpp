#pragma once

#include "eqboot/core.hpp"
#include "eqboot/operators.hpp"

#include <optional>
#include <string>
#include <vector>

namespace eqboot {

/// Reconstruction map y -> x_hat(y). Linear estimators expose their matrix M
/// (n x m); ISTA is the nonlinear member of the family. Immutable, reentrant.
class Estimator {
public:
    Signal estimate(const Measurement& y) const;

    std::optional<Eigen::MatrixXd> linear_matrix() const;

    Shape signal_shape() const { return shape_; }
    const std::string& kind() const { return kind_; }
    double lambda() const { return lambda_; }

    /// Relative measurement residual ||A x_hat(y) - y|| / ||y||.
    double consistency_residual(const LinearOperator& A, const Measurement& y) const;

    friend Estimator linear_from_matrix(Eigen::MatrixXd M, Shape shape, std::string kind);
    friend Estimator ista(const LinearOperator& A, double lambda, int n_iters, double step);

private:
    Estimator() = default;

    std::string kind_;
    Shape shape_{};
    double lambda_ = 0.0;
    std::optional<Eigen::MatrixXd> matrix_;
    // ISTA state
    std::optional<LinearOperator> op_;
    int n_iters_ = 0;
    double step_ = 0.0;
};

/// Wraps an explicit n x m matrix as an estimator.
Estimator linear_from_matrix(Eigen::MatrixXd M, Shape shape, std::string kind = "linear");

/// M = (A^T A + lambda I)^{-1} A^T. lambda == 0 requires full column rank.
Estimator tikhonov(const LinearOperator& A, double lambda);

/// SVD pseudoinverse M = A^+; for full row rank this is the right inverse.
Estimator pseudoinverse(const LinearOperator& A);

/// Closed-form ridge regression of signals on measurements:
/// M = (sum x_i y_i^T)(sum y_i y_i^T + lambda I)^{-1}.
Estimator learned_linear(const std::vector<Signal>& train_x,
                         const std::vector<Measurement>& train_y, double lambda);

/// Subspace-oracle estimator M* = U (A U)^+ for an orthonormal basis U.
/// lambda > 0 regularizes the pseudoinverse. See oracle_projector_matrix for
/// the associated orthogonal projector U U^T used by the bias analysis.
Estimator oracle_projector(const Eigen::MatrixXd& basis, const LinearOperator& A,
                           double lambda = 0.0);

/// The G-equivariant orthogonal projector B* = U U^T onto span(basis).
Eigen::MatrixXd oracle_projector_matrix(const Eigen::MatrixXd& basis);

/// Iterative soft-thresholding from x = 0:
/// x <- soft(x - step A^T (A x - y), step * lambda).
Estimator ista(const LinearOperator& A, double lambda, int n_iters, double step);

/// Scale-aware default regularization weight, 1e-3 * trace(A^T A) / n.
double default_lambda(const LinearOperator& A);

double soft_threshold(double v, double tau);

}  // namespace eqboot
