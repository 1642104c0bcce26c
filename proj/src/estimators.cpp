#include "eqboot/estimators.hpp"

#include <cmath>

namespace eqboot {

namespace {

Eigen::MatrixXd pinv_svd(const Eigen::MatrixXd& A, bool require_full_rank,
                         const char* context) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = std::numeric_limits<double>::epsilon() *
                       static_cast<double>(std::max(A.rows(), A.cols())) *
                       (sv.size() > 0 ? sv[0] : 0.0);
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > tol) {
            inv[i] = 1.0 / sv[i];
            ++rank;
        }
    }
    if (require_full_rank && rank < std::min(A.rows(), A.cols())) {
        throw NumericError(std::string(context) + ": rank-deficient system");
    }
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace

Signal Estimator::estimate(const Measurement& y) const {
    if (matrix_) {
        if (y.size() != matrix_->cols()) {
            throw std::invalid_argument("Estimator::estimate: measurement size mismatch");
        }
        return Signal(*matrix_ * y.data(), shape_);
    }
    // ISTA
    if (y.size() != op_->rows()) {
        throw std::invalid_argument("Estimator::estimate: measurement size mismatch");
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(op_->cols());
    const double tau = step_ * lambda_;
    for (int it = 0; it < n_iters_; ++it) {
        const Eigen::VectorXd residual = op_->apply(Signal(x, shape_)).data() - y.data();
        const Eigen::VectorXd grad = op_->adjoint(Measurement(residual)).data();
        x -= step_ * grad;
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            x[i] = soft_threshold(x[i], tau);
        }
    }
    return Signal(std::move(x), shape_);
}

std::optional<Eigen::MatrixXd> Estimator::linear_matrix() const {
    return matrix_;
}

double Estimator::consistency_residual(const LinearOperator& A, const Measurement& y) const {
    const Measurement back = A.apply(estimate(y));
    const double denom = y.data().norm();
    const double num = (back.data() - y.data()).norm();
    return denom > 0.0 ? num / denom : num;
}

Estimator linear_from_matrix(Eigen::MatrixXd M, Shape shape, std::string kind) {
    if (M.rows() != static_cast<Eigen::Index>(shape.n())) {
        throw std::invalid_argument("linear_from_matrix: row count does not match shape");
    }
    Estimator est;
    est.kind_ = std::move(kind);
    est.shape_ = shape;
    est.matrix_ = std::move(M);
    return est;
}

Estimator tikhonov(const LinearOperator& A, double lambda) {
    if (lambda < 0.0) {
        throw std::invalid_argument("tikhonov: lambda must be nonnegative");
    }
    const Eigen::MatrixXd Ad = A.dense();
    Eigen::MatrixXd gram = Ad.transpose() * Ad;
    if (lambda == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible()) {
            throw NumericError("tikhonov: singular system at lambda = 0");
        }
        return linear_from_matrix(lu.solve(Ad.transpose()), A.signal_shape(), "tikhonov");
    }
    gram.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) {
        throw NumericError("tikhonov: factorization failed");
    }
    return linear_from_matrix(llt.solve(Ad.transpose()), A.signal_shape(), "tikhonov");
}

Estimator pseudoinverse(const LinearOperator& A) {
    return linear_from_matrix(pinv_svd(A.dense(), false, "pseudoinverse"), A.signal_shape(),
                              "pseudoinverse");
}

Estimator learned_linear(const std::vector<Signal>& train_x,
                         const std::vector<Measurement>& train_y, double lambda) {
    if (train_x.empty() || train_x.size() != train_y.size()) {
        throw std::invalid_argument("learned_linear: need matching, nonempty training sets");
    }
    if (lambda < 0.0) {
        throw std::invalid_argument("learned_linear: lambda must be nonnegative");
    }
    const Eigen::Index n = train_x.front().size();
    const Eigen::Index m = train_y.front().size();
    Eigen::MatrixXd sxy = Eigen::MatrixXd::Zero(n, m);
    Eigen::MatrixXd syy = Eigen::MatrixXd::Zero(m, m);
    for (std::size_t i = 0; i < train_x.size(); ++i) {
        if (train_x[i].size() != n || train_y[i].size() != m) {
            throw std::invalid_argument("learned_linear: inconsistent training dimensions");
        }
        sxy.noalias() += train_x[i].data() * train_y[i].data().transpose();
        syy.noalias() += train_y[i].data() * train_y[i].data().transpose();
    }
    if (lambda == 0.0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(syy);
        if (!lu.isInvertible()) {
            throw NumericError("learned_linear: singular Gram matrix at lambda = 0");
        }
        return linear_from_matrix(lu.solve(sxy.transpose()).transpose(),
                                  train_x.front().shape(), "learned_linear");
    }
    syy.diagonal().array() += lambda;
    Eigen::LLT<Eigen::MatrixXd> llt(syy);
    if (llt.info() != Eigen::Success) {
        throw NumericError("learned_linear: factorization failed");
    }
    return linear_from_matrix(llt.solve(sxy.transpose()).transpose(), train_x.front().shape(),
                              "learned_linear");
}

Estimator oracle_projector(const Eigen::MatrixXd& basis, const LinearOperator& A,
                           double lambda) {
    const Eigen::Index n = A.cols();
    if (basis.rows() != n || basis.cols() < 1) {
        throw std::invalid_argument("oracle_projector: basis must be n x k with k >= 1");
    }
    const double ortho =
        (basis.transpose() * basis - Eigen::MatrixXd::Identity(basis.cols(), basis.cols()))
            .norm();
    if (ortho > 1e-8) {
        throw std::invalid_argument("oracle_projector: basis columns must be orthonormal");
    }
    const Eigen::MatrixXd AU = A.dense() * basis;
    Eigen::MatrixXd pinv_au;
    if (lambda == 0.0) {
        pinv_au = pinv_svd(AU, true, "oracle_projector");
    } else {
        Eigen::MatrixXd gram = AU.transpose() * AU;
        gram.diagonal().array() += lambda;
        pinv_au = gram.llt().solve(AU.transpose());
    }
    return linear_from_matrix(basis * pinv_au, A.signal_shape(), "oracle_projector");
}

Eigen::MatrixXd oracle_projector_matrix(const Eigen::MatrixXd& basis) {
    return basis * basis.transpose();
}

Estimator ista(const LinearOperator& A, double lambda, int n_iters, double step) {
    if (n_iters < 1) {
        throw std::invalid_argument("ista: n_iters must be >= 1");
    }
    if (step <= 0.0) {
        throw std::invalid_argument("ista: step must be positive");
    }
    Estimator est;
    est.kind_ = "ista";
    est.shape_ = A.signal_shape();
    est.lambda_ = lambda;
    est.op_ = A;
    est.n_iters_ = n_iters;
    est.step_ = step;
    return est;
}

double default_lambda(const LinearOperator& A) {
    const Eigen::MatrixXd Ad = A.dense();
    return 1e-3 * (Ad.transpose() * Ad).trace() / static_cast<double>(A.cols());
}

double soft_threshold(double v, double tau) {
    if (v > tau) return v - tau;
    if (v < -tau) return v + tau;
    return 0.0;
}

}  // namespace eqboot
