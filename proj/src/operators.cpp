#include "eqboot/operators.hpp"

#include <cmath>

namespace eqboot {

namespace {

int mod(int a, int m) {
    int r = a % m;
    return r < 0 ? r + m : r;
}

// Circular 2D convolution, out(p) = sum_q K(q) x(p - q) with the kernel
// indexed relative to its center. flip = true applies the adjoint
// (correlation), which for a circulant operator is convolution with the
// point-reflected kernel.
Eigen::VectorXd convolve(const Eigen::VectorXd& x, const Eigen::MatrixXd& kernel, Shape shape,
                         bool flip) {
    const int h = shape.height;
    const int w = shape.width;
    const int kh = static_cast<int>(kernel.rows());
    const int kw = static_cast<int>(kernel.cols());
    const int cy = (kh - 1) / 2;
    const int cx = (kw - 1) / 2;
    Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
    for (int i = 0; i < h; ++i) {
        for (int j = 0; j < w; ++j) {
            double acc = 0.0;
            for (int a = 0; a < kh; ++a) {
                for (int b = 0; b < kw; ++b) {
                    const double kv = flip ? kernel(kh - 1 - a, kw - 1 - b) : kernel(a, b);
                    const int si = mod(i - (a - cy), h);
                    const int sj = mod(j - (b - cx), w);
                    acc += kv * x[static_cast<Eigen::Index>(si) * w + sj];
                }
            }
            out[static_cast<Eigen::Index>(i) * w + j] = acc;
        }
    }
    return out;
}

}  // namespace

Measurement LinearOperator::apply(const Signal& x) const {
    if (x.size() != n_ || !(x.shape() == shape_)) {
        throw std::invalid_argument("LinearOperator::apply: signal shape mismatch");
    }
    switch (kind_) {
        case Kind::GaussianCS:
            return Measurement(payload_ * x.data());
        case Kind::InpaintingMask:
            return Measurement(mask_.cwiseProduct(x.data()));
        case Kind::CircularBlur:
            return Measurement(convolve(x.data(), payload_, shape_, false));
    }
    throw std::logic_error("LinearOperator::apply: unknown kind");
}

Signal LinearOperator::adjoint(const Measurement& u) const {
    if (u.size() != m_) {
        throw std::invalid_argument("LinearOperator::adjoint: measurement size mismatch");
    }
    switch (kind_) {
        case Kind::GaussianCS:
            return Signal(payload_.transpose() * u.data(), shape_);
        case Kind::InpaintingMask:
            return Signal(mask_.cwiseProduct(u.data()), shape_);
        case Kind::CircularBlur:
            return Signal(convolve(u.data(), payload_, shape_, true), shape_);
    }
    throw std::logic_error("LinearOperator::adjoint: unknown kind");
}

Eigen::MatrixXd LinearOperator::dense() const {
    if (n_ > 4096) {
        throw std::invalid_argument("LinearOperator::dense: n exceeds the 4096 dense limit");
    }
    if (kind_ == Kind::GaussianCS) {
        return payload_;
    }
    if (kind_ == Kind::InpaintingMask) {
        return Eigen::MatrixXd(mask_.asDiagonal());
    }
    Eigen::MatrixXd A(m_, n_);
    Eigen::VectorXd basis = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index j = 0; j < n_; ++j) {
        basis[j] = 1.0;
        A.col(j) = convolve(basis, payload_, shape_, false);
        basis[j] = 0.0;
    }
    return A;
}

LinearOperator gaussian_cs(Shape shape, Eigen::Index m, RngStream rng) {
    if (m < 1 || shape.n() < 1) {
        throw std::invalid_argument("gaussian_cs: dimensions must be positive");
    }
    LinearOperator op(LinearOperator::Kind::GaussianCS, shape, m);
    op.seed_master_ = rng.master_seed();
    op.seed_stream_ = rng.stream_id();
    const double scale = 1.0 / std::sqrt(static_cast<double>(m));
    op.payload_.resize(m, shape.n());
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < op.payload_.cols(); ++j) {
            op.payload_(i, j) = scale * rng.next_gaussian();
        }
    }
    return op;
}

LinearOperator inpainting_mask(Shape shape, double keep_prob, RngStream rng) {
    if (keep_prob < 0.0 || keep_prob > 1.0) {
        throw std::invalid_argument("inpainting_mask: keep_prob must lie in [0, 1]");
    }
    LinearOperator op(LinearOperator::Kind::InpaintingMask, shape, shape.n());
    op.seed_master_ = rng.master_seed();
    op.seed_stream_ = rng.stream_id();
    op.keep_prob_ = keep_prob;
    op.mask_.resize(shape.n());
    for (Eigen::Index i = 0; i < op.mask_.size(); ++i) {
        op.mask_[i] = rng.next_unit() < keep_prob ? 1.0 : 0.0;
    }
    return op;
}

LinearOperator circular_blur(Shape shape, const Eigen::MatrixXd& kernel) {
    if (kernel.rows() % 2 == 0 || kernel.cols() % 2 == 0) {
        throw std::invalid_argument("circular_blur: kernel dimensions must be odd");
    }
    if (kernel.rows() > shape.height || kernel.cols() > shape.width) {
        throw std::invalid_argument("circular_blur: kernel larger than image");
    }
    if (!kernel.allFinite()) {
        throw std::invalid_argument("circular_blur: kernel entries must be finite");
    }
    LinearOperator op(LinearOperator::Kind::CircularBlur, shape, shape.n());
    op.payload_ = kernel;
    return op;
}

}  // namespace eqboot
