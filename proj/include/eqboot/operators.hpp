#pragma once

#include "eqboot/core.hpp"

namespace eqboot {

/// Forward map A in R^{m x n} with apply/adjoint and on-demand dense
/// materialization (mandatory for n <= 4096). Immutable after construction;
/// apply/adjoint are reentrant.
class LinearOperator {
public:
    enum class Kind { GaussianCS, InpaintingMask, CircularBlur };

    Kind kind() const { return kind_; }
    Eigen::Index rows() const { return m_; }
    Eigen::Index cols() const { return n_; }
    Shape signal_shape() const { return shape_; }

    Measurement apply(const Signal& x) const;
    Signal adjoint(const Measurement& u) const;

    /// Dense m x n matrix agreeing with apply on the canonical basis.
    Eigen::MatrixXd dense() const;

    // Descriptor pieces used for JSON round trips (see serialize.hpp).
    std::uint64_t seed_master() const { return seed_master_; }
    std::uint64_t seed_stream() const { return seed_stream_; }
    double keep_prob() const { return keep_prob_; }
    const Eigen::MatrixXd& kernel() const { return payload_; }

    friend LinearOperator gaussian_cs(Shape shape, Eigen::Index m, RngStream rng);
    friend LinearOperator inpainting_mask(Shape shape, double keep_prob, RngStream rng);
    friend LinearOperator circular_blur(Shape shape, const Eigen::MatrixXd& kernel);

private:
    LinearOperator(Kind kind, Shape shape, Eigen::Index m) : kind_(kind), shape_(shape), m_(m) {
        n_ = shape.n();
    }

    Kind kind_;
    Shape shape_;
    Eigen::Index m_ = 0;
    Eigen::Index n_ = 0;
    // GaussianCS: the m x n matrix. CircularBlur: the kernel. InpaintingMask: unused.
    Eigen::MatrixXd payload_;
    Eigen::VectorXd mask_;
    std::uint64_t seed_master_ = 0;
    std::uint64_t seed_stream_ = 0;
    double keep_prob_ = 0.0;
};

/// Dense i.i.d. N(0, 1/m) sensing matrix, filled row-major from rng.
LinearOperator gaussian_cs(Shape shape, Eigen::Index m, RngStream rng);

/// Diagonal 0/1 mask (m = n); each pixel kept with probability keep_prob.
LinearOperator inpainting_mask(Shape shape, double keep_prob, RngStream rng);

/// Circular (wrap-around) 2D convolution with an odd-sized kernel; m = n.
LinearOperator circular_blur(Shape shape, const Eigen::MatrixXd& kernel);

}  // namespace eqboot
