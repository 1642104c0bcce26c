#pragma once

#include "eqboot/core.hpp"
#include "eqboot/groups.hpp"

namespace eqboot {

/// The noiseless linear-estimator bias split of the group-averaged bootstrap
/// expectation:
///   lhs = true_error - bias1 + bias2, with
///   lhs        = mean_g ||T_g^{-1} B T_g B x* - B x*||^2,
///   true_error = ||R x*||^2,
///   bias1      = (R x*)^T B* (R x*),
///   bias2      = x*^T B^T Pi_G(R^T R + R^T B* + B* R - 2R) B x*,
/// where B* = U U^T and R = B - B*. residual measures how far the computed
/// sides are from equality.
struct BiasReport {
    double true_error = 0.0;
    double bias1 = 0.0;
    double bias2 = 0.0;
    double lhs = 0.0;
    double residual = 0.0;
};

struct ConsistencyReport {
    bool consistent = false;      // ||A M - I||_F <= 1e-8
    double am_residual = 0.0;     // ||A M - I||_F
    double max_bias1 = 0.0;       // max |(R x)^T B* (R x)| over sampled x in span(U)
};

/// Reynolds average Pi_G(C) = mean over the FULL group of T_g^{-1} C T_g.
/// Permutation index maps keep each output entry an order-fixed sum over g,
/// so the result is independent of thread count. |G| <= 1e5, n <= 1024.
Eigen::MatrixXd reynolds(const GroupAction& action, const Eigen::MatrixXd& C);

/// max_g ||T_g C - C T_g||_F / ||C||_F over the full group; zero exactly for
/// G-equivariant C.
double equivariance_defect(const GroupAction& action, const Eigen::MatrixXd& C);

/// Evaluates both sides of the bias identity for B = MA, an orthonormal basis
/// of a G-invariant subspace, and x* in that subspace. Preconditions checked:
/// ||(I - U U^T) T_g U||_F <= 1e-8 for all g, and x* in span(U).
BiasReport bias_decomposition(const Eigen::MatrixXd& B, const Eigen::MatrixXd& basis,
                              const GroupAction& action, const Signal& x_star);

/// Checks A M = I_m and, with the oracle M* = U (A U)^+ and B* = M* A,
/// evaluates bias1 = ||R x*||^2_{B*} over 100 random x* in span(basis).
/// Measurement consistency forces bias1 to vanish.
ConsistencyReport measurement_consistency_check(const Eigen::MatrixXd& A,
                                                const Eigen::MatrixXd& M,
                                                const Eigen::MatrixXd& basis, RngStream rng);

/// Exactly orthonormal basis of the span of 1D cyclic Fourier modes with the
/// given frequencies (each f in (0, n/2) contributes a cosine and a sine
/// column, f = 0 the constant). Invariant under every cyclic shift.
Eigen::MatrixXd cyclic_fourier_basis(int n, const std::vector<int>& freqs);

struct TheoryCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;      // worst residual/defect observed
    double threshold = 0.0;
};

struct TheorySuiteReport {
    std::vector<TheoryCheck> checks;
    bool all_pass() const;
};

/// The mathematical regression suite behind `eqboot theory`: randomized
/// bias-identity instances on the full 1D cyclic shift group, Reynolds
/// operator properties, and the measurement-consistency lemma. perturb_lhs
/// shifts the identity's left-hand side and must trip the suite (sensitivity
/// hook).
TheorySuiteReport run_theory_suite(int n, std::uint64_t seed, int instances,
                                   double perturb_lhs = 0.0);

}  // namespace eqboot
