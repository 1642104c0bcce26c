#pragma once

#include "eqboot/core.hpp"
#include "eqboot/estimators.hpp"
#include "eqboot/groups.hpp"
#include "eqboot/operators.hpp"

#include <optional>
#include <vector>

namespace eqboot {

/// Error definition used by the equivariant bootstrap. ForwardTransform
/// (the default) compares T_g x_hat(y) against x_hat(y_tilde), bypassing the
/// inverse transform; InverseTransform compares the back-transformed
/// reconstruction against x_hat(y). The two coincide for the orthogonal
/// actions implemented here.
enum class ErrorMode { ForwardTransform, InverseTransform };

struct BootstrapConfig {
    int n_samples = 1;
    ErrorMode error_mode = ErrorMode::ForwardTransform;
    std::optional<GroupAction> group;
    /// Replace sampling by exact enumeration of the full group (N = |G|);
    /// n_samples is ignored. Used for the bias-identity cross-checks.
    bool enumerate_full_group = false;
};

struct BootstrapResult {
    Signal center;                        // x_hat(y)
    std::vector<double> errors;           // squared errors, one per replicate
    std::vector<Signal> recons;           // back-transformed reconstructions
    std::vector<GroupElement> elements;   // empty for the naive bootstrap

    int n() const { return static_cast<int>(errors.size()); }
};

/// Euclidean ball {x : ||x - center||^2 < radius_sq}.
struct ConfidenceRegion {
    Signal center;
    double radius_sq = 0.0;
    double level = 0.0;
};

/// Classical parametric bootstrap: y_tilde^(i) ~ P(A x_hat(y)),
/// x_tilde^(i) = x_hat(y_tilde^(i)). Replicate i draws from rng.child(i), so
/// results are independent of thread count and evaluation order.
BootstrapResult naive_bootstrap(const Estimator& est, const LinearOperator& A,
                                const NoiseModel& noise, const Measurement& y,
                                const BootstrapConfig& config, const RngStream& rng);

/// Equivariant bootstrap: g_i ~ U(G), y_tilde^(i) ~ P(A T_{g_i} x_hat(y)),
/// reconstruction mapped back through T_{g_i}^{-1}. Replicate i draws g_i and
/// then the noise from the single stream rng.child(i).
BootstrapResult equivariant_bootstrap(const Estimator& est, const LinearOperator& A,
                                      const NoiseModel& noise, const Measurement& y,
                                      const BootstrapConfig& config, const RngStream& rng);

/// Dispatches on config.group.
BootstrapResult run_bootstrap(const Estimator& est, const LinearOperator& A,
                              const NoiseModel& noise, const Measurement& y,
                              const BootstrapConfig& config, const RngStream& rng);

/// Squared radius at the conservative order statistic ceil(level * (N + 1)),
/// clamped to [1, N], of the sorted bootstrap errors.
ConfidenceRegion confidence_region(const BootstrapResult& result, double level);

/// Strict membership test ||x - center||^2 < radius_sq.
bool contains(const ConfidenceRegion& region, const Signal& x);

/// Per-pixel sample standard deviation of the reconstructions (N - 1 in the
/// denominator); requires N >= 2.
Signal pixelwise_std(const BootstrapResult& result);

}  // namespace eqboot
