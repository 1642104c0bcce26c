#pragma once

#include "eqboot/bootstrap.hpp"
#include "eqboot/theory.hpp"

namespace eqboot::reference {

/// Serial reference implementations of the parallel kernels. They follow the
/// textbook formulation (dense permutation matrices, plain loops) and must
/// agree bitwise with the OpenMP kernels: group actions are entry copies and
/// every per-entry accumulation runs in the same element order.

Eigen::MatrixXd reynolds_serial(const GroupAction& action, const Eigen::MatrixXd& C);

BootstrapResult naive_bootstrap_serial(const Estimator& est, const LinearOperator& A,
                                       const NoiseModel& noise, const Measurement& y,
                                       const BootstrapConfig& config, const RngStream& rng);

BootstrapResult equivariant_bootstrap_serial(const Estimator& est, const LinearOperator& A,
                                             const NoiseModel& noise, const Measurement& y,
                                             const BootstrapConfig& config,
                                             const RngStream& rng);

}  // namespace eqboot::reference
