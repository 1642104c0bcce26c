#include "eqboot/reference.hpp"

namespace eqboot::reference {

Eigen::MatrixXd reynolds_serial(const GroupAction& action, const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols() || C.rows() != action.shape().n()) {
        throw std::invalid_argument("reynolds_serial: dimension mismatch");
    }
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(C.rows(), C.cols());
    const auto elements = action.full_enumeration();
    for (const GroupElement& g : elements) {
        const Eigen::MatrixXd T = dense_matrix(action, g);
        acc += T.transpose() * C * T;
    }
    return acc / static_cast<double>(elements.size());
}

BootstrapResult naive_bootstrap_serial(const Estimator& est, const LinearOperator& A,
                                       const NoiseModel& noise, const Measurement& y,
                                       const BootstrapConfig& config, const RngStream& rng) {
    if (config.group.has_value()) {
        throw std::invalid_argument("naive_bootstrap_serial: config must not carry a group");
    }
    const Signal center = est.estimate(y);
    const Measurement mean = A.apply(center);
    BootstrapResult result{center, {}, {}, {}};
    for (int i = 0; i < config.n_samples; ++i) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(i));
        const Measurement y_tilde = sample_noise(noise, mean, stream);
        Signal recon = est.estimate(y_tilde);
        result.errors.push_back((recon.data() - center.data()).squaredNorm());
        result.recons.push_back(std::move(recon));
    }
    return result;
}

BootstrapResult equivariant_bootstrap_serial(const Estimator& est, const LinearOperator& A,
                                             const NoiseModel& noise, const Measurement& y,
                                             const BootstrapConfig& config,
                                             const RngStream& rng) {
    if (!config.group.has_value()) {
        throw std::invalid_argument("equivariant_bootstrap_serial: config must carry a group");
    }
    const GroupAction& action = *config.group;
    const Signal center = est.estimate(y);
    const Shape shape = center.shape();

    std::vector<GroupElement> enumerated;
    int n = config.n_samples;
    if (config.enumerate_full_group) {
        enumerated = action.full_enumeration();
        n = static_cast<int>(enumerated.size());
    }

    BootstrapResult result{center, {}, {}, {}};
    for (int i = 0; i < n; ++i) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(i));
        const GroupElement g = config.enumerate_full_group
                                   ? enumerated[static_cast<std::size_t>(i)]
                                   : sample_element(action, stream);
        const Eigen::MatrixXd T = dense_matrix(action, g);
        const Signal transformed(T * center.data(), shape);
        const Measurement y_tilde = sample_noise(noise, A.apply(transformed), stream);
        const Signal raw = est.estimate(y_tilde);
        Signal recon(T.transpose() * raw.data(), shape);
        result.errors.push_back(config.error_mode == ErrorMode::ForwardTransform
                                    ? (transformed.data() - raw.data()).squaredNorm()
                                    : (recon.data() - center.data()).squaredNorm());
        result.recons.push_back(std::move(recon));
        result.elements.push_back(g);
    }
    return result;
}

}  // namespace eqboot::reference
