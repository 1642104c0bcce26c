#include "eqboot/bootstrap.hpp"

#include "eqboot/detail/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace eqboot {

namespace {

using detail::parallel_indexed;

void check_problem(const Estimator& est, const LinearOperator& A, const Measurement& y) {
    if (A.rows() != y.size()) {
        throw std::invalid_argument("bootstrap: measurement size does not match operator");
    }
    if (!(est.signal_shape() == A.signal_shape())) {
        throw std::invalid_argument("bootstrap: estimator and operator shapes differ");
    }
}

}  // namespace

BootstrapResult naive_bootstrap(const Estimator& est, const LinearOperator& A,
                                const NoiseModel& noise, const Measurement& y,
                                const BootstrapConfig& config, const RngStream& rng) {
    if (config.group.has_value()) {
        throw std::invalid_argument("naive_bootstrap: config must not carry a group");
    }
    if (config.n_samples < 1) {
        throw std::invalid_argument("naive_bootstrap: n_samples must be >= 1");
    }
    check_problem(est, A, y);

    const Signal center = est.estimate(y);
    const Measurement mean = A.apply(center);
    const int n = config.n_samples;

    BootstrapResult result{center, std::vector<double>(n),
                           std::vector<Signal>(n, Signal::zeros(center.shape())), {}};
    parallel_indexed(n, [&](int i) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(i));
        const Measurement y_tilde = sample_noise(noise, mean, stream);
        Signal recon = est.estimate(y_tilde);
        result.errors[i] = (recon.data() - center.data()).squaredNorm();
        result.recons[i] = std::move(recon);
    });
    return result;
}

BootstrapResult equivariant_bootstrap(const Estimator& est, const LinearOperator& A,
                                      const NoiseModel& noise, const Measurement& y,
                                      const BootstrapConfig& config, const RngStream& rng) {
    if (!config.group.has_value()) {
        throw std::invalid_argument("equivariant_bootstrap: config must carry a group");
    }
    const GroupAction& action = *config.group;
    if (!(action.shape() == est.signal_shape())) {
        throw std::invalid_argument("equivariant_bootstrap: group shape mismatch");
    }
    check_problem(est, A, y);

    std::vector<GroupElement> enumerated;
    int n = config.n_samples;
    if (config.enumerate_full_group) {
        if (action.full_group_size() > 100000) {
            throw std::invalid_argument("equivariant_bootstrap: group too large to enumerate");
        }
        enumerated = action.full_enumeration();
        n = static_cast<int>(enumerated.size());
    } else if (n < 1) {
        throw std::invalid_argument("equivariant_bootstrap: n_samples must be >= 1");
    }

    const Signal center = est.estimate(y);

    BootstrapResult result{center, std::vector<double>(n),
                           std::vector<Signal>(n, Signal::zeros(center.shape())),
                           std::vector<GroupElement>(n)};
    parallel_indexed(n, [&](int i) {
        RngStream stream = rng.child(static_cast<std::uint64_t>(i));
        const GroupElement g = config.enumerate_full_group
                                   ? enumerated[static_cast<std::size_t>(i)]
                                   : sample_element(action, stream);
        const Signal transformed = act(action, g, center);
        const Measurement y_tilde = sample_noise(noise, A.apply(transformed), stream);
        const Signal raw = est.estimate(y_tilde);
        Signal recon = act_inverse(action, g, raw);
        result.errors[i] = config.error_mode == ErrorMode::ForwardTransform
                               ? (transformed.data() - raw.data()).squaredNorm()
                               : (recon.data() - center.data()).squaredNorm();
        result.recons[i] = std::move(recon);
        result.elements[i] = g;
    });
    return result;
}

BootstrapResult run_bootstrap(const Estimator& est, const LinearOperator& A,
                              const NoiseModel& noise, const Measurement& y,
                              const BootstrapConfig& config, const RngStream& rng) {
    return config.group.has_value() ? equivariant_bootstrap(est, A, noise, y, config, rng)
                                    : naive_bootstrap(est, A, noise, y, config, rng);
}

ConfidenceRegion confidence_region(const BootstrapResult& result, double level) {
    if (result.errors.empty()) {
        throw std::invalid_argument("confidence_region: empty bootstrap sample");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("confidence_region: level must lie in (0, 1)");
    }
    std::vector<double> sorted = result.errors;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<std::int64_t>(sorted.size());
    std::int64_t rank = static_cast<std::int64_t>(
        std::ceil(level * static_cast<double>(n + 1)));
    rank = std::clamp<std::int64_t>(rank, 1, n);
    return ConfidenceRegion{result.center, sorted[static_cast<std::size_t>(rank - 1)], level};
}

bool contains(const ConfidenceRegion& region, const Signal& x) {
    if (!(x.shape() == region.center.shape())) {
        throw std::invalid_argument("contains: shape mismatch");
    }
    return (x.data() - region.center.data()).squaredNorm() < region.radius_sq;
}

Signal pixelwise_std(const BootstrapResult& result) {
    const auto n = static_cast<Eigen::Index>(result.recons.size());
    if (n < 2) {
        throw std::invalid_argument("pixelwise_std: need at least two reconstructions");
    }
    const Eigen::Index dim = result.center.size();
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(dim);
    for (const Signal& r : result.recons) {
        mean += r.data();
    }
    mean /= static_cast<double>(n);
    Eigen::VectorXd ss = Eigen::VectorXd::Zero(dim);
    for (const Signal& r : result.recons) {
        ss += (r.data() - mean).cwiseAbs2();
    }
    return Signal((ss / static_cast<double>(n - 1)).cwiseSqrt(), result.center.shape());
}

}  // namespace eqboot
