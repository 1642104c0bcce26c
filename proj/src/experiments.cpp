#include "eqboot/experiments.hpp"

#include "eqboot/detail/parallel.hpp"
#include "eqboot/theory.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eqboot {

namespace {

using detail::parallel_indexed;

int freq_distance(int f, int period) {
    return std::min(f, period - f);
}

// Band-limited Gaussian image: independent N(0,1) coefficients on the real
// cosine/sine modes whose frequency indices stay within max_freq per axis.
// max_freq < 0 means white noise over all pixels.
Eigen::VectorXd draw_seed(Shape shape, int max_freq, RngStream& rng) {
    const int h = shape.height;
    const int w = shape.width;
    const Eigen::Index n = shape.n();
    if (max_freq < 0) {
        Eigen::VectorXd x(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            x[i] = rng.next_gaussian();
        }
        return x;
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    for (int fy = 0; fy < h; ++fy) {
        if (freq_distance(fy, h) > max_freq) continue;
        for (int fx = 0; fx < w; ++fx) {
            if (freq_distance(fx, w) > max_freq) continue;
            const double a = rng.next_gaussian();
            const double b = rng.next_gaussian();
            for (int i = 0; i < h; ++i) {
                for (int j = 0; j < w; ++j) {
                    const double phase =
                        2.0 * M_PI * (static_cast<double>(fy) * i / h +
                                      static_cast<double>(fx) * j / w);
                    x[static_cast<Eigen::Index>(i) * w + j] +=
                        a * std::cos(phase) + b * std::sin(phase);
                }
            }
        }
    }
    return x;
}

}  // namespace

SignalModel make_invariant_model(const GroupAction& action, Shape shape, int k, RngStream rng,
                                 int max_freq, double coeff_sigma) {
    if (k < 1) {
        throw std::invalid_argument("make_invariant_model: k must be >= 1");
    }
    if (!(action.shape() == shape)) {
        throw std::invalid_argument("make_invariant_model: action and shape disagree");
    }
    if (coeff_sigma < 0.0) {
        throw std::invalid_argument("make_invariant_model: coeff_sigma must be nonnegative");
    }
    const Eigen::Index n = shape.n();
    const auto elements = action.full_enumeration();

    Eigen::MatrixXd stacked(n, static_cast<Eigen::Index>(k) * elements.size());
    Eigen::Index col = 0;
    for (int s = 0; s < k; ++s) {
        const Signal seed(draw_seed(shape, max_freq, rng), shape);
        for (const GroupElement& g : elements) {
            stacked.col(col++) = act(action, g, seed).data();
        }
    }

    // Rank-revealing orthonormalization through the Gram spectrum: the hull of
    // the stacked transforms is exactly G-invariant, so the kept eigenvectors
    // span an invariant subspace.
    const Eigen::MatrixXd gram = stacked * stacked.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success) {
        throw NumericError("make_invariant_model: eigendecomposition failed");
    }
    const Eigen::VectorXd& ev = es.eigenvalues();  // ascending
    const double cutoff = ev[ev.size() - 1] * 1e-12;
    if (!(ev[ev.size() - 1] > 0.0)) {
        throw NumericError("make_invariant_model: degenerate rank-0 seed set");
    }
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev[i] > cutoff) {
            ++rank;
        }
    }
    Eigen::MatrixXd basis(n, rank);
    for (Eigen::Index i = 0; i < rank; ++i) {
        basis.col(i) = es.eigenvectors().col(ev.size() - 1 - i);
    }
    return SignalModel{std::move(basis), coeff_sigma, shape};
}

double model_invariance_defect(const SignalModel& model, const GroupAction& action) {
    double worst = 0.0;
    const Eigen::MatrixXd proj = model.basis * model.basis.transpose();
    for (const GroupElement& g : action.full_enumeration()) {
        const auto src = source_index_map(action, g);
        Eigen::MatrixXd tu(model.basis.rows(), model.basis.cols());
        for (Eigen::Index c = 0; c < model.basis.cols(); ++c) {
            const Eigen::VectorXd& u = model.basis.col(c);
            for (Eigen::Index i = 0; i < tu.rows(); ++i) {
                tu(i, c) = u[src[static_cast<std::size_t>(i)]];
            }
        }
        worst = std::max(worst, (tu - proj * tu).norm());
    }
    return worst;
}

Signal sample_signal(const SignalModel& model, RngStream& rng) {
    Eigen::VectorXd coeff(model.dim());
    for (Eigen::Index i = 0; i < coeff.size(); ++i) {
        coeff[i] = model.coeff_sigma * rng.next_gaussian();
    }
    return Signal(model.basis * coeff, model.shape);
}

double CoverageCurve::mad() const {
    if (levels.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        acc += std::abs(empirical[i] - levels[i]);
    }
    return acc / static_cast<double>(levels.size());
}

std::vector<CoverageCurve> coverage_curves(const SignalModel& model, const LinearOperator& A,
                                           const NoiseModel& noise, const Estimator& est,
                                           const std::vector<MethodSpec>& methods,
                                           const std::vector<double>& levels, int n_trials,
                                           std::uint64_t master_seed,
                                           const CoverageOptions& options) {
    if (methods.empty()) {
        throw std::invalid_argument("coverage_curves: need at least one method");
    }
    if (n_trials < 1) {
        throw std::invalid_argument("coverage_curves: n_trials must be >= 1");
    }
    if (levels.empty() || !std::is_sorted(levels.begin(), levels.end())) {
        throw std::invalid_argument("coverage_curves: levels must be ascending");
    }
    for (double level : levels) {
        if (!(level > 0.0 && level < 1.0)) {
            throw std::invalid_argument("coverage_curves: levels must lie in (0, 1)");
        }
    }
    if (!(model.shape == A.signal_shape())) {
        throw std::invalid_argument("coverage_curves: model and operator shapes differ");
    }

    const std::size_t n_methods = methods.size();
    const std::size_t n_levels = levels.size();
    // covered[m][t * n_levels + l], slot-written by the trial loop
    std::vector<std::vector<std::uint8_t>> covered(
        n_methods, std::vector<std::uint8_t>(static_cast<std::size_t>(n_trials) * n_levels, 0));

    parallel_indexed(n_trials, [&](int t) {
        RngStream trial = derive_stream(master_seed, static_cast<std::uint64_t>(t));
        const Signal x_star = sample_signal(model, trial);
        const Measurement y = sample_noise(noise, A.apply(x_star), trial);
        for (std::size_t m = 0; m < n_methods; ++m) {
            const BootstrapResult result =
                run_bootstrap(est, A, noise, y, methods[m].bootstrap, trial);
            for (std::size_t l = 0; l < n_levels; ++l) {
                const bool inside =
                    options.force_infinite_radius
                        ? true
                        : contains(confidence_region(result, levels[l]), x_star);
                covered[m][static_cast<std::size_t>(t) * n_levels + l] = inside ? 1 : 0;
            }
        }
    });

    std::vector<CoverageCurve> curves;
    curves.reserve(n_methods);
    for (std::size_t m = 0; m < n_methods; ++m) {
        CoverageCurve curve;
        curve.method_tag = methods[m].name;
        curve.levels = levels;
        curve.n_trials = n_trials;
        curve.empirical.resize(n_levels);
        for (std::size_t l = 0; l < n_levels; ++l) {
            std::int64_t count = 0;
            for (int t = 0; t < n_trials; ++t) {
                count += covered[m][static_cast<std::size_t>(t) * n_levels + l];
            }
            curve.empirical[l] = static_cast<double>(count) / static_cast<double>(n_trials);
        }
        curves.push_back(std::move(curve));
    }
    return curves;
}

CoverageCurve coverage_curve(const SignalModel& model, const LinearOperator& A,
                             const NoiseModel& noise, const Estimator& est,
                             const BootstrapConfig& bootstrap_config,
                             const std::vector<double>& levels, int n_trials,
                             std::uint64_t master_seed) {
    const std::string tag = bootstrap_config.group.has_value() ? "equivariant" : "naive";
    return coverage_curves(model, A, noise, est, {MethodSpec{tag, bootstrap_config}}, levels,
                           n_trials, master_seed)
        .front();
}

double psnr(const Signal& x_hat, const Signal& x_star, double peak) {
    if (!(x_hat.shape() == x_star.shape())) {
        throw std::invalid_argument("psnr: shape mismatch");
    }
    if (!(peak > 0.0)) {
        throw std::invalid_argument("psnr: peak must be positive");
    }
    const double mse =
        (x_hat.data() - x_star.data()).squaredNorm() / static_cast<double>(x_hat.size());
    if (mse == 0.0) {
        return 300.0;
    }
    return std::min(300.0, 10.0 * std::log10(peak * peak / mse));
}

std::vector<CoverageCurve> ablation_fig5(Shape shape, const Eigen::MatrixXd& kernel,
                                         const AblationParams& params,
                                         const std::vector<double>& levels, int n_trials,
                                         std::uint64_t master_seed) {
    if (!shape.is_square()) {
        throw std::invalid_argument("ablation_fig5: rotations require a square image");
    }
    const LinearOperator A = circular_blur(shape, kernel);
    const Estimator est = tikhonov(A, params.estimator_lambda);

    // The whole point of the shifts arm is a shift-equivariant estimator;
    // refuse to run when the construction failed to deliver one.
    const GroupAction shift_group(shape, params.shift_amount, false);
    const double defect = equivariance_defect(shift_group, *est.linear_matrix());
    if (defect > 1e-8) {
        throw std::invalid_argument("ablation_fig5: estimator is not shift-equivariant");
    }

    const GroupAction model_group(shape, 1, true);
    const SignalModel model =
        make_invariant_model(model_group, shape, params.k,
                             derive_stream(master_seed, stream_ids::model), params.max_freq,
                             params.coeff_sigma);

    std::vector<MethodSpec> methods;
    BootstrapConfig naive;
    naive.n_samples = params.n_samples;
    naive.error_mode = params.error_mode;
    methods.push_back(MethodSpec{"naive", naive});

    BootstrapConfig shifts = naive;
    shifts.group = shift_group;
    methods.push_back(MethodSpec{"shifts", shifts});

    BootstrapConfig rotations = naive;
    rotations.group = GroupAction(shape, 0, true);
    methods.push_back(MethodSpec{"rotations", rotations});

    const NoiseModel noise = gaussian_noise(params.noise_sigma);
    return coverage_curves(model, A, noise, est, methods, levels, n_trials, master_seed);
}

std::vector<std::pair<MethodSpec, double>> group_grid_search(
    const SignalModel& model, const LinearOperator& A, const NoiseModel& noise,
    const Estimator& est, const std::vector<MethodSpec>& candidates,
    const std::vector<double>& levels, int n_trials, std::uint64_t master_seed) {
    const auto curves =
        coverage_curves(model, A, noise, est, candidates, levels, n_trials, master_seed);
    std::vector<std::pair<MethodSpec, double>> ranked;
    ranked.reserve(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        ranked.emplace_back(candidates[i], curves[i].mad());
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second < b.second; });
    return ranked;
}

namespace {

Eigen::VectorXd ranks_with_ties(const Eigen::VectorXd& v) {
    const Eigen::Index n = v.size();
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return v[a] < v[b]; });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && v[order[static_cast<std::size_t>(j + 1)]] ==
                                v[order[static_cast<std::size_t>(i)]]) {
            ++j;
        }
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) {
            ranks[order[static_cast<std::size_t>(k)]] = avg;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("spearman: need two equal-length vectors, size >= 2");
    }
    const Eigen::VectorXd ra = ranks_with_ties(a);
    const Eigen::VectorXd rb = ranks_with_ties(b);
    const Eigen::VectorXd ca = ra.array() - ra.mean();
    const Eigen::VectorXd cb = rb.array() - rb.mean();
    const double denom = ca.norm() * cb.norm();
    if (denom == 0.0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return ca.dot(cb) / denom;
}

}  // namespace eqboot
