#pragma once

#include "eqboot/bootstrap.hpp"
#include "eqboot/core.hpp"
#include "eqboot/estimators.hpp"
#include "eqboot/groups.hpp"
#include "eqboot/operators.hpp"

#include <string>
#include <vector>

namespace eqboot {

/// Gaussian signal prior supported on a G-invariant subspace: x = U c with
/// c ~ N(0, coeff_sigma^2 I).
struct SignalModel {
    Eigen::MatrixXd basis;  // n x k, orthonormal columns
    double coeff_sigma = 1.0;
    Shape shape{};

    Eigen::Index dim() const { return basis.cols(); }
};

/// Builds an exactly G-invariant subspace: draws k Gaussian seed images
/// (band-limited to the lowest max_freq frequencies per axis when
/// max_freq >= 0), stacks every group transform of every seed, and
/// orthonormalizes with a rank-revealing SVD. Under a full shift group a
/// white seed excites every Fourier mode and the hull becomes all of R^n,
/// so band-limited seeds are the handle that keeps the subspace
/// low-dimensional.
SignalModel make_invariant_model(const GroupAction& action, Shape shape, int k, RngStream rng,
                                 int max_freq = -1, double coeff_sigma = 1.0);

/// Largest invariance defect max_g ||(I - U U^T) T_g U||_F of the model basis.
double model_invariance_defect(const SignalModel& model, const GroupAction& action);

Signal sample_signal(const SignalModel& model, RngStream& rng);

struct CoverageCurve {
    std::string method_tag;
    std::vector<double> levels;
    std::vector<double> empirical;
    int n_trials = 0;

    /// Mean absolute deviation from the diagonal, mean_l |empirical - level|.
    double mad() const;
};

struct MethodSpec {
    std::string name;
    BootstrapConfig bootstrap;
};

struct CoverageOptions {
    /// Debug hook: force every region to infinite radius (coverage == 1).
    bool force_infinite_radius = false;
};

/// Runs the coverage protocol: per trial draw x* from the model, simulate
/// y ~ P(A x*), bootstrap with every method on the SAME (x*, y), and record
/// region membership of x* per confidence level. Trial t draws from the
/// stream family (master_seed, t); trials run in parallel with slot-indexed
/// aggregation, so output is independent of thread count.
std::vector<CoverageCurve> coverage_curves(const SignalModel& model, const LinearOperator& A,
                                           const NoiseModel& noise, const Estimator& est,
                                           const std::vector<MethodSpec>& methods,
                                           const std::vector<double>& levels, int n_trials,
                                           std::uint64_t master_seed,
                                           const CoverageOptions& options = {});

CoverageCurve coverage_curve(const SignalModel& model, const LinearOperator& A,
                             const NoiseModel& noise, const Estimator& est,
                             const BootstrapConfig& bootstrap_config,
                             const std::vector<double>& levels, int n_trials,
                             std::uint64_t master_seed);

/// 10 log10(peak^2 / MSE) in dB, capped at 300 when MSE = 0.
double psnr(const Signal& x_hat, const Signal& x_star, double peak);

struct AblationParams {
    int k = 12;                 // seed count for the invariant model
    int max_freq = 3;           // seed band limit
    double coeff_sigma = 1.0;
    double noise_sigma = 0.01;
    double estimator_lambda = 1e-2;
    int n_samples = 200;        // bootstrap replicates per trial
    int shift_amount = 3;       // Delta t of the shifts-only arm
    ErrorMode error_mode = ErrorMode::ForwardTransform;
};

/// Anisotropic-deblurring ablation: naive vs shifts-only vs rotations-only
/// arms over paired trials, with a Tikhonov estimator whose shift equivariance
/// is verified before running. Signals live in a subspace invariant under
/// shifts and quarter-turn rotations.
std::vector<CoverageCurve> ablation_fig5(Shape shape, const Eigen::MatrixXd& kernel,
                                         const AblationParams& params,
                                         const std::vector<double>& levels, int n_trials,
                                         std::uint64_t master_seed);

/// Coverage-MAD grid search over candidate group configurations; returns one
/// (method, mad) entry per candidate, cheapest calibration helper possible.
std::vector<std::pair<MethodSpec, double>> group_grid_search(
    const SignalModel& model, const LinearOperator& A, const NoiseModel& noise,
    const Estimator& est, const std::vector<MethodSpec>& candidates,
    const std::vector<double>& levels, int n_trials, std::uint64_t master_seed);

/// Spearman rank correlation with average ranks for ties; NaN when either
/// input has zero rank variance.
double spearman(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace eqboot
