#include "eqboot/theory.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace eqboot {

namespace {

constexpr std::size_t kMaxGroup = 100000;
constexpr int kMaxDenseDim = 1024;

std::vector<std::vector<int>> all_source_maps(const GroupAction& action) {
    const auto elements = action.full_enumeration();
    std::vector<std::vector<int>> maps;
    maps.reserve(elements.size());
    for (const GroupElement& g : elements) {
        maps.push_back(source_index_map(action, g));
    }
    return maps;
}

void check_limits(const GroupAction& action, Eigen::Index n) {
    if (action.full_group_size() > kMaxGroup) {
        throw std::invalid_argument("theory: group too large to enumerate");
    }
    if (n > kMaxDenseDim) {
        throw std::invalid_argument("theory: dense dimension exceeds 1024");
    }
    if (n != action.shape().n()) {
        throw std::invalid_argument("theory: matrix dimension does not match group shape");
    }
}

// (T_g x)[i] = x[src[i]]
Eigen::VectorXd permute(const std::vector<int>& src, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] = x[src[static_cast<std::size_t>(i)]];
    }
    return out;
}

// (T_g^{-1} x)[src[i]] = x[i] because T_g^{-1} = T_g^T for permutations.
Eigen::VectorXd permute_inverse(const std::vector<int>& src, const Eigen::VectorXd& x) {
    Eigen::VectorXd out(x.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[src[static_cast<std::size_t>(i)]] = x[i];
    }
    return out;
}

}  // namespace

Eigen::MatrixXd reynolds(const GroupAction& action, const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols()) {
        throw std::invalid_argument("reynolds: matrix must be square");
    }
    check_limits(action, C.rows());
    const auto maps = all_source_maps(action);
    const auto n = static_cast<int>(C.rows());
    const double inv_size = 1.0 / static_cast<double>(maps.size());

    // (T_g^{-1} C T_g)(i, j) = C(src_g(i), src_g(j)); each output entry is a
    // g-ordered sum, identical for any thread count and bitwise equal to the
    // serial dense-product reference.
    Eigen::MatrixXd out(n, n);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            double acc = 0.0;
            for (const auto& src : maps) {
                acc += C(src[static_cast<std::size_t>(i)], src[static_cast<std::size_t>(j)]);
            }
            out(i, j) = acc * inv_size;
        }
    }
    return out;
}

double equivariance_defect(const GroupAction& action, const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols()) {
        throw std::invalid_argument("equivariance_defect: matrix must be square");
    }
    check_limits(action, C.rows());
    const double denom = C.norm();
    if (denom == 0.0) {
        return 0.0;
    }
    const auto maps = all_source_maps(action);
    const auto n = static_cast<Eigen::Index>(C.rows());
    std::vector<double> defects(maps.size(), 0.0);
    const auto n_groups = static_cast<std::int64_t>(maps.size());
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::int64_t gi = 0; gi < n_groups; ++gi) {
        const auto& src = maps[static_cast<std::size_t>(gi)];
        // (T_g C)(i, j) = C(src(i), j) and (C T_g)(i, j) = C(i, inv(j)).
        std::vector<int> inv(src.size());
        for (std::size_t i = 0; i < src.size(); ++i) {
            inv[static_cast<std::size_t>(src[i])] = static_cast<int>(i);
        }
        double ss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
                const double d =
                    C(src[static_cast<std::size_t>(i)], j) - C(i, inv[static_cast<std::size_t>(j)]);
                ss += d * d;
            }
        }
        defects[static_cast<std::size_t>(gi)] = std::sqrt(ss);
    }
    double worst = 0.0;
    for (double d : defects) {
        worst = std::max(worst, d);
    }
    return worst / denom;
}

BiasReport bias_decomposition(const Eigen::MatrixXd& B, const Eigen::MatrixXd& basis,
                              const GroupAction& action, const Signal& x_star) {
    const Eigen::Index n = B.rows();
    if (B.cols() != n) {
        throw std::invalid_argument("bias_decomposition: B must be square");
    }
    if (basis.rows() != n || x_star.size() != n) {
        throw std::invalid_argument("bias_decomposition: dimension mismatch");
    }
    check_limits(action, n);

    const Eigen::MatrixXd b_star = basis * basis.transpose();
    const auto maps = all_source_maps(action);

    // Precondition: basis spans a G-invariant subspace.
    for (const auto& src : maps) {
        Eigen::MatrixXd tu(basis.rows(), basis.cols());
        for (Eigen::Index c = 0; c < basis.cols(); ++c) {
            tu.col(c) = permute(src, basis.col(c));
        }
        const double defect = (tu - b_star * tu).norm();
        if (defect > 1e-8) {
            throw std::invalid_argument("bias_decomposition: basis is not G-invariant");
        }
    }
    const Eigen::VectorXd x = x_star.data();
    if ((x - b_star * x).norm() > 1e-8 * std::max(1.0, x.norm())) {
        throw std::invalid_argument("bias_decomposition: x_star lies outside the subspace");
    }

    const Eigen::MatrixXd R = B - b_star;
    const Eigen::VectorXd rx = R * x;
    const Eigen::VectorXd bx = B * x;

    BiasReport report;
    report.true_error = rx.squaredNorm();
    report.bias1 = rx.dot(b_star * rx);

    const Eigen::MatrixXd inner =
        R.transpose() * R + R.transpose() * b_star + b_star * R - 2.0 * R;
    report.bias2 = bx.dot(reynolds(action, inner) * bx);

    // lhs = mean_g ||T_g^{-1} B T_g B x - B x||^2, slot-parallel then ordered sum.
    std::vector<double> terms(maps.size(), 0.0);
#pragma omp parallel for schedule(static) num_threads(thread_count())
    for (std::size_t gi = 0; gi < maps.size(); ++gi) {
        const auto& src = maps[gi];
        const Eigen::VectorXd term = permute_inverse(src, B * permute(src, bx));
        terms[gi] = (term - bx).squaredNorm();
    }
    double acc = 0.0;
    for (double t : terms) {
        acc += t;
    }
    report.lhs = acc / static_cast<double>(maps.size());
    report.residual =
        std::abs(report.lhs - (report.true_error - report.bias1 + report.bias2));
    return report;
}

ConsistencyReport measurement_consistency_check(const Eigen::MatrixXd& A,
                                                const Eigen::MatrixXd& M,
                                                const Eigen::MatrixXd& basis, RngStream rng) {
    const Eigen::Index m = A.rows();
    const Eigen::Index n = A.cols();
    if (M.rows() != n || M.cols() != m || basis.rows() != n) {
        throw std::invalid_argument("measurement_consistency_check: dimension mismatch");
    }
    ConsistencyReport report;
    report.am_residual = (A * M - Eigen::MatrixXd::Identity(m, m)).norm();
    report.consistent = report.am_residual <= 1e-8;

    const Eigen::MatrixXd au = A * basis;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(au, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double tol = std::numeric_limits<double>::epsilon() *
                       static_cast<double>(std::max(au.rows(), au.cols())) * sv[0];
    if (sv.minCoeff() <= tol) {
        throw NumericError("measurement_consistency_check: A restricted to the basis is rank-deficient");
    }
    const Eigen::MatrixXd pinv_au =
        svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    const Eigen::MatrixXd b_star = basis * pinv_au * A;  // M* A
    const Eigen::MatrixXd R = M * A - b_star;

    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXd coeff(basis.cols());
        for (Eigen::Index i = 0; i < coeff.size(); ++i) {
            coeff[i] = rng.next_gaussian();
        }
        const Eigen::VectorXd x = basis * coeff;
        const Eigen::VectorXd rx = R * x;
        report.max_bias1 = std::max(report.max_bias1, std::abs(rx.dot(b_star * rx)));
    }
    return report;
}

Eigen::MatrixXd cyclic_fourier_basis(int n, const std::vector<int>& freqs) {
    if (n < 2) {
        throw std::invalid_argument("cyclic_fourier_basis: n must be >= 2");
    }
    Eigen::Index cols = 0;
    for (int f : freqs) {
        if (f < 0 || 2 * f >= n) {
            throw std::invalid_argument("cyclic_fourier_basis: frequency out of (0, n/2) range");
        }
        cols += f == 0 ? 1 : 2;
    }
    Eigen::MatrixXd basis(n, cols);
    Eigen::Index c = 0;
    for (int f : freqs) {
        if (f == 0) {
            basis.col(c++).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
            continue;
        }
        const double norm = std::sqrt(2.0 / static_cast<double>(n));
        for (int i = 0; i < n; ++i) {
            const double phase = 2.0 * M_PI * f * i / n;
            basis(i, c) = norm * std::cos(phase);
            basis(i, c + 1) = norm * std::sin(phase);
        }
        c += 2;
    }
    return basis;
}

bool TheorySuiteReport::all_pass() const {
    for (const TheoryCheck& c : checks) {
        if (!c.pass) {
            return false;
        }
    }
    return true;
}

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, double scale,
                              RngStream& rng) {
    Eigen::MatrixXd M(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            M(i, j) = scale * rng.next_gaussian();
        }
    }
    return M;
}

Eigen::MatrixXd circulant_from_first_row(const Eigen::VectorXd& row) {
    const Eigen::Index n = row.size();
    Eigen::MatrixXd C(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            C(i, j) = row[(j - i + n) % n];
        }
    }
    return C;
}

}  // namespace

TheorySuiteReport run_theory_suite(int n, std::uint64_t seed, int instances,
                                   double perturb_lhs) {
    if (n < 4 || n > 64) {
        throw std::invalid_argument("run_theory_suite: n must lie in [4, 64]");
    }
    if (instances < 1) {
        throw std::invalid_argument("run_theory_suite: instances must be >= 1");
    }
    const Shape shape{1, n};
    const GroupAction shifts(shape, 1, false);  // full cyclic group of order n
    RngStream rng = derive_stream(seed, 0);

    TheorySuiteReport report;

    // ---- Appendix identity: lhs = true - bias1 + bias2 over random B = UU^T + R
    {
        const std::vector<int> freqs = n >= 8 ? std::vector<int>{0, 1, 2} : std::vector<int>{0, 1};
        const Eigen::MatrixXd basis = cyclic_fourier_basis(n, freqs);
        double worst = 0.0;
        for (int inst = 0; inst < instances; ++inst) {
            const Eigen::MatrixXd R = random_matrix(n, n, 0.3, rng);
            const Eigen::MatrixXd B = basis * basis.transpose() + R;
            Eigen::VectorXd coeff(basis.cols());
            for (Eigen::Index i = 0; i < coeff.size(); ++i) {
                coeff[i] = rng.next_gaussian();
            }
            const Signal x_star(basis * coeff, shape);
            BiasReport bias = bias_decomposition(B, basis, shifts, x_star);
            const double lhs = bias.lhs + perturb_lhs;
            const double resid = std::abs(lhs - (bias.true_error - bias.bias1 + bias.bias2)) /
                                 std::max(1.0, std::abs(lhs));
            worst = std::max(worst, resid);
        }
        report.checks.push_back(TheoryCheck{"bias identity (randomized)", worst <= 1e-8,
                                            worst, 1e-8});
    }

    // ---- Reynolds properties
    {
        const Eigen::MatrixXd C = random_matrix(n, n, 1.0, rng);
        const Eigen::MatrixXd P = reynolds(shifts, C);
        const double idem = (reynolds(shifts, P) - P).norm() / std::max(1.0, P.norm());
        report.checks.push_back(TheoryCheck{"Reynolds idempotence", idem <= 1e-10, idem, 1e-10});

        const double contraction = P.norm() - C.norm();
        report.checks.push_back(
            TheoryCheck{"Reynolds contraction", contraction <= 1e-12, contraction, 1e-12});

        const double fixed_defect = equivariance_defect(shifts, P);
        report.checks.push_back(TheoryCheck{"Reynolds output is equivariant",
                                            fixed_defect <= 1e-10, fixed_defect, 1e-10});

        Eigen::VectorXd row(n);
        for (int i = 0; i < n; ++i) {
            row[i] = rng.next_gaussian();
        }
        const Eigen::MatrixXd circ = circulant_from_first_row(row);
        const double fixed_point = (reynolds(shifts, circ) - circ).norm() / circ.norm();
        report.checks.push_back(TheoryCheck{"circulant is a fixed point",
                                            fixed_point <= 1e-12, fixed_point, 1e-12});
    }

    // ---- Measurement-consistency lemma
    {
        const int m = n / 2;
        const std::vector<int> freqs{0, 1};
        const Eigen::MatrixXd basis = cyclic_fourier_basis(n, freqs);
        const Eigen::MatrixXd A = random_matrix(m, n, 1.0, rng);
        const Eigen::MatrixXd AAt = A * A.transpose();
        const Eigen::MatrixXd Mright = A.transpose() * AAt.llt().solve(
                                            Eigen::MatrixXd::Identity(m, m));
        const ConsistencyReport right =
            measurement_consistency_check(A, Mright, basis, rng.child(1));
        report.checks.push_back(TheoryCheck{"right inverse is consistent",
                                            right.consistent, right.am_residual, 1e-8});
        report.checks.push_back(TheoryCheck{"consistent => bias1 vanishes",
                                            right.max_bias1 <= 1e-10, right.max_bias1, 1e-10});

        const ConsistencyReport zero = measurement_consistency_check(
            A, Eigen::MatrixXd::Zero(n, m), basis, rng.child(2));
        report.checks.push_back(TheoryCheck{"zero estimator is inconsistent",
                                            !zero.consistent, zero.am_residual, 1e-8});
    }

    return report;
}

}  // namespace eqboot
