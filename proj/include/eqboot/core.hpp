#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace eqboot {

/// Thrown when a configuration file is missing, malformed, or violates the schema.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown when a numeric procedure cannot proceed (singular system, rank deficiency).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Shape {
    int height = 0;
    int width = 0;

    int n() const { return height * width; }
    bool is_square() const { return height == width; }
    bool operator==(const Shape&) const = default;
};

/// Real n-vector carrying a 2D (H x W) layout, single channel.
/// Entries are validated finite on construction, so every Signal produced by
/// the library satisfies the no-NaN/Inf invariant.
class Signal {
public:
    Signal(Eigen::VectorXd data, Shape shape);

    const Eigen::VectorXd& data() const { return data_; }
    Shape shape() const { return shape_; }
    Eigen::Index size() const { return data_.size(); }

    static Signal zeros(Shape shape);

private:
    Eigen::VectorXd data_;
    Shape shape_;
};

/// Real m-vector of measurements. Entries validated finite on construction.
class Measurement {
public:
    explicit Measurement(Eigen::VectorXd data);

    const Eigen::VectorXd& data() const { return data_; }
    Eigen::Index size() const { return data_.size(); }

    static Measurement zeros(Eigen::Index m);

private:
    Eigen::VectorXd data_;
};

struct NoiseModel {
    enum class Kind { Gaussian };

    Kind kind = Kind::Gaussian;
    double sigma = 0.0;
};

NoiseModel gaussian_noise(double sigma);

/// Splittable pseudo-random stream (xoshiro256++ seeded via splitmix64 from a
/// (master_seed, stream_id) pair). The contract:
///   - equal (master_seed, stream_id) => bit-identical sequences, on any machine;
///   - distinct stream_ids => statistically independent sequences;
///   - child(k) derives an independent family keyed by k, from the identity
///     fields only, never from the consumed state.
/// Every consumer owns its stream; nothing here is thread-safe by design.
class RngStream {
public:
    RngStream() : RngStream(0, 0) {}
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64();

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit();

    /// Standard normal via Box-Muller; consumes exactly two u64 draws.
    double next_gaussian();

    /// Uniform integer in [lo, hi] inclusive. A degenerate range (lo == hi)
    /// consumes no randomness, which keeps the trivial-group bootstrap
    /// bitstream identical to the naive one.
    std::int64_t next_int(std::int64_t lo, std::int64_t hi);

    RngStream child(std::uint64_t k) const;

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_;
};

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id);

/// Reserved stream ids under a run's master seed. Trial streams use the trial
/// index directly, so the reserved ids sit far above any realistic count.
namespace stream_ids {
constexpr std::uint64_t model = 0xE9B0070000000001ULL;
constexpr std::uint64_t op = 0xE9B0070000000002ULL;
constexpr std::uint64_t training = 0xE9B0070000000003ULL;
constexpr std::uint64_t pixelmap = 0xE9B0070000000004ULL;
}  // namespace stream_ids

/// mean + sigma * z with z i.i.d. standard normal, entry order fixed.
/// sigma == 0 returns the mean untouched and consumes no randomness.
Measurement sample_noise(const NoiseModel& model, const Measurement& mean, RngStream& rng);

/// Number of OpenMP threads the parallel kernels may use; honors the
/// EQBOOT_THREADS environment variable as an upper cap. Results never depend
/// on this value, only wall time does.
int thread_count();

}  // namespace eqboot
