#include "eqboot/core.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>

namespace eqboot {

namespace {

void require_finite(const Eigen::VectorXd& v, const char* what) {
    if (!v.allFinite()) {
        throw std::invalid_argument(std::string(what) + ": entries must be finite");
    }
}

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t splitmix_next(std::uint64_t& s) {
    s += kGolden;
    return mix64(s);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Signal::Signal(Eigen::VectorXd data, Shape shape) : data_(std::move(data)), shape_(shape) {
    if (shape.height <= 0 || shape.width <= 0) {
        throw std::invalid_argument("Signal: shape dimensions must be positive");
    }
    if (data_.size() != static_cast<Eigen::Index>(shape.n())) {
        throw std::invalid_argument("Signal: data length does not match height*width");
    }
    require_finite(data_, "Signal");
}

Signal Signal::zeros(Shape shape) {
    return Signal(Eigen::VectorXd::Zero(shape.n()), shape);
}

Measurement::Measurement(Eigen::VectorXd data) : data_(std::move(data)) {
    require_finite(data_, "Measurement");
}

Measurement Measurement::zeros(Eigen::Index m) {
    return Measurement(Eigen::VectorXd::Zero(m));
}

NoiseModel gaussian_noise(double sigma) {
    if (sigma < 0.0) {
        throw std::invalid_argument("NoiseModel: sigma must be nonnegative");
    }
    return NoiseModel{NoiseModel::Kind::Gaussian, sigma};
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed), stream_id_(stream_id) {
    std::uint64_t s = mix64(master_seed) ^ mix64(stream_id + kGolden);
    for (auto& word : state_) {
        word = splitmix_next(s);
    }
    if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) {
        state_[0] = kGolden;
    }
}

std::uint64_t RngStream::next_u64() {
    // xoshiro256++
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double RngStream::next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_gaussian() {
    // Box-Muller with a fixed two-draw footprint; u1 in (0,1] keeps log finite.
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

std::int64_t RngStream::next_int(std::int64_t lo, std::int64_t hi) {
    if (lo > hi) {
        throw std::invalid_argument("RngStream::next_int: empty range");
    }
    if (lo == hi) {
        return lo;
    }
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    const auto draw = static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * span) >> 64);
    return lo + static_cast<std::int64_t>(draw);
}

RngStream RngStream::child(std::uint64_t k) const {
    const std::uint64_t derived_master =
        mix64(master_seed_ ^ (stream_id_ * 0xD2B74407B1CE6E93ULL + 0x3C79AC492BA7B653ULL));
    return RngStream(derived_master, k);
}

RngStream derive_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RngStream(master_seed, stream_id);
}

Measurement sample_noise(const NoiseModel& model, const Measurement& mean, RngStream& rng) {
    if (model.sigma < 0.0) {
        throw std::invalid_argument("sample_noise: sigma must be nonnegative");
    }
    if (model.sigma == 0.0) {
        return mean;
    }
    Eigen::VectorXd out = mean.data();
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        out[i] += model.sigma * rng.next_gaussian();
    }
    return Measurement(std::move(out));
}

int thread_count() {
    int n = omp_get_max_threads();
    if (const char* cap = std::getenv("EQBOOT_THREADS")) {
        const long parsed = std::strtol(cap, nullptr, 10);
        if (parsed >= 1 && parsed < n) {
            n = static_cast<int>(parsed);
        }
    }
    return n < 1 ? 1 : n;
}

}  // namespace eqboot
