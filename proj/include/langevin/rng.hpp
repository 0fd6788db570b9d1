#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace langevin {

/// SplitMix64 finalizer. Used to derive independent seeds for replicas and
/// noise streams from a single user seed.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of stream `stream` of replica `replica` under the user seed `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t replica, std::uint64_t stream) noexcept;

/// Identifiers of the noise streams a chain consumes.
enum class Stream : std::uint64_t {
    diffusion = 0,  // xi, one standard-normal vector per step
    gradient = 1,   // zeta or minibatch indices, drawn only by noisy oracles
    init = 2,       // user-supplied initial samplers
};

/// Seeded source of standard normals, uniforms and integers.
///
/// Engine is std::mt19937_64; normals come from std::normal_distribution.
/// Streams are fully determined by (seed, replica, stream).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t replica, Stream stream)
        : engine_(derive_seed(seed, replica, static_cast<std::uint64_t>(stream))) {}

    double normal() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n) {
        return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
    }
    /// +1 or -1 with equal probability.
    double rademacher() { return (engine_() >> 63) ? 1.0 : -1.0; }

    void fill_normal(Eigen::Ref<Eigen::VectorXd> out) {
        for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = normal_(engine_);
    }
    Eigen::VectorXd normal_vector(Eigen::Index p) {
        Eigen::VectorXd v(p);
        fill_normal(v);
        return v;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace langevin
