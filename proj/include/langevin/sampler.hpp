#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "langevin/rng.hpp"
#include "langevin/targets.hpp"

namespace langevin {

enum class OracleMode { exact, gaussian_noise, subsampled };

/// Law of the standardized gradient noise ζ. Both have E‖ζ‖² = p.
enum class NoiseLaw { gaussian, rademacher };

/// How the chain observes ∇f.
///
///   exact           Y = ∇f(θ)
///   gaussian_noise  Y = ∇f(θ) + σζ, ζ i.i.d. zero mean, fresh every step
///   subsampled      Y = (n/b) Σ_{i∈B} ∇f_i(θ), B a uniform size-b subset
///                   drawn without replacement (b ≥ n gives the exact gradient)
struct GradientOracle {
    OracleMode mode = OracleMode::exact;
    double sigma = 0.0;
    std::size_t batch = 1;
    NoiseLaw law = NoiseLaw::gaussian;

    static GradientOracle exact() { return {}; }
    static GradientOracle gaussian_noise(double sigma, NoiseLaw law = NoiseLaw::gaussian) {
        return {OracleMode::gaussian_noise, sigma, 1, law};
    }
    static GradientOracle subsampled(std::size_t batch) { return {OracleMode::subsampled, 0.0, batch}; }

    /// Throws std::invalid_argument on σ < 0, σ ≠ 0 in exact mode, or batch = 0.
    void validate() const;
};

std::string to_string(OracleMode mode);

struct LmcConfig {
    double h = 0.0;
    std::uint64_t K = 0;
    std::uint64_t seed = 0;
    GradientOracle oracle;
};

/// Deterministic start, or a sampler for ν₀ fed by its own derived stream.
using InitialSampler = std::function<Vector(Rng&)>;
using Initial = std::variant<Vector, InitialSampler>;

struct Trajectory {
    std::vector<Vector> iterates;  // θ⁽⁰⁾ … θ⁽ᴷ⁾
    LmcConfig config;
    double wall_seconds = 0.0;

    const Vector& final_iterate() const { return iterates.back(); }
    std::size_t size() const { return iterates.size(); }
};

/// Callback for non-fatal diagnostics (step sizes outside (0, 2/M)).
/// The default handler writes to std::cerr. Returns the previous handler.
using WarningHandler = std::function<void(const std::string&)>;
WarningHandler set_warning_handler(WarningHandler handler);

/// Returns a warning text when h ≥ 2/M, the range where no guarantee holds.
std::optional<std::string> step_size_warning(double h, double M);

/// One Langevin update θ − h∇f(θ) + √(2h)·noise. The noise is an argument,
/// nothing is drawn here.
Vector lmc_step(const Vector& state, const TargetPotential& target, double h, const Vector& noise);

/// One noisy update θ − h·Y + √(2h)·noise for an already observed Y.
Vector nlmc_step(const Vector& state, const Vector& gradient_estimate, double h, const Vector& noise);

/// Draws one gradient observation at θ according to `oracle`, consuming only
/// the gradient stream.
Vector observe_gradient(const TargetPotential& target, const GradientOracle& oracle, const Vector& theta, Rng& rng);

/// Exact-gradient Langevin chain. Uses replica `replica`'s diffusion stream.
Trajectory run_lmc(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                   std::uint64_t replica = 0);

/// Noisy-gradient chain. ξ comes from the same diffusion stream as run_lmc,
/// ζ from a separate gradient stream, so σ = 0 reproduces run_lmc bit for bit.
Trajectory run_nlmc(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                    std::uint64_t replica = 0);

/// Langevin chain on f/τ with step τ/M, written in terms of f:
///   θ ← θ − (1/M)∇f(θ) + √(2τ/M)ξ.
/// τ = 0 is plain gradient descent with step 1/M.
Trajectory run_tempered_lmc(const TargetPotential& target, double tau, std::uint64_t K, std::uint64_t seed,
                            const Initial& initial);

/// θ ← θ − h∇f(θ), K times. Returns K+1 points.
std::vector<Vector> gradient_descent(const TargetPotential& target, double h, std::uint64_t K, const Vector& initial);

/// Final iterates of `replicas` independent chains (row r = replica r),
/// dispatching on config.oracle. Row r equals run_lmc/run_nlmc(..., r).final_iterate().
/// Deterministic regardless of the thread count.
Matrix run_replicas(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                    std::size_t replicas, std::size_t threads = 0);

}  // namespace langevin
