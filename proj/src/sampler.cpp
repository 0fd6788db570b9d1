#include "langevin/sampler.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "langevin/parallel.hpp"

namespace langevin {

namespace {

std::mutex warning_mutex;
WarningHandler warning_handler = [](const std::string& text) { std::cerr << "warning: " << text << '\n'; };

void warn(const std::string& text) {
    std::lock_guard lock(warning_mutex);
    if (warning_handler) warning_handler(text);
}

void check_step(double h, const TargetPotential& target) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        std::ostringstream msg;
        msg << "step size h must be positive and finite, got " << h;
        throw std::invalid_argument(msg.str());
    }
    if (auto text = step_size_warning(h, target.M())) warn(*text);
}

Vector start_point(const TargetPotential& target, const Initial& initial, std::uint64_t seed,
                   std::uint64_t replica) {
    Vector x;
    if (const auto* point = std::get_if<Vector>(&initial)) {
        x = *point;
    } else {
        Rng rng(seed, replica, Stream::init);
        x = std::get<InitialSampler>(initial)(rng);
    }
    if (x.size() != target.dim()) {
        std::ostringstream msg;
        msg << "initial point has dimension " << x.size() << ", target has " << target.dim();
        throw std::invalid_argument(msg.str());
    }
    return x;
}

// Runs the chain θ ← θ − h·Y(θ) + √(2h)ξ and calls visit(k, θ⁽ᵏ⁾) for k = 0..K.
// ξ is drawn from the diffusion stream before Y touches the gradient stream.
template <typename Visit>
void run_chain(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
               std::uint64_t replica, Visit&& visit) {
    Vector theta = start_point(target, initial, config.seed, replica);
    Rng diffusion(config.seed, replica, Stream::diffusion);
    Rng gradient_noise(config.seed, replica, Stream::gradient);
    const double scale = std::sqrt(2.0 * config.h);
    const bool exact = config.oracle.mode == OracleMode::exact;

    Vector xi(target.dim());
    visit(std::uint64_t{0}, theta);
    for (std::uint64_t k = 0; k < config.K; ++k) {
        diffusion.fill_normal(xi);
        const Vector y = exact ? target.gradient(theta) : observe_gradient(target, config.oracle, theta, gradient_noise);
        theta -= config.h * y;
        theta += scale * xi;
        visit(k + 1, theta);
    }
}

Trajectory record(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                  std::uint64_t replica) {
    const auto t0 = std::chrono::steady_clock::now();
    Trajectory out;
    out.config = config;
    out.iterates.reserve(config.K + 1);
    run_chain(target, config, initial, replica, [&](std::uint64_t, const Vector& theta) { out.iterates.push_back(theta); });
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

}  // namespace

void GradientOracle::validate() const {
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("oracle noise level sigma must be >= 0");
    if (mode == OracleMode::exact && sigma != 0.0) throw std::invalid_argument("exact oracle requires sigma = 0");
    if (mode == OracleMode::subsampled && batch == 0) throw std::invalid_argument("subsampled oracle needs batch >= 1");
}

std::string to_string(OracleMode mode) {
    switch (mode) {
        case OracleMode::exact: return "exact";
        case OracleMode::gaussian_noise: return "gaussian_noise";
        case OracleMode::subsampled: return "subsampled";
    }
    return "unknown";
}

WarningHandler set_warning_handler(WarningHandler handler) {
    std::lock_guard lock(warning_mutex);
    std::swap(warning_handler, handler);
    return handler;
}

std::optional<std::string> step_size_warning(double h, double M) {
    if (h >= 2.0 / M) {
        std::ostringstream msg;
        msg << "step size h=" << h << " is >= 2/M=" << 2.0 / M << "; convergence guarantees need h < 2/M";
        return msg.str();
    }
    return std::nullopt;
}

Vector lmc_step(const Vector& state, const TargetPotential& target, double h, const Vector& noise) {
    if (noise.size() != state.size()) throw std::invalid_argument("lmc_step: noise and state dimensions differ");
    if (!(h > 0.0)) throw std::invalid_argument("lmc_step: h must be positive");
    return nlmc_step(state, target.gradient(state), h, noise);
}

Vector nlmc_step(const Vector& state, const Vector& gradient_estimate, double h, const Vector& noise) {
    if (noise.size() != state.size() || gradient_estimate.size() != state.size()) {
        throw std::invalid_argument("nlmc_step: dimension mismatch");
    }
    if (!(h > 0.0)) throw std::invalid_argument("nlmc_step: h must be positive");
    return state - h * gradient_estimate + std::sqrt(2.0 * h) * noise;
}

Vector observe_gradient(const TargetPotential& target, const GradientOracle& oracle, const Vector& theta, Rng& rng) {
    switch (oracle.mode) {
        case OracleMode::exact: return target.gradient(theta);
        case OracleMode::gaussian_noise: {
            Vector y = target.gradient(theta);
            Vector zeta(theta.size());
            if (oracle.law == NoiseLaw::gaussian) {
                rng.fill_normal(zeta);
            } else {
                for (Eigen::Index i = 0; i < zeta.size(); ++i) zeta[i] = rng.rademacher();
            }
            y += oracle.sigma * zeta;
            return y;
        }
        case OracleMode::subsampled: {
            if (!target.has_terms()) {
                throw std::invalid_argument("subsampled oracle: target '" + target.kind() +
                                            "' has no per-observation gradients");
            }
            const std::size_t n = target.term_count();
            if (oracle.batch >= n) return target.gradient(theta);
            // Partial Fisher-Yates over an index table gives a uniform subset.
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), std::size_t{0});
            Vector y = Vector::Zero(theta.size());
            for (std::size_t j = 0; j < oracle.batch; ++j) {
                const std::size_t pick = j + rng.index(n - j);
                std::swap(idx[j], idx[pick]);
                y += target.term_gradient(idx[j], theta);
            }
            return y * (static_cast<double>(n) / static_cast<double>(oracle.batch));
        }
    }
    throw std::logic_error("unknown oracle mode");
}

Trajectory run_lmc(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                   std::uint64_t replica) {
    if (config.oracle.mode != OracleMode::exact) throw std::invalid_argument("run_lmc requires the exact oracle");
    config.oracle.validate();
    check_step(config.h, target);
    return record(target, config, initial, replica);
}

Trajectory run_nlmc(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                    std::uint64_t replica) {
    if (config.oracle.mode == OracleMode::exact) {
        throw std::invalid_argument("run_nlmc requires a gaussian_noise or subsampled oracle");
    }
    config.oracle.validate();
    if (config.oracle.mode == OracleMode::subsampled && !target.has_terms()) {
        throw std::invalid_argument("subsampled oracle: target '" + target.kind() + "' has no per-observation gradients");
    }
    check_step(config.h, target);
    return record(target, config, initial, replica);
}

Trajectory run_tempered_lmc(const TargetPotential& target, double tau, std::uint64_t K, std::uint64_t seed,
                            const Initial& initial) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw std::invalid_argument("tempered chain: tau must be >= 0");
    const auto t0 = std::chrono::steady_clock::now();
    const double inv_M = 1.0 / target.M();
    Trajectory out;
    out.config = LmcConfig{tau * inv_M, K, seed, GradientOracle::exact()};

    if (tau == 0.0) {
        out.iterates = gradient_descent(target, inv_M, K, start_point(target, initial, seed, 0));
    } else {
        Vector theta = start_point(target, initial, seed, 0);
        Rng diffusion(seed, 0, Stream::diffusion);
        const double scale = std::sqrt(2.0 * tau * inv_M);
        Vector xi(target.dim());
        out.iterates.reserve(K + 1);
        out.iterates.push_back(theta);
        for (std::uint64_t k = 0; k < K; ++k) {
            diffusion.fill_normal(xi);
            theta -= inv_M * target.gradient(theta);
            theta += scale * xi;
            out.iterates.push_back(theta);
        }
    }
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::vector<Vector> gradient_descent(const TargetPotential& target, double h, std::uint64_t K, const Vector& initial) {
    if (!(h > 0.0)) throw std::invalid_argument("gradient descent: h must be positive");
    if (initial.size() != target.dim()) throw std::invalid_argument("gradient descent: initial point dimension mismatch");
    std::vector<Vector> out;
    out.reserve(K + 1);
    out.push_back(initial);
    Vector theta = initial;
    for (std::uint64_t k = 0; k < K; ++k) {
        theta -= h * target.gradient(theta);
        out.push_back(theta);
    }
    return out;
}

Matrix run_replicas(const TargetPotential& target, const LmcConfig& config, const Initial& initial,
                    std::size_t replicas, std::size_t threads) {
    config.oracle.validate();
    if (config.oracle.mode == OracleMode::subsampled && !target.has_terms()) {
        throw std::invalid_argument("subsampled oracle: target '" + target.kind() + "' has no per-observation gradients");
    }
    check_step(config.h, target);
    Matrix out(static_cast<Eigen::Index>(replicas), target.dim());
    parallel_for(
        replicas,
        [&](std::size_t r) {
            Vector last;
            run_chain(target, config, initial, r, [&](std::uint64_t k, const Vector& theta) {
                if (k == config.K) last = theta;
            });
            out.row(static_cast<Eigen::Index>(r)) = last.transpose();
        },
        threads);
    return out;
}

}  // namespace langevin
