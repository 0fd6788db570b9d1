#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "langevin/rng.hpp"
#include "langevin/targets.hpp"

namespace langevin {

/// Mean and covariance of a Gaussian law on R^p. A zero covariance is a
/// point mass.
struct GaussianMoments {
    Vector mean;
    Matrix cov;

    Eigen::Index dim() const { return mean.size(); }

    static GaussianMoments point_mass(const Vector& at);
    /// The target law N(μ, A⁻¹) of a quadratic potential.
    static GaussianMoments stationary(const QuadraticSpec& spec);

    /// Throws std::invalid_argument unless cov is p×p, symmetric within 1e-12
    /// (relative) and has no eigenvalue below −1e-12.
    void validate() const;
};

/// Symmetric PSD square root through an eigendecomposition; eigenvalues are
/// clamped at zero.
Matrix psd_sqrt(const Matrix& symmetric);

/// One exact step of the law of the Langevin chain on a quadratic target:
///   μ ← μ − hA(μ − μ*),  Σ ← (I − hA)Σ(I − hA)ᵀ + 2hI.
/// `extra_variance` is added to every diagonal entry; pass h²σ² for the law
/// under Gaussian gradient noise of level σ.
GaussianMoments advance_moments(const QuadraticSpec& spec, const GaussianMoments& law, double h,
                                double extra_variance = 0.0);

/// Law of θ⁽ᵏ⁾ for a chain started from `init`.
GaussianMoments moments_after_k(const QuadraticSpec& spec, const GaussianMoments& init, double h, std::uint64_t k);

/// Closed-form W2 between Gaussians:
///   W2² = ‖μa−μb‖² + tr(Σa + Σb − 2(Σb^½ Σa Σb^½)^½).
double gaussian_w2(const GaussianMoments& a, const GaussianMoments& b);

/// Quantile-coupling W2 estimate between two equally sized sorted samples.
double empirical_w2_1d(std::span<const double> sorted_a, std::span<const double> sorted_b);

/// Exact W2(δ_θ₀, π) for the Gaussian target: √(‖θ₀−μ‖² + tr(A⁻¹)).
double w2_init_exact(const QuadraticSpec& spec, const Vector& theta0);

/// Draws one point from N(mean, cov).
Vector sample_gaussian(const GaussianMoments& law, Rng& rng);

/// The n midpoint quantiles mean + sd·Φ⁻¹((i − ½)/n), i = 1..n, in
/// increasing order: a deterministic stand-in for n sorted draws of N(mean, sd²).
std::vector<double> gaussian_quantiles(double mean, double sd, std::size_t n);

}  // namespace langevin
