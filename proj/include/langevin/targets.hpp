#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>

#include <Eigen/Dense>

namespace langevin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Exact-law descriptor of a quadratic potential f(θ) = ½(θ−μ)ᵀA(θ−μ),
/// whose density is N(μ, A⁻¹).
struct QuadraticSpec {
    Vector mean;
    Matrix precision;

    Eigen::Index dim() const { return mean.size(); }
};

/// Everything that defines a potential. Used to build TargetPotential;
/// user-supplied potentials fill value/gradient and declare (m, M).
struct PotentialDefinition {
    using ValueFn = std::function<double(const Vector&)>;
    using GradientFn = std::function<Vector(const Vector&)>;
    using TermGradientFn = std::function<Vector(std::size_t, const Vector&)>;

    std::string kind = "custom";
    Eigen::Index dim = 0;
    double m = 0.0;
    double M = 0.0;
    double temperature = 1.0;
    ValueFn value;
    GradientFn gradient;
    std::optional<QuadraticSpec> quadratic;
    /// Sum structure f = Σ_i f_i, needed by the subsampled gradient oracle.
    std::size_t observations = 0;
    TermGradientFn term_gradient;
};

/// A potential f on R^p that is m-strongly convex with M-Lipschitz gradient.
///
/// Immutable and cheap to copy; copies share the underlying definition, so a
/// single instance may be used by many concurrent samplers. The constants
/// (m, M) of user-supplied potentials are taken on trust; see check_eq1.
/// Integrability of exp(−f) is not checked.
class TargetPotential {
public:
    explicit TargetPotential(PotentialDefinition def);

    double value(const Vector& theta) const;
    Vector gradient(const Vector& theta) const;

    Eigen::Index dim() const { return def_->dim; }
    double m() const { return def_->m; }
    double M() const { return def_->M; }
    double temperature() const { return def_->temperature; }
    const std::string& kind() const { return def_->kind; }

    /// Present for quadratic targets (and their tempered versions).
    const std::optional<QuadraticSpec>& quadratic() const { return def_->quadratic; }
    /// Known minimizer, when available in closed form.
    std::optional<Vector> minimizer() const;

    bool has_terms() const { return def_->observations > 0; }
    std::size_t term_count() const { return def_->observations; }
    /// Gradient of the i-th summand; Σ_i term_gradient(i, θ) = ∇f(θ).
    Vector term_gradient(std::size_t i, const Vector& theta) const;

    const PotentialDefinition& definition() const { return *def_; }

private:
    std::shared_ptr<const PotentialDefinition> def_;
};

/// Gaussian target N(mean, precision⁻¹). Throws std::invalid_argument when the
/// precision matrix is not symmetric or not positive definite.
TargetPotential quadratic_target(const Vector& mean, const Matrix& precision);
TargetPotential quadratic_target(const QuadraticSpec& spec);

/// Ridge-regularized logistic regression negative log-likelihood
///   f(θ) = Σ_i log(1 + exp(x_iᵀθ)) − y_i x_iᵀθ + (λ/2)‖θ‖²
/// with m = λ and M = λ + ¼ λ_max(XᵀX). Each of the n summands carries
/// an equal share λ/(2n)‖θ‖² of the ridge term.
TargetPotential logistic_target(const Matrix& features, const Vector& labels, double ridge);

/// f_τ = f/τ, with m/τ, M/τ and the temperature multiplied by τ.
TargetPotential temper(const TargetPotential& target, double tau);

/// Extreme eigenvalues (λ_min, λ_max) of a symmetric matrix.
std::pair<double, double> extreme_eigenvalues(const Matrix& symmetric);

/// Result of a randomized spot check of the strong convexity and gradient
/// Lipschitz inequalities.
struct ConvexityCheck {
    std::size_t pairs = 0;
    std::size_t convexity_violations = 0;
    std::size_t lipschitz_violations = 0;
    /// min over pairs of [f(θ)−f(θ′)−∇f(θ′)ᵀ(θ−θ′)] / ((m/2)‖θ−θ′‖²); ≥ 1 when valid.
    double worst_convexity_ratio = 0.0;
    /// max over pairs of ‖∇f(θ)−∇f(θ′)‖ / (M‖θ−θ′‖); ≤ 1 when valid.
    double worst_lipschitz_ratio = 0.0;

    bool ok() const { return convexity_violations == 0 && lipschitz_violations == 0; }
};

/// Samples `pairs` random pairs around `center` (minimizer, or the origin)
/// with spread `scale` and checks both inequalities with relative slack.
ConvexityCheck check_eq1(const TargetPotential& target, std::size_t pairs, std::uint64_t seed,
                         double scale = 1.0, double relative_slack = 1e-9);

}  // namespace langevin
