#pragma once

#include <cstdint>
#include <string>

namespace langevin {

/// Arguments shared by the closed-form W2 bounds.
struct BoundInputs {
    double m = 0.0;        // strong convexity
    double M = 0.0;        // gradient Lipschitz constant
    double h = 0.0;        // step size
    std::uint64_t K = 0;   // iterations
    double p = 1.0;        // dimension
    double w2_init = 0.0;  // W2(ν₀, π)
    double sigma = 0.0;    // gradient noise level, noisy bound only
};

/// Step-size regime: a for h ≤ 2/(m+M), b for h ≥ 2/(m+M).
enum class Regime { a, b };

std::string to_string(Regime regime);

/// An upper bound on W2(ν_K, π), split into the part that decays with K and
/// the discretization bias that does not.
struct BoundReport {
    double value = 0.0;
    Regime regime = Regime::a;
    double gamma = 0.0;
    double contraction_term = 0.0;
    double bias_term = 0.0;
    /// γ = 0: m = M and h = 1/M, every coupling collapses in one step.
    bool exact_contraction = false;
};

/// Per-step contraction of synchronous coupling: |1 − mh| when h ≤ 2/(m+M),
/// |1 − Mh| otherwise. Requires 0 < h < 2/M.
double contraction_factor(double m, double M, double h);

/// W2 bound for the exact-gradient chain, h ∈ (0, 2/M):
///   (a) (1 − mh)^K w + 1.82 (M/m) √(hp)
///   (b) (Mh − 1)^K w + 1.82 Mh/(2 − Mh) √(hp)
/// At h = 2/(m+M) regime a is reported.
BoundReport theorem1_bound(const BoundInputs& in);

/// Evaluates one regime's formula without checking which regime h belongs to
/// (only h ∈ (0, 2/M) is enforced). Used to compare regimes at the crossover.
BoundReport theorem1_formula(const BoundInputs& in, Regime regime);

/// W2 bound for the noisy-gradient chain, h ∈ (0, 2/M]:
///   (a) (1 − mh/2)^K w + √(2hp/m) √(σ² + 3.3M²/m)
///   (b) (Mh/2)^K w + √(2h²p/(2 − Mh)) √(σ² + 6.6M/(2 − Mh))
/// At h = 2/M the bias is infinite.
BoundReport theorem2_bound(const BoundInputs& in);
BoundReport theorem2_formula(const BoundInputs& in, Regime regime);

/// Square root of the reference (dm) W2² bound, valid for h ≤ 2/(m+M):
///   2(1 − mMh/(m+M))^K w² + (Mhp/m)(m+M)(h + (m+M)/(2mM))(2 + M²h/m + M²h²/6).
double dm_bound(const BoundInputs& in);

/// Second (K-independent) summand of the squared reference bound.
double dm_bias_squared(double m, double M, double h, double p);

/// √(‖θ₀ − θ̄‖² + p/m).
double init_w2_from_mean(double dist2_to_mean, double p, double m);

/// √((2/m)(f(θ₀) − f_lower + p)), where f_lower bounds ∫f dπ from below.
/// Throws std::domain_error when the radicand is negative.
double init_w2_from_f(double f_at_theta0, double p, double m, double f_lower_bound);

}  // namespace langevin
