#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "langevin/gaussian_oracle.hpp"
#include "langevin/rng.hpp"

namespace langevin {

/// Random symmetric matrix with spectrum in [lo, hi], both ends attained:
/// Q diag(λ) Qᵀ with Q from the QR factorization of a Gaussian matrix.
Matrix random_precision(Eigen::Index p, double lo, double hi, Rng& rng);

/// Bootstrap standard error of the quantile-coupling W2 estimate between
/// `samples` and the fixed sorted `reference`, with `resamples` draws.
double bootstrap_se_w2_1d(std::span<const double> samples, std::span<const double> reference, std::size_t resamples,
                          std::uint64_t seed);

struct CheckResult {
    std::string name;
    std::size_t cells = 0;
    std::size_t failures = 0;
    /// Description of the first failing cell, empty when all passed.
    std::string first_counterexample;
    /// Informational checks are reported but do not fail a validation run.
    bool required = true;

    bool passed() const { return failures == 0; }
};

struct ValidationOptions {
    std::uint64_t seed = 1;
    std::vector<int> dims{1, 2, 5, 10};
    std::size_t targets_per_dim = 10;
    std::size_t step_sizes = 20;
    std::vector<std::uint64_t> iterations{1, 10, 100, 1000};
    std::size_t random_inputs = 1000;
};

/// Bound-vs-oracle grid and the library's deterministic invariants:
///   theorem1_vs_exact_law, theorem1_regime_continuity, sharpness_vs_dm,
///   theorem2_dominates_theorem1, gradient_descent_contraction, init_bounds,
///   gradient_second_moment (tr A ≤ Mp).
/// sharpness_vs_dm is informational: the reference bound has the
/// smaller bias term when M/m > 1/0.82 and K is large.
std::vector<CheckResult> run_validation(const ValidationOptions& options);

nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace langevin
