#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace langevin {

/// Which closed-form bound a search optimizes.
enum class BoundKind { theorem1, reference };

std::string to_string(BoundKind kind);

/// Step size and iteration count sufficient for W2(ν_K, π) ≤ ε.
struct Plan {
    enum class Binding { precision, stability };

    double epsilon = 0.0;
    double h = 0.0;
    std::uint64_t K = 0;
    double predicted_bound = 0.0;
    /// precision: h = m²ε²/(14M²p); stability: h = 2/(m+M).
    Binding binding = Binding::precision;
    /// The initial law is already within ε/2, so no iterations are needed.
    bool zero_iterations = false;
};

std::string to_string(Plan::Binding binding);

/// Analytic plan: h = min(m²ε²/(14M²p), 2/(m+M)) and
/// K = ⌈log(2 w2_init/ε)/(mh)⌉, which makes both halves of the bound ≤ ε/2.
Plan plan_for_epsilon(double m, double M, double p, double w2_init, double epsilon);

/// Thrown when no step size on the grid brings the bias term under ε.
class UnreachablePrecision : public std::runtime_error {
public:
    UnreachablePrecision(BoundKind kind, double epsilon, double infimum);

    BoundKind kind() const { return kind_; }
    double epsilon() const { return epsilon_; }
    /// Smallest value the bound approaches as K → ∞ over the grid.
    double infimum() const { return infimum_; }

private:
    BoundKind kind_;
    double epsilon_;
    double infimum_;
};

/// Smallest K (and a step size achieving it) such that the chosen bound is
/// ≤ ε for some h on the grid or between grid neighbours.
struct SearchResult {
    std::uint64_t K = 0;
    double h = 0.0;
    double bound = 0.0;
    bool zero_iterations = false;
};

/// Upper end of the search range, 2/(m+M).
double max_search_step(double m, double M);

/// Geometric grid of `size` points on [2/((m+M)·10⁶), 2/(m+M)].
std::vector<double> default_h_grid(double m, double M, std::size_t size = 10000);

/// Geometric grid whose lower end is extended below the default when needed,
/// to min(2/((m+M)·10⁶), 10⁻³·h_ε) with h_ε the largest h whose bias term is ≤ ε.
std::vector<double> h_grid_for(BoundKind kind, double m, double M, double p, double epsilon,
                               std::size_t size = 10000);

/// Largest iteration count considered by the searches.
inline constexpr std::uint64_t kMaxIterations = 1'000'000'000'000ULL;

/// Minimal-iteration search. For every grid h, K(h) is found by binary search
/// on the bound (monotone in K); the best grid cell is then refined by a
/// golden-section search on the continuous iteration count, and the refined K
/// is re-verified on the bound itself. Throws UnreachablePrecision.
SearchResult minimal_k(BoundKind kind, double m, double M, double p, double w2_init, double epsilon,
                       std::span<const double> h_grid);

SearchResult minimal_k_our(double m, double M, double p, double w2_init, double epsilon,
                           std::span<const double> h_grid);
SearchResult minimal_k_dm(double m, double M, double p, double w2_init, double epsilon,
                          std::span<const double> h_grid);

struct CurvePoint {
    double p = 0.0;
    double epsilon = 0.0;
    std::uint64_t k_our = 0;
    std::uint64_t k_dm = 0;
    double h_our = 0.0;
    double h_dm = 0.0;

    double ratio() const { return static_cast<double>(k_dm) / static_cast<double>(k_our); }
};

/// Figure-1 style comparison with w2_init = √(p + p/m), i.e. ‖θ⁰ − θ̄‖² = p.
/// Rows are ordered by epsilon, then p. Grid size 0 means the default (10⁴).
std::vector<CurvePoint> figure1_curves(double m, double M, std::span<const double> epsilons,
                                       std::span<const double> p_values, std::size_t grid_size = 10000,
                                       std::size_t threads = 0);

}  // namespace langevin
