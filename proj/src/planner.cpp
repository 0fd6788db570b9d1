#include "langevin/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "langevin/bounds.hpp"
#include "langevin/parallel.hpp"

namespace langevin {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_search_inputs(double m, double M, double p, double w2_init, double epsilon) {
    if (!(m > 0.0) || !(M >= m)) throw std::invalid_argument("search needs 0 < m <= M");
    if (!(p > 0.0)) throw std::invalid_argument("search needs p > 0");
    if (!(w2_init >= 0.0)) throw std::invalid_argument("search needs w2_init >= 0");
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("precision epsilon must be positive");
}

// One bound family restricted to h ≤ 2/(m+M): its value at integer K and the
// real K at which it crosses ε.
struct Family {
    BoundKind kind;
    double m, M, p, w, eps;

    double value(double h, std::uint64_t K) const {
        const BoundInputs in{m, M, h, K, p, w, 0.0};
        return kind == BoundKind::theorem1 ? theorem1_bound(in).value : dm_bound(in);
    }

    double bias(double h) const {
        return kind == BoundKind::theorem1 ? 1.82 * (M / m) * std::sqrt(h * p) : std::sqrt(dm_bias_squared(m, M, h, p));
    }

    // Continuous relaxation of the minimal K at step h; +inf when infeasible.
    double real_k(double h) const {
        if (kind == BoundKind::theorem1) {
            const double b = bias(h);
            if (b >= eps) return kInf;
            if (w + b <= eps) return 0.0;
            return std::log((eps - b) / w) / std::log1p(-m * h);
        }
        const double b2 = dm_bias_squared(m, M, h, p);
        if (b2 >= eps * eps) return kInf;
        if (2.0 * w * w + b2 <= eps * eps) return 0.0;
        return std::log((eps * eps - b2) / (2.0 * w * w)) / std::log1p(-m * M * h / (m + M));
    }

    // Smallest integer K with value(h, K) ≤ ε, by bisection on the bound.
    std::optional<std::uint64_t> integer_k(double h) const {
        if (value(h, 0) <= eps) return 0;
        if (value(h, kMaxIterations) > eps) return std::nullopt;
        std::uint64_t lo = 0, hi = kMaxIterations;
        while (hi - lo > 1) {
            const std::uint64_t mid = lo + (hi - lo) / 2;
            if (value(h, mid) <= eps) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        return hi;
    }
};

// Golden-section minimization of real_k over log h in [lo, hi].
double refine_step(const Family& family, double lo, double hi) {
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::log(lo), b = std::log(hi);
    double c = b - ratio * (b - a), d = a + ratio * (b - a);
    double fc = family.real_k(std::exp(c)), fd = family.real_k(std::exp(d));
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = family.real_k(std::exp(c));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = family.real_k(std::exp(d));
        }
    }
    return std::exp(fc <= fd ? c : d);
}

std::vector<double> geometric_grid(double lo, double hi, std::size_t size) {
    if (size == 0) throw std::invalid_argument("step-size grid must have at least one point");
    if (size == 1) return {hi};
    std::vector<double> grid(size);
    const double step = std::log(hi / lo) / static_cast<double>(size - 1);
    for (std::size_t i = 0; i < size; ++i) grid[i] = lo * std::exp(step * static_cast<double>(i));
    grid.back() = hi;
    return grid;
}

}  // namespace

std::string to_string(BoundKind kind) { return kind == BoundKind::theorem1 ? "theorem1" : "reference"; }

std::string to_string(Plan::Binding binding) {
    return binding == Plan::Binding::precision ? "precision" : "stability";
}

Plan plan_for_epsilon(double m, double M, double p, double w2_init, double epsilon) {
    check_search_inputs(m, M, p, w2_init, epsilon);
    Plan plan;
    plan.epsilon = epsilon;
    const double precision_step = m * m * epsilon * epsilon / (14.0 * M * M * p);
    const double stability_step = max_search_step(m, M);
    plan.binding = precision_step < stability_step ? Plan::Binding::precision : Plan::Binding::stability;
    plan.h = std::min(precision_step, stability_step);

    if (w2_init <= 0.5 * epsilon) {
        plan.K = 0;
        plan.zero_iterations = true;
    } else {
        const double k_real = std::log(2.0 * w2_init / epsilon) / (m * plan.h);
        if (!(k_real < static_cast<double>(kMaxIterations))) {
            std::ostringstream msg;
            msg << "plan needs " << k_real << " iterations, above the supported maximum";
            throw std::overflow_error(msg.str());
        }
        plan.K = static_cast<std::uint64_t>(std::ceil(k_real));
        plan.K = std::max<std::uint64_t>(plan.K, 1);
    }
    BoundInputs in{m, M, plan.h, plan.K, p, w2_init, 0.0};
    plan.predicted_bound = theorem1_bound(in).value;
    // Guards against rounding in the logarithm; the analytic K already has slack.
    while (plan.predicted_bound > epsilon) {
        in.K = ++plan.K;
        plan.zero_iterations = false;
        plan.predicted_bound = theorem1_bound(in).value;
    }
    return plan;
}

UnreachablePrecision::UnreachablePrecision(BoundKind kind, double epsilon, double infimum)
    : std::runtime_error([&] {
          std::ostringstream msg;
          msg << "unreachable precision under " << to_string(kind) << ": epsilon=" << epsilon
              << " is below the infimum " << infimum << " of the bound over the step-size grid";
          return msg.str();
      }()),
      kind_(kind),
      epsilon_(epsilon),
      infimum_(infimum) {}

double max_search_step(double m, double M) { return 2.0 / (m + M); }

std::vector<double> default_h_grid(double m, double M, std::size_t size) {
    const double hi = max_search_step(m, M);
    return geometric_grid(hi * 1e-6, hi, size);
}

std::vector<double> h_grid_for(BoundKind kind, double m, double M, double p, double epsilon, std::size_t size) {
    check_search_inputs(m, M, p, 0.0, epsilon);
    const double hi = max_search_step(m, M);
    double h_eps = 0.0;
    if (kind == BoundKind::theorem1) {
        const double r = epsilon * m / (1.82 * M);
        h_eps = r * r / p;
    } else {
        double lo = 0.0, up = hi;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + up);
            if (dm_bias_squared(m, M, mid, p) <= epsilon * epsilon) {
                lo = mid;
            } else {
                up = mid;
            }
        }
        h_eps = lo;
    }
    h_eps = std::min(h_eps, hi);
    double lower = hi * 1e-6;
    if (h_eps > 0.0) lower = std::min(lower, 1e-3 * h_eps);
    return geometric_grid(lower, hi, size);
}

SearchResult minimal_k(BoundKind kind, double m, double M, double p, double w2_init, double epsilon,
                       std::span<const double> h_grid) {
    check_search_inputs(m, M, p, w2_init, epsilon);
    if (h_grid.empty()) throw std::invalid_argument("step-size grid is empty");
    const double hi = max_search_step(m, M);
    for (double h : h_grid) {
        if (!(h > 0.0) || !(h <= hi)) {
            std::ostringstream msg;
            msg << "grid step " << h << " outside (0, 2/(m+M)]";
            throw std::invalid_argument(msg.str());
        }
    }

    const Family family{kind, m, M, p, w2_init, epsilon};
    std::optional<std::size_t> best_index;
    SearchResult best;
    double infimum = kInf;
    for (std::size_t i = 0; i < h_grid.size(); ++i) {
        const auto k = family.integer_k(h_grid[i]);
        if (!k) {
            infimum = std::min(infimum, family.value(h_grid[i], kMaxIterations));
            continue;
        }
        if (!best_index || *k < best.K) {
            best_index = i;
            best.K = *k;
            best.h = h_grid[i];
        }
    }
    if (!best_index) throw UnreachablePrecision(kind, epsilon, infimum);

    if (best.K > 0) {
        const std::size_t i = *best_index;
        const double lo = h_grid[i > 0 ? i - 1 : i];
        const double up = h_grid[i + 1 < h_grid.size() ? i + 1 : i];
        if (lo < up) {
            const double h_ref = refine_step(family, lo, up);
            if (const auto k = family.integer_k(h_ref); k && *k < best.K) {
                best.K = *k;
                best.h = h_ref;
            }
        }
    }
    best.bound = family.value(best.h, best.K);
    best.zero_iterations = best.K == 0;
    return best;
}

SearchResult minimal_k_our(double m, double M, double p, double w2_init, double epsilon,
                           std::span<const double> h_grid) {
    return minimal_k(BoundKind::theorem1, m, M, p, w2_init, epsilon, h_grid);
}

SearchResult minimal_k_dm(double m, double M, double p, double w2_init, double epsilon,
                          std::span<const double> h_grid) {
    return minimal_k(BoundKind::reference, m, M, p, w2_init, epsilon, h_grid);
}

std::vector<CurvePoint> figure1_curves(double m, double M, std::span<const double> epsilons,
                                       std::span<const double> p_values, std::size_t grid_size, std::size_t threads) {
    if (grid_size == 0) grid_size = 10000;
    std::vector<CurvePoint> rows(epsilons.size() * p_values.size());
    parallel_for(
        rows.size(),
        [&](std::size_t idx) {
            const double eps = epsilons[idx / p_values.size()];
            const double p = p_values[idx % p_values.size()];
            const double w = std::sqrt(p + p / m);
            const auto grid_our = h_grid_for(BoundKind::theorem1, m, M, p, eps, grid_size);
            const auto grid_dm = h_grid_for(BoundKind::reference, m, M, p, eps, grid_size);
            const SearchResult our = minimal_k_our(m, M, p, w, eps, grid_our);
            const SearchResult dm = minimal_k_dm(m, M, p, w, eps, grid_dm);
            rows[idx] = CurvePoint{p, eps, our.K, dm.K, our.h, dm.h};
        },
        threads);
    return rows;
}

}  // namespace langevin
