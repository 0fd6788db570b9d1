#include "langevin/validation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "langevin/bounds.hpp"
#include "langevin/sampler.hpp"

namespace langevin {

Matrix random_precision(Eigen::Index p, double lo, double hi, Rng& rng) {
    Matrix g(p, p);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.normal();
    const Matrix q = Eigen::HouseholderQR<Matrix>(g).householderQ();
    Vector eig(p);
    for (Eigen::Index i = 0; i < p; ++i) eig[i] = lo + (hi - lo) * rng.uniform();
    eig[0] = lo;
    if (p > 1) eig[p - 1] = hi;
    Matrix a = q * eig.asDiagonal() * q.transpose();
    return 0.5 * (a + a.transpose());
}

double bootstrap_se_w2_1d(std::span<const double> samples, std::span<const double> reference, std::size_t resamples,
                          std::uint64_t seed) {
    if (resamples < 2) throw std::invalid_argument("bootstrap needs at least two resamples");
    Rng rng(seed);
    const std::size_t n = samples.size();
    std::vector<double> draw(n);
    std::vector<double> stats;
    stats.reserve(resamples);
    for (std::size_t b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) draw[i] = samples[rng.index(n)];
        std::sort(draw.begin(), draw.end());
        stats.push_back(empirical_w2_1d(draw, reference));
    }
    double mean = 0.0;
    for (double s : stats) mean += s;
    mean /= static_cast<double>(resamples);
    double var = 0.0;
    for (double s : stats) var += (s - mean) * (s - mean);
    return std::sqrt(var / static_cast<double>(resamples - 1));
}

namespace {

CheckResult named_check(std::string name) {
    CheckResult check;
    check.name = std::move(name);
    return check;
}

void fail(CheckResult& check, const std::string& what) {
    if (check.failures++ == 0) check.first_counterexample = what;
}

std::string describe(const BoundInputs& in) {
    std::ostringstream out;
    out << "m=" << in.m << " M=" << in.M << " h=" << in.h << " K=" << in.K << " p=" << in.p << " w2_init=" << in.w2_init
        << " sigma=" << in.sigma;
    return out.str();
}

BoundInputs random_inputs(Rng& rng, bool stable_only) {
    BoundInputs in;
    in.m = 0.1 + 9.9 * rng.uniform();
    in.M = in.m * (1.0 + 9.0 * rng.uniform());
    const double cap = stable_only ? 2.0 / (in.m + in.M) : 2.0 / in.M;
    in.h = cap * (1e-4 + (1.0 - 2e-4) * rng.uniform());
    in.K = rng.index(2000);
    in.p = static_cast<double>(1 + rng.index(1000));
    in.w2_init = 10.0 * rng.uniform();
    return in;
}

}  // namespace

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
    Rng rng(options.seed);
    std::vector<CheckResult> out;

    CheckResult exact = named_check("theorem1_vs_exact_law");
    CheckResult descent = named_check("gradient_descent_contraction");
    CheckResult init = named_check("init_bounds");
    CheckResult second_moment = named_check("gradient_second_moment");
    for (int p : options.dims) {
        for (std::size_t t = 0; t < options.targets_per_dim; ++t) {
            const double lo = 1.0 + 9.0 * rng.uniform();
            const double hi = lo + (10.0 - lo) * rng.uniform();
            const QuadraticSpec spec{rng.normal_vector(p), random_precision(p, lo, hi, rng)};
            const TargetPotential target = quadratic_target(spec);
            const GaussianMoments pi = GaussianMoments::stationary(spec);
            const Vector theta0 = spec.mean + 3.0 * rng.normal_vector(p);
            const double w0 = w2_init_exact(spec, theta0);

            for (std::size_t j = 0; j < options.step_sizes; ++j) {
                const double h = (2.0 / target.M()) * (static_cast<double>(j) + 0.5) / static_cast<double>(options.step_sizes);
                GaussianMoments law = GaussianMoments::point_mass(theta0);
                std::uint64_t done = 0;
                for (std::uint64_t K : options.iterations) {
                    for (; done < K; ++done) law = advance_moments(spec, law, h);
                    const BoundInputs in{target.m(), target.M(), h, K, static_cast<double>(p), w0, 0.0};
                    const double bound = theorem1_bound(in).value;
                    const double actual = gaussian_w2(law, pi);
                    ++exact.cells;
                    if (!(actual <= bound + 1e-10)) {
                        std::ostringstream msg;
                        msg << describe(in) << ": exact W2=" << actual << " > bound=" << bound;
                        fail(exact, msg.str());
                    }
                }
            }

            const auto path = gradient_descent(target, 1.0 / target.M(), 100, theta0);
            const double start = (theta0 - spec.mean).norm();
            const double rate = 1.0 - target.m() / target.M();
            for (std::size_t k = 0; k < path.size(); ++k) {
                ++descent.cells;
                const double dist = (path[k] - spec.mean).norm();
                const double allowed = std::pow(rate, static_cast<double>(k)) * start;
                if (!(dist <= allowed + 1e-10)) {
                    std::ostringstream msg;
                    msg << "p=" << p << " K=" << k << ": distance " << dist << " > " << allowed;
                    fail(descent, msg.str());
                }
            }

            ++init.cells;
            const double from_mean = init_w2_from_mean((theta0 - spec.mean).squaredNorm(), p, target.m());
            const double from_f = init_w2_from_f(target.value(theta0), p, target.m(), 0.5 * p);
            // Equality holds for p = 1 (tr A⁻¹ = p/m), so allow rounding.
            if (!(w0 <= from_mean * (1.0 + 1e-12) && w0 <= from_f * (1.0 + 1e-12))) {
                std::ostringstream msg;
                msg << "p=" << p << ": exact " << w0 << ", from mean " << from_mean << ", from f " << from_f;
                fail(init, msg.str());
            }

            ++second_moment.cells;
            if (!(spec.precision.trace() <= target.M() * p)) {
                std::ostringstream msg;
                msg << "p=" << p << ": tr(A)=" << spec.precision.trace() << " > Mp=" << target.M() * p;
                fail(second_moment, msg.str());
            }
        }
    }

    CheckResult continuity = named_check("theorem1_regime_continuity");
    CheckResult sharp = named_check("sharpness_vs_dm");
    sharp.required = false;
    CheckResult dominance = named_check("theorem2_dominates_theorem1");
    for (std::size_t i = 0; i < options.random_inputs; ++i) {
        BoundInputs in = random_inputs(rng, true);
        ++sharp.cells;
        const double ours = theorem1_bound(in).value;
        const double dm = dm_bound(in);
        if (!(ours <= dm)) fail(sharp, describe(in) + ": theorem1 exceeds dm");

        BoundInputs cross = in;
        cross.h = 2.0 / (in.m + in.M);
        const double va = theorem1_formula(cross, Regime::a).value;
        const double vb = theorem1_formula(cross, Regime::b).value;
        ++continuity.cells;
        if (!(std::abs(va - vb) <= 1e-12 * va)) fail(continuity, describe(cross) + ": regimes disagree");

        BoundInputs any = random_inputs(rng, false);
        ++dominance.cells;
        if (!(theorem2_bound(any).value >= theorem1_bound(any).value)) {
            fail(dominance, describe(any) + ": noisy bound below exact-gradient bound");
        }
    }

    out = {exact, continuity, sharp, dominance, descent, init, second_moment};
    return out;
}

nlohmann::json to_json(const std::vector<CheckResult>& results) {
    nlohmann::json checks = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : results) {
        if (r.required) ok = ok && r.passed();
        nlohmann::json item{{"name", r.name},
                            {"cells", r.cells},
                            {"failures", r.failures},
                            {"passed", r.passed()},
                            {"required", r.required}};
        if (!r.passed()) item["first_counterexample"] = r.first_counterexample;
        checks.push_back(item);
    }
    return {{"passed", ok}, {"checks", checks}};
}

}  // namespace langevin
