#include "langevin/targets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "langevin/rng.hpp"

namespace langevin {

namespace {

void require_dim(const Vector& theta, Eigen::Index dim, const char* what) {
    if (theta.size() != dim) {
        std::ostringstream msg;
        msg << what << ": expected a vector of dimension " << dim << ", got " << theta.size();
        throw std::invalid_argument(msg.str());
    }
}

// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double logistic(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

TargetPotential::TargetPotential(PotentialDefinition def) {
    if (def.dim <= 0) throw std::invalid_argument("potential dimension must be positive");
    if (!(def.m > 0.0) || !(def.M >= def.m) || !std::isfinite(def.M)) {
        std::ostringstream msg;
        msg << "potential constants must satisfy 0 < m <= M, got m=" << def.m << ", M=" << def.M;
        throw std::invalid_argument(msg.str());
    }
    if (!(def.temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (!def.value || !def.gradient) throw std::invalid_argument("potential needs both value and gradient");
    if (def.observations > 0 && !def.term_gradient) {
        throw std::invalid_argument("sum-structured potential needs a per-term gradient");
    }
    def_ = std::make_shared<const PotentialDefinition>(std::move(def));
}

double TargetPotential::value(const Vector& theta) const {
    require_dim(theta, dim(), "potential value");
    return def_->value(theta);
}

Vector TargetPotential::gradient(const Vector& theta) const {
    require_dim(theta, dim(), "potential gradient");
    return def_->gradient(theta);
}

Vector TargetPotential::term_gradient(std::size_t i, const Vector& theta) const {
    if (!has_terms()) throw std::logic_error("potential '" + kind() + "' has no per-observation gradients");
    if (i >= term_count()) throw std::out_of_range("observation index out of range");
    require_dim(theta, dim(), "term gradient");
    return def_->term_gradient(i, theta);
}

std::optional<Vector> TargetPotential::minimizer() const {
    if (quadratic()) return quadratic()->mean;
    return std::nullopt;
}

std::pair<double, double> extreme_eigenvalues(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetric, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw std::runtime_error("symmetric eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

TargetPotential quadratic_target(const Vector& mean, const Matrix& precision) {
    const Eigen::Index p = mean.size();
    if (p == 0) throw std::invalid_argument("quadratic target: empty mean");
    if (precision.rows() != p || precision.cols() != p) {
        throw std::invalid_argument("quadratic target: precision must be " + std::to_string(p) + "x" +
                                    std::to_string(p));
    }
    const double scale = precision.cwiseAbs().maxCoeff();
    const double asym = (precision - precision.transpose()).cwiseAbs().maxCoeff();
    if (!(asym <= 1e-12 * scale)) {
        std::ostringstream msg;
        msg << "quadratic target: precision is not symmetric (max asymmetry " << asym << ")";
        throw std::invalid_argument(msg.str());
    }
    Matrix a = 0.5 * (precision + precision.transpose());
    const auto [lo, hi] = extreme_eigenvalues(a);
    if (!(lo > 0.0)) {
        std::ostringstream msg;
        msg << "quadratic target: precision is not positive definite (eigenvalue " << lo << ")";
        throw std::invalid_argument(msg.str());
    }

    PotentialDefinition def;
    def.kind = "quadratic";
    def.dim = p;
    def.m = lo;
    def.M = hi;
    def.quadratic = QuadraticSpec{mean, a};
    def.value = [mean, a](const Vector& theta) {
        const Vector d = theta - mean;
        return 0.5 * d.dot(a * d);
    };
    def.gradient = [mean, a](const Vector& theta) -> Vector { return a * (theta - mean); };
    return TargetPotential(std::move(def));
}

TargetPotential quadratic_target(const QuadraticSpec& spec) { return quadratic_target(spec.mean, spec.precision); }

TargetPotential logistic_target(const Matrix& features, const Vector& labels, double ridge) {
    const Eigen::Index n = features.rows();
    const Eigen::Index p = features.cols();
    if (n < 1 || p < 1) throw std::invalid_argument("logistic target: need at least one observation and one feature");
    if (labels.size() != n) throw std::invalid_argument("logistic target: labels must have one entry per row");
    for (Eigen::Index i = 0; i < n; ++i) {
        if (labels[i] != 0.0 && labels[i] != 1.0) {
            std::ostringstream msg;
            msg << "logistic target: label " << i << " is " << labels[i] << ", expected 0 or 1";
            throw std::invalid_argument(msg.str());
        }
    }
    if (!(ridge > 0.0) || !std::isfinite(ridge)) throw std::invalid_argument("logistic target: ridge must be positive");

    const Matrix gram = features.transpose() * features;
    const double top = extreme_eigenvalues(gram).second;

    PotentialDefinition def;
    def.kind = "logistic";
    def.dim = p;
    def.m = ridge;
    def.M = ridge + 0.25 * std::max(top, 0.0);
    def.observations = static_cast<std::size_t>(n);

    auto x = std::make_shared<const Matrix>(features);
    auto y = std::make_shared<const Vector>(labels);
    def.value = [x, y, ridge](const Vector& theta) {
        const Vector z = (*x) * theta;
        double f = 0.5 * ridge * theta.squaredNorm();
        for (Eigen::Index i = 0; i < z.size(); ++i) f += softplus(z[i]) - (*y)[i] * z[i];
        return f;
    };
    def.gradient = [x, y, ridge](const Vector& theta) -> Vector {
        Vector r = (*x) * theta;
        for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = logistic(r[i]) - (*y)[i];
        return x->transpose() * r + ridge * theta;
    };
    const double share = ridge / static_cast<double>(n);
    def.term_gradient = [x, y, share](std::size_t i, const Vector& theta) -> Vector {
        const auto row = x->row(static_cast<Eigen::Index>(i));
        const double r = logistic(row.dot(theta)) - (*y)[static_cast<Eigen::Index>(i)];
        return r * row.transpose() + share * theta;
    };
    return TargetPotential(std::move(def));
}

TargetPotential temper(const TargetPotential& target, double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        std::ostringstream msg;
        msg << "temper: tau must be positive and finite, got " << tau;
        throw std::invalid_argument(msg.str());
    }
    const PotentialDefinition& base = target.definition();
    PotentialDefinition def;
    def.kind = base.kind;
    def.dim = base.dim;
    def.m = base.m / tau;
    def.M = base.M / tau;
    def.temperature = base.temperature * tau;
    def.value = [f = base.value, tau](const Vector& theta) { return f(theta) / tau; };
    def.gradient = [g = base.gradient, tau](const Vector& theta) -> Vector { return g(theta) / tau; };
    if (base.quadratic) def.quadratic = QuadraticSpec{base.quadratic->mean, base.quadratic->precision / tau};
    def.observations = base.observations;
    if (base.term_gradient) {
        def.term_gradient = [g = base.term_gradient, tau](std::size_t i, const Vector& theta) -> Vector {
            return g(i, theta) / tau;
        };
    }
    return TargetPotential(std::move(def));
}

ConvexityCheck check_eq1(const TargetPotential& target, std::size_t pairs, std::uint64_t seed, double scale,
                         double relative_slack) {
    Rng rng(seed);
    const Vector center = target.minimizer().value_or(Vector::Zero(target.dim()));
    ConvexityCheck out;
    out.pairs = pairs;
    out.worst_convexity_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs; ++k) {
        const Vector a = center + scale * rng.normal_vector(target.dim());
        const Vector b = center + scale * rng.normal_vector(target.dim());
        const double d2 = (a - b).squaredNorm();
        if (d2 == 0.0) continue;
        const double fa = target.value(a);
        const double fb = target.value(b);
        const Vector gb = target.gradient(b);
        const Vector ga = target.gradient(a);

        const double linear = gb.dot(a - b);
        const double gap = fa - fb - linear;
        const double floor = 0.5 * target.m() * d2;
        const double magnitude = std::abs(fa) + std::abs(fb) + std::abs(linear) + floor;
        out.worst_convexity_ratio = std::min(out.worst_convexity_ratio, gap / floor);
        if (gap < floor - relative_slack * magnitude) ++out.convexity_violations;

        const double lip = (ga - gb).norm() / (target.M() * std::sqrt(d2));
        out.worst_lipschitz_ratio = std::max(out.worst_lipschitz_ratio, lip);
        if (lip > 1.0 + relative_slack) ++out.lipschitz_violations;
    }
    return out;
}

}  // namespace langevin
