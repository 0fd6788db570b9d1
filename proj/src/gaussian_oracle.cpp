#include "langevin/gaussian_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/normal.hpp>

namespace langevin {

GaussianMoments GaussianMoments::point_mass(const Vector& at) { return {at, Matrix::Zero(at.size(), at.size())}; }

GaussianMoments GaussianMoments::stationary(const QuadraticSpec& spec) {
    Matrix cov = spec.precision.ldlt().solve(Matrix::Identity(spec.dim(), spec.dim()));
    cov = 0.5 * (cov + cov.transpose());
    return {spec.mean, cov};
}

void GaussianMoments::validate() const {
    const Eigen::Index p = mean.size();
    if (cov.rows() != p || cov.cols() != p) throw std::invalid_argument("gaussian moments: covariance shape mismatch");
    if (p == 0) return;
    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw std::invalid_argument("gaussian moments: covariance is not symmetric");
    }
    const double lo = extreme_eigenvalues(0.5 * (cov + cov.transpose())).first;
    if (lo < -1e-12 * scale) {
        std::ostringstream msg;
        msg << "gaussian moments: covariance is not PSD (eigenvalue " << lo << ")";
        throw std::invalid_argument(msg.str());
    }
}

Matrix psd_sqrt(const Matrix& symmetric) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (symmetric + symmetric.transpose()));
    if (solver.info() != Eigen::Success) throw std::runtime_error("psd_sqrt: eigensolver did not converge");
    const Vector root = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return solver.eigenvectors() * root.asDiagonal() * solver.eigenvectors().transpose();
}

GaussianMoments advance_moments(const QuadraticSpec& spec, const GaussianMoments& law, double h,
                                double extra_variance) {
    const Eigen::Index p = spec.dim();
    const Matrix step = Matrix::Identity(p, p) - h * spec.precision;
    GaussianMoments next;
    next.mean = law.mean - h * (spec.precision * (law.mean - spec.mean));
    next.cov = step * law.cov * step.transpose();
    next.cov.diagonal().array() += 2.0 * h + extra_variance;
    next.cov = 0.5 * (next.cov + next.cov.transpose());
    return next;
}

GaussianMoments moments_after_k(const QuadraticSpec& spec, const GaussianMoments& init, double h, std::uint64_t k) {
    if (!(h > 0.0)) throw std::invalid_argument("moments_after_k: h must be positive");
    if (init.dim() != spec.dim()) throw std::invalid_argument("moments_after_k: dimension mismatch");
    GaussianMoments law = init;
    for (std::uint64_t j = 0; j < k; ++j) law = advance_moments(spec, law, h);
    return law;
}

double gaussian_w2(const GaussianMoments& a, const GaussianMoments& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("gaussian_w2: dimension mismatch");
    a.validate();
    b.validate();
    const Matrix root_b = psd_sqrt(b.cov);
    const Matrix cross = psd_sqrt(root_b * a.cov * root_b);
    const double trace = a.cov.trace() + b.cov.trace() - 2.0 * cross.trace();
    const double w2sq = (a.mean - b.mean).squaredNorm() + std::max(trace, 0.0);
    return std::sqrt(std::max(w2sq, 0.0));
}

double empirical_w2_1d(std::span<const double> sorted_a, std::span<const double> sorted_b) {
    if (sorted_a.empty() || sorted_b.empty()) throw std::invalid_argument("empirical_w2_1d: empty sample");
    if (sorted_a.size() != sorted_b.size()) throw std::invalid_argument("empirical_w2_1d: sample sizes differ");
    if (!std::is_sorted(sorted_a.begin(), sorted_a.end()) || !std::is_sorted(sorted_b.begin(), sorted_b.end())) {
        throw std::invalid_argument("empirical_w2_1d: samples must be sorted");
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < sorted_a.size(); ++i) {
        const double d = sorted_a[i] - sorted_b[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(sorted_a.size()));
}

double w2_init_exact(const QuadraticSpec& spec, const Vector& theta0) {
    if (theta0.size() != spec.dim()) throw std::invalid_argument("w2_init_exact: dimension mismatch");
    const GaussianMoments pi = GaussianMoments::stationary(spec);
    return std::sqrt((theta0 - spec.mean).squaredNorm() + pi.cov.trace());
}

Vector sample_gaussian(const GaussianMoments& law, Rng& rng) {
    return law.mean + psd_sqrt(law.cov) * rng.normal_vector(law.dim());
}

std::vector<double> gaussian_quantiles(double mean, double sd, std::size_t n) {
    if (!(sd > 0.0)) throw std::invalid_argument("gaussian_quantiles: sd must be positive");
    const boost::math::normal_distribution<double> law(mean, sd);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = boost::math::quantile(law, (static_cast<double>(i) + 0.5) / static_cast<double>(n));
    }
    return out;
}

}  // namespace langevin
