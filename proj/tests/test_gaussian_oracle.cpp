#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "langevin/bounds.hpp"
#include "langevin/gaussian_oracle.hpp"
#include "langevin/validation.hpp"

using namespace langevin;

namespace {

QuadraticSpec scalar_spec(double a, double mu = 0.0) {
    return QuadraticSpec{Vector::Constant(1, mu), Matrix::Constant(1, 1, a)};
}

GaussianMoments random_law(Eigen::Index p, Rng& rng) {
    GaussianMoments law{rng.normal_vector(p), Matrix()};
    const Matrix b = Matrix::NullaryExpr(p, p, [&] { return rng.normal(); });
    law.cov = b * b.transpose() / static_cast<double>(p);
    return law;
}

}  // namespace

TEST_CASE("moments_after_k") {
    const auto spec = scalar_spec(2.0, 1.0);
    const auto init = GaussianMoments::point_mass(Vector::Constant(1, 3.0));

    SUBCASE("k = 0 returns the initial law") {
        const auto law = moments_after_k(spec, init, 0.1, 0);
        CHECK(law.mean == init.mean);
        CHECK(law.cov == init.cov);
    }
    SUBCASE("closed-form mean and variance") {
        const double h = 0.1, r = 1.0 - h * 2.0;
        for (std::uint64_t k : {1u, 5u, 40u}) {
            const auto law = moments_after_k(spec, init, h, k);
            const double rk = std::pow(r, static_cast<double>(k));
            CHECK(law.mean[0] == doctest::Approx(1.0 + rk * 2.0).epsilon(1e-13));
            const double var = 2.0 * h * (1.0 - rk * rk) / (1.0 - r * r);
            CHECK(law.cov(0, 0) == doctest::Approx(var).epsilon(1e-13));
        }
    }
    SUBCASE("variance converges to 1/(a(1 - ha/2))") {
        const double h = 0.3;
        const auto law = moments_after_k(spec, init, h, 2000);
        CHECK(law.cov(0, 0) == doctest::Approx(1.0 / (2.0 * (1.0 - h))).epsilon(1e-12));
        CHECK(law.mean[0] == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("extra variance is added per step") {
        const auto one = advance_moments(spec, init, 0.2, 0.25);
        CHECK(one.cov(0, 0) == doctest::Approx(2.0 * 0.2 + 0.25));
    }
    SUBCASE("dimension mismatch") {
        const auto bad = GaussianMoments::point_mass(Vector::Zero(2));
        CHECK_THROWS_AS(moments_after_k(spec, bad, 0.1, 3), std::invalid_argument);
    }
}

TEST_CASE("stationary law of the chain is O(h) from the target") {
    Rng rng(4);
    const QuadraticSpec spec{rng.normal_vector(3), random_precision(3, 1.0, 3.0, rng)};
    const auto pi = GaussianMoments::stationary(spec);
    double previous = 1e9;
    for (double h : {0.2, 0.1, 0.05, 0.025}) {
        const auto law = moments_after_k(spec, pi, h, 4000);
        const double w = gaussian_w2(law, pi);
        CHECK(w < previous);
        CHECK(w < 2.0 * h * std::sqrt(3.0));
        previous = w;
    }
}

TEST_CASE("gaussian_w2") {
    Rng rng(8);
    SUBCASE("identity and point masses") {
        const auto a = random_law(3, rng);
        CHECK(gaussian_w2(a, a) == doctest::Approx(0.0).epsilon(1e-7));
        const Vector x = rng.normal_vector(3), y = rng.normal_vector(3);
        CHECK(gaussian_w2(GaussianMoments::point_mass(x), GaussianMoments::point_mass(y)) ==
              doctest::Approx((x - y).norm()));
    }
    SUBCASE("scale example") {
        const GaussianMoments a{Vector::Zero(1), Matrix::Constant(1, 1, 1.0)};
        const GaussianMoments b{Vector::Zero(1), Matrix::Constant(1, 1, 4.0)};
        CHECK(gaussian_w2(a, b) == doctest::Approx(1.0));
    }
    SUBCASE("commuting covariances reduce to the sqrt-difference formula") {
        const GaussianMoments a{Vector::Zero(2), Vector(Eigen::Vector2d(1.0, 9.0)).asDiagonal()};
        const GaussianMoments b{Vector::Ones(2), Vector(Eigen::Vector2d(4.0, 1.0)).asDiagonal()};
        CHECK(gaussian_w2(a, b) == doctest::Approx(std::sqrt(2.0 + 1.0 + 4.0)));
    }
    SUBCASE("metric axioms on random triples") {
        for (int i = 0; i < 50; ++i) {
            const auto a = random_law(4, rng), b = random_law(4, rng), c = random_law(4, rng);
            const double ab = gaussian_w2(a, b), ba = gaussian_w2(b, a);
            CHECK(ab == doctest::Approx(ba).epsilon(1e-8));
            CHECK(ab <= gaussian_w2(a, c) + gaussian_w2(c, b) + 1e-9);
            CHECK(ab >= (a.mean - b.mean).norm() - 1e-12);
        }
    }
    SUBCASE("invalid inputs") {
        const auto a = random_law(2, rng);
        CHECK_THROWS_AS(gaussian_w2(a, random_law(3, rng)), std::invalid_argument);
        GaussianMoments neg{Vector::Zero(1), Matrix::Constant(1, 1, -1.0)};
        CHECK_THROWS_AS(neg.validate(), std::invalid_argument);
    }
}

TEST_CASE("psd_sqrt") {
    Rng rng(2);
    const Matrix a = random_precision(4, 0.5, 6.0, rng);
    const Matrix s = psd_sqrt(a);
    CHECK((s * s - a).norm() < 1e-12 * a.norm());
    CHECK((s - s.transpose()).norm() < 1e-14);
}

TEST_CASE("empirical_w2_1d") {
    const std::vector<double> a{-1.0, 0.0, 2.0};
    CHECK(empirical_w2_1d(a, a) == 0.0);
    CHECK(empirical_w2_1d(std::vector<double>{0.0}, std::vector<double>{3.0}) == 3.0);
    const std::vector<double> shifted{0.0, 1.0, 3.0};
    CHECK(empirical_w2_1d(a, shifted) == doctest::Approx(1.0));
    CHECK_THROWS_AS(empirical_w2_1d(a, std::vector<double>{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(empirical_w2_1d(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(empirical_w2_1d(std::vector<double>{2.0, 1.0}, std::vector<double>{1.0, 2.0}),
                    std::invalid_argument);
}

TEST_CASE("gaussian_quantiles") {
    const auto q = gaussian_quantiles(1.0, 2.0, 1001);
    REQUIRE(q.size() == 1001);
    CHECK(std::is_sorted(q.begin(), q.end()));
    CHECK(q[500] == doctest::Approx(1.0));
    CHECK(q[0] == doctest::Approx(1.0 - q[1000] + 1.0));
    // Midpoint quantiles of N(0,1) against N(0,1) and N(3,1) differ by a pure shift.
    const auto z = gaussian_quantiles(0.0, 1.0, 500);
    const auto s = gaussian_quantiles(3.0, 1.0, 500);
    CHECK(empirical_w2_1d(z, s) == doctest::Approx(3.0));
    CHECK_THROWS_AS(gaussian_quantiles(0.0, -1.0, 5), std::invalid_argument);
}

TEST_CASE("w2_init_exact") {
    const QuadraticSpec identity{Vector::Zero(4), Matrix::Identity(4, 4)};
    CHECK(w2_init_exact(identity, Vector::Zero(4)) == doctest::Approx(2.0));
    CHECK(w2_init_exact(scalar_spec(4.0), Vector::Ones(1)) == doctest::Approx(std::sqrt(1.25)));

    Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        const QuadraticSpec spec{rng.normal_vector(3), random_precision(3, 1.0, 5.0, rng)};
        const Vector theta0 = rng.normal_vector(3);
        const double m = Eigen::SelfAdjointEigenSolver<Matrix>(spec.precision).eigenvalues().minCoeff();
        CHECK(w2_init_exact(spec, theta0) <= init_w2_from_mean((theta0 - spec.mean).squaredNorm(), 3.0, m) + 1e-12);
    }
}

TEST_CASE("sample_gaussian matches its moments") {
    Rng rng(11);
    GaussianMoments law{Eigen::Vector2d(1.0, -1.0), Matrix(2, 2)};
    law.cov << 2.0, 0.6, 0.6, 1.0;
    const int n = 50000;
    Vector mean = Vector::Zero(2);
    Matrix second = Matrix::Zero(2, 2);
    for (int i = 0; i < n; ++i) {
        const Vector x = sample_gaussian(law, rng);
        mean += x;
        second += x * x.transpose();
    }
    mean /= n;
    const Matrix cov = second / n - mean * mean.transpose();
    CHECK((mean - law.mean).norm() < 4.0 * std::sqrt(3.0 / n));
    CHECK((cov - law.cov).norm() < 0.05);
}

TEST_CASE("mean squared gradient under the target is tr(A)") {
    Rng rng(21);
    const QuadraticSpec spec{rng.normal_vector(3), random_precision(3, 1.0, 4.0, rng)};
    const auto pi = GaussianMoments::stationary(spec);
    const int n = 40000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = (spec.precision * (sample_gaussian(pi, rng) - spec.mean)).squaredNorm();
        sum += g;
        sum2 += g * g;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum2 / n - mean * mean) / n);
    CHECK(std::abs(mean - spec.precision.trace()) < 4.0 * se);
    CHECK(spec.precision.trace() <= 4.0 * 3.0 + 1e-12);
}
