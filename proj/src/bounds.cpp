#include "langevin/bounds.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace langevin {

namespace {

void check_constants(const BoundInputs& in) {
    if (!(in.m > 0.0) || !(in.M >= in.m) || !std::isfinite(in.M)) {
        std::ostringstream msg;
        msg << "bound constants must satisfy 0 < m <= M, got m=" << in.m << ", M=" << in.M;
        throw std::invalid_argument(msg.str());
    }
    if (!(in.p > 0.0)) throw std::invalid_argument("bound dimension p must be positive");
    if (!(in.w2_init >= 0.0)) throw std::invalid_argument("initial W2 distance must be >= 0");
    if (!(in.sigma >= 0.0)) throw std::invalid_argument("noise level sigma must be >= 0");
}

void check_open_step(const BoundInputs& in) {
    if (!(in.h > 0.0) || !(in.h < 2.0 / in.M)) {
        std::ostringstream msg;
        msg << "step size h=" << in.h << " outside (0, 2/M) = (0, " << 2.0 / in.M << ")";
        throw std::domain_error(msg.str());
    }
}

Regime regime_of(const BoundInputs& in) { return in.h <= 2.0 / (in.m + in.M) ? Regime::a : Regime::b; }

double power(double base, std::uint64_t K) { return std::pow(base, static_cast<double>(K)); }

}  // namespace

std::string to_string(Regime regime) { return regime == Regime::a ? "a" : "b"; }

double contraction_factor(double m, double M, double h) {
    if (!(m > 0.0) || !(M >= m)) throw std::invalid_argument("contraction factor needs 0 < m <= M");
    if (!(h > 0.0) || !(h < 2.0 / M)) {
        std::ostringstream msg;
        msg << "contraction factor: h=" << h << " outside (0, 2/M)";
        throw std::domain_error(msg.str());
    }
    return h <= 2.0 / (m + M) ? std::abs(1.0 - m * h) : std::abs(1.0 - M * h);
}

BoundReport theorem1_formula(const BoundInputs& in, Regime regime) {
    check_constants(in);
    check_open_step(in);
    BoundReport out;
    out.regime = regime;
    const double root = std::sqrt(in.h * in.p);
    if (regime == Regime::a) {
        out.gamma = std::abs(1.0 - in.m * in.h);
        out.contraction_term = power(1.0 - in.m * in.h, in.K) * in.w2_init;
        out.bias_term = 1.82 * (in.M / in.m) * root;
    } else {
        out.gamma = std::abs(1.0 - in.M * in.h);
        out.contraction_term = power(in.M * in.h - 1.0, in.K) * in.w2_init;
        out.bias_term = 1.82 * (in.M * in.h / (2.0 - in.M * in.h)) * root;
    }
    out.value = out.contraction_term + out.bias_term;
    out.exact_contraction = out.gamma == 0.0;
    return out;
}

BoundReport theorem1_bound(const BoundInputs& in) {
    check_constants(in);
    check_open_step(in);
    BoundReport out = theorem1_formula(in, regime_of(in));
    out.gamma = contraction_factor(in.m, in.M, in.h);
    out.exact_contraction = out.gamma == 0.0;
    return out;
}

BoundReport theorem2_formula(const BoundInputs& in, Regime regime) {
    check_constants(in);
    if (!(in.h > 0.0) || !(in.h <= 2.0 / in.M)) {
        std::ostringstream msg;
        msg << "step size h=" << in.h << " outside (0, 2/M] = (0, " << 2.0 / in.M << "]";
        throw std::domain_error(msg.str());
    }
    BoundReport out;
    out.regime = regime;
    const double s2 = in.sigma * in.sigma;
    if (regime == Regime::a) {
        out.gamma = std::abs(1.0 - in.m * in.h);
        out.contraction_term = power(1.0 - 0.5 * in.m * in.h, in.K) * in.w2_init;
        out.bias_term = std::sqrt(2.0 * in.h * in.p / in.m) * std::sqrt(s2 + 3.3 * in.M * in.M / in.m);
    } else {
        const double slack = 2.0 - in.M * in.h;
        out.gamma = std::abs(1.0 - in.M * in.h);
        out.contraction_term = power(0.5 * in.M * in.h, in.K) * in.w2_init;
        out.bias_term = slack > 0.0 ? std::sqrt(2.0 * in.h * in.h * in.p / slack) * std::sqrt(s2 + 6.6 * in.M / slack)
                                    : std::numeric_limits<double>::infinity();
    }
    out.value = out.contraction_term + out.bias_term;
    out.exact_contraction = out.gamma == 0.0;
    return out;
}

BoundReport theorem2_bound(const BoundInputs& in) { return theorem2_formula(in, regime_of(in)); }

double dm_bias_squared(double m, double M, double h, double p) {
    return (M * h * p / m) * (m + M) * (h + (m + M) / (2.0 * m * M)) * (2.0 + M * M * h / m + M * M * h * h / 6.0);
}

double dm_bound(const BoundInputs& in) {
    check_constants(in);
    if (!(in.h > 0.0) || !(in.h <= 2.0 / (in.m + in.M))) {
        std::ostringstream msg;
        msg << "dm bound needs 0 < h <= 2/(m+M) = " << 2.0 / (in.m + in.M) << ", got h=" << in.h;
        throw std::domain_error(msg.str());
    }
    const double rate = 1.0 - in.m * in.M * in.h / (in.m + in.M);
    const double w2sq = 2.0 * power(rate, in.K) * in.w2_init * in.w2_init + dm_bias_squared(in.m, in.M, in.h, in.p);
    return std::sqrt(w2sq);
}

double init_w2_from_mean(double dist2_to_mean, double p, double m) {
    if (!(dist2_to_mean >= 0.0) || !(p >= 0.0)) throw std::invalid_argument("init_w2_from_mean: inputs must be >= 0");
    if (!(m > 0.0)) throw std::invalid_argument("init_w2_from_mean: m must be positive");
    return std::sqrt(dist2_to_mean + p / m);
}

double init_w2_from_f(double f_at_theta0, double p, double m, double f_lower_bound) {
    if (!(m > 0.0)) throw std::invalid_argument("init_w2_from_f: m must be positive");
    const double radicand = (2.0 / m) * (f_at_theta0 - f_lower_bound + p);
    if (!(radicand >= 0.0)) {
        std::ostringstream msg;
        msg << "init_w2_from_f: negative radicand " << radicand << "; f_lower_bound=" << f_lower_bound
            << " cannot be a lower bound of the mean potential";
        throw std::domain_error(msg.str());
    }
    return std::sqrt(radicand);
}

}  // namespace langevin
