#include "dynet/social_index.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "dynet/errors.hpp"

namespace dynet {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

SocialIndexDistribution::SocialIndexDistribution(Kind k, std::vector<double> par)
    : kind_(k), par_(std::move(par)) {}

SocialIndexDistribution SocialIndexDistribution::constant(double s) {
    if (!(s > 0)) throw InvalidConfig("constant social index must be positive");
    return {Kind::constant, {s}};
}

SocialIndexDistribution SocialIndexDistribution::two_point(double s1, double s2, double p1) {
    if (!(s1 > 0) || !(s2 > 0)) throw InvalidConfig("two-point atoms must be positive");
    if (!(p1 >= 0 && p1 <= 1)) throw InvalidConfig("two-point probability must lie in [0,1]");
    return {Kind::two_point, {s1, s2, p1}};
}

SocialIndexDistribution SocialIndexDistribution::exponential(double rate) {
    if (!(rate > 0)) throw InvalidConfig("exponential rate must be positive");
    return {Kind::exponential, {rate}};
}

SocialIndexDistribution SocialIndexDistribution::pareto(double shape, double scale) {
    if (!(shape > 1)) throw InvalidConfig("pareto shape must exceed 1 (finite mean required)");
    if (!(scale > 0)) throw InvalidConfig("pareto scale must be positive");
    return {Kind::pareto, {shape, scale}};
}

SocialIndexDistribution SocialIndexDistribution::log_normal(double m, double v) {
    if (!(v >= 0)) throw InvalidConfig("log-normal variance must be >= 0");
    return {Kind::log_normal, {m, v}};
}

double SocialIndexDistribution::m1() const {
    switch (kind_) {
        case Kind::constant: return par_[0];
        case Kind::two_point: return par_[2] * par_[0] + (1 - par_[2]) * par_[1];
        case Kind::exponential: return 1.0 / par_[0];
        case Kind::pareto: return par_[0] * par_[1] / (par_[0] - 1);
        case Kind::log_normal: return std::exp(par_[0] + par_[1] / 2);
    }
    return 0;
}

double SocialIndexDistribution::m2() const {
    switch (kind_) {
        case Kind::constant: return par_[0] * par_[0];
        case Kind::two_point:
            return par_[2] * par_[0] * par_[0] + (1 - par_[2]) * par_[1] * par_[1];
        case Kind::exponential: return 2.0 / (par_[0] * par_[0]);
        case Kind::pareto:
            return par_[0] > 2 ? par_[0] * par_[1] * par_[1] / (par_[0] - 2) : kInf;
        case Kind::log_normal: return std::exp(2 * par_[0] + 2 * par_[1]);
    }
    return 0;
}

double SocialIndexDistribution::m3() const {
    switch (kind_) {
        case Kind::constant: return par_[0] * par_[0] * par_[0];
        case Kind::two_point:
            return par_[2] * par_[0] * par_[0] * par_[0] +
                   (1 - par_[2]) * par_[1] * par_[1] * par_[1];
        case Kind::exponential: return 6.0 / (par_[0] * par_[0] * par_[0]);
        case Kind::pareto:
            return par_[0] > 3 ? par_[0] * par_[1] * par_[1] * par_[1] / (par_[0] - 3) : kInf;
        case Kind::log_normal: return std::exp(3 * par_[0] + 4.5 * par_[1]);
    }
    return 0;
}

double SocialIndexDistribution::sample(RngStream& rng) const {
    switch (kind_) {
        case Kind::constant: return par_[0];
        case Kind::two_point: return rng.next_double() < par_[2] ? par_[0] : par_[1];
        case Kind::exponential: return rng.next_exponential(par_[0]);
        case Kind::pareto:
            return par_[1] * std::pow(rng.next_double_open0(), -1.0 / par_[0]);
        case Kind::log_normal:
            return std::exp(par_[0] + std::sqrt(par_[1]) * rng.next_normal());
    }
    return 0;
}

std::vector<std::pair<double, double>> SocialIndexDistribution::atoms() const {
    switch (kind_) {
        case Kind::constant: return {{par_[0], 1.0}};
        case Kind::two_point:
            if (par_[2] == 0) return {{par_[1], 1.0}};
            if (par_[2] == 1) return {{par_[0], 1.0}};
            return {{par_[0], par_[2]}, {par_[1], 1 - par_[2]}};
        default: throw Error("atoms() called on a continuous social-index family");
    }
}

double SocialIndexDistribution::density(double s) const {
    switch (kind_) {
        case Kind::constant: return s == par_[0] ? 1.0 : 0.0;
        case Kind::two_point:
            if (s == par_[0]) return par_[2];
            if (s == par_[1]) return 1 - par_[2];
            return 0.0;
        case Kind::exponential: return s >= 0 ? par_[0] * std::exp(-par_[0] * s) : 0.0;
        case Kind::pareto: {
            double k = par_[0], b = par_[1];
            return s >= b ? k * std::pow(b, k) / std::pow(s, k + 1) : 0.0;
        }
        case Kind::log_normal: {
            if (!(s > 0)) return 0.0;
            if (par_[1] == 0) return s == std::exp(par_[0]) ? 1.0 : 0.0;
            double z = std::log(s) - par_[0];
            return std::exp(-z * z / (2 * par_[1])) / (s * std::sqrt(2 * M_PI * par_[1]));
        }
    }
    return 0;
}

double SocialIndexDistribution::quantile(double u) const {
    switch (kind_) {
        case Kind::constant: return par_[0];
        case Kind::two_point: return u < par_[2] ? par_[0] : par_[1];
        case Kind::exponential: return -std::log1p(-u) / par_[0];
        case Kind::pareto: return par_[1] * std::pow(1.0 - u, -1.0 / par_[0]);
        case Kind::log_normal:
            return std::exp(par_[0] + std::sqrt(par_[1]) * normal_quantile(u));
    }
    return 0;
}

std::string SocialIndexDistribution::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::constant: os << "constant(" << par_[0] << ")"; break;
        case Kind::two_point:
            os << "two_point(" << par_[0] << "," << par_[1] << ",p=" << par_[2] << ")";
            break;
        case Kind::exponential: os << "exponential(rate=" << par_[0] << ")"; break;
        case Kind::pareto: os << "pareto(shape=" << par_[0] << ",scale=" << par_[1] << ")"; break;
        case Kind::log_normal: os << "log_normal(m=" << par_[0] << ",v=" << par_[1] << ")"; break;
    }
    return os.str();
}

double normal_quantile(double u) {
    // Acklam's rational approximation refined by one Halley step.
    if (!(u > 0 && u < 1)) throw Error("normal_quantile needs u in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (u < plow) {
        double q = std::sqrt(-2 * std::log(u));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    } else if (u <= 1 - plow) {
        double q = u - 0.5, r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1);
    } else {
        double q = std::sqrt(-2 * std::log1p(-u));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1);
    }
    double e = 0.5 * std::erfc(-x / M_SQRT2) - u;
    double g = std::exp(-0.5 * x * x) / std::sqrt(2 * M_PI);
    x -= e / (g + 0.5 * x * e);  // Halley
    return x;
}

}  // namespace dynet
