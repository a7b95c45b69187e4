#include "dynet/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "dynet/errors.hpp"
#include "dynet/quadrature.hpp"

namespace dynet::analytic {

namespace {

void require_finite(double m, const char* name) {
    if (!std::isfinite(m)) throw InfiniteMoment(name);
}

double poisson_pmf(unsigned k, double mean) {
    if (mean <= 0) return k == 0 ? 1.0 : 0.0;
    return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0));
}

/// P(D = k | S = s): the age-mixture integral. Substituting g = 1 - e^{-gamma a}
/// turns the Exp(lambda) age measure into Beta(1, lambda/gamma) on g.
double pmf_given_s(unsigned k, double poisson_coef, double lambda_over_gamma) {
    if (poisson_coef <= 0) return k == 0 ? 1.0 : 0.0;
    const double r = lambda_over_gamma;
    if (r >= 1.0) {
        return integrate_checked(
            [&](double g) {
                return r * std::pow(1.0 - g, r - 1.0) * poisson_pmf(k, poisson_coef * g);
            },
            0.0, 1.0, 1e-11, 1e-11);
    }
    // r < 1: move the endpoint singularity away with t = (1-g)^r
    return integrate_checked(
        [&](double t) {
            double g = 1.0 - std::pow(t, 1.0 / r);
            return poisson_pmf(k, poisson_coef * g);
        },
        0.0, 1.0, 1e-11, 1e-11);
}

}  // namespace

double age_cutoff(const ModelParams& p) {
    return 40.0 / std::min(p.lambda, p.gamma() > 0 ? p.gamma() : p.lambda);
}

double mixing_mean(double age, double s, const ModelParams& p, double mu_s) {
    double g = p.gamma();
    double growth = -std::expm1(-g * age) / g;  // (1 - e^{-gamma a}) / gamma
    if (p.version == Version::U) return p.alpha * (s + mu_s) * growth;
    return 2.0 * p.alpha * s * growth;
}

DegreeMoments degree_mean_var(const ModelParams& p, const SocialIndexDistribution& dist) {
    require_valid(p);
    double m1 = dist.m1(), m2 = dist.m2();
    require_finite(m2, "E[S^2]");
    double lam = p.lambda, g = p.gamma(), a = p.alpha;
    double mean = 2.0 * a * m1 / (lam + g);
    double var_s = m2 - m1 * m1;
    double var = mean + 4.0 * lam * a * a * m1 * m1 / ((lam + g) * (lam + g) * (lam + 2 * g));
    double coef = p.version == Version::U ? 2.0 : 8.0;
    var += coef * a * a * var_s / ((lam + g) * (lam + 2 * g));
    return {mean, var};
}

double mixed_poisson_pmf(unsigned k, const ModelParams& p,
                         const SocialIndexDistribution& dist) {
    require_valid(p);
    double m1 = dist.m1();
    double r = p.lambda / p.gamma();
    return expect_over_s(
        dist,
        [&](double s) {
            double coef = (p.version == Version::U ? p.alpha * (s + m1) : 2.0 * p.alpha * s) /
                          p.gamma();
            return pmf_given_s(k, coef, r);
        },
        1e-10);
}

std::vector<double> mixed_poisson_pmf_table(const ModelParams& p,
                                            const SocialIndexDistribution& dist,
                                            unsigned k_max) {
    std::vector<double> out(k_max + 1);
    for (unsigned k = 0; k <= k_max; ++k) out[k] = mixed_poisson_pmf(k, p, dist);
    return out;
}

unsigned suggested_pmf_len(const ModelParams& p, const SocialIndexDistribution& dist) {
    DegreeMoments m = degree_mean_var(p, dist);
    unsigned k = static_cast<unsigned>(std::ceil(m.mean + 10.0 * std::sqrt(m.variance))) + 1;
    // heavier-than-Poisson mixing tails can hold mass past mean + 10 sd;
    // extend until the geometric tail estimate is negligible
    double prev = mixed_poisson_pmf(k - 1, p, dist);
    for (int guard = 0; guard < 400; ++guard) {
        double cur = mixed_poisson_pmf(k, p, dist);
        double ratio = prev > 0 ? cur / prev : 0.0;
        double tail = ratio < 1.0 ? cur * ratio / (1.0 - ratio) : cur * 10.0;
        if (cur + tail < 1e-7) break;
        prev = cur;
        ++k;
    }
    return k;
}

double neighbor_age_density(double age_nb, double age, const ModelParams& p) {
    require_valid(p);
    if (age_nb < 0 || age <= 0) return 0.0;
    double lam = p.lambda, g = p.gamma();
    double x = lam - g;
    double m = std::min(age, age_nb);
    double denom = -std::expm1(-g * age);  // 1 - e^{-gamma a}
    if (std::abs(x) >= 1e-9 * lam) {
        // exponents combined so nothing overflows for large ages
        return g * lam * (std::exp(x * m - lam * age_nb) - std::exp(-lam * age_nb)) / (x * denom);
    }
    double xm = x * m;
    return g * lam * std::exp(-lam * age_nb) * m * (1.0 + xm / 2.0 + xm * xm / 6.0) / denom;
}

double neighbor_index_density(double s_nb, double s, const ModelParams& p,
                              const SocialIndexDistribution& dist) {
    double fs = dist.density(s_nb);
    if (p.version == Version::U) return (s + s_nb) * fs / (s + dist.m1());
    return s_nb * fs / dist.m1();
}

StationaryEdgeLaw::StationaryEdgeLaw(const ModelParams& p, const SocialIndexDistribution& dist)
    : params_(p), dist_(dist) {
    require_valid(p);
    require_finite(dist.m1(), "E[S]");
    verify_normalization();
}

double StationaryEdgeLaw::age_density(double age) const {
    if (age < 0) return 0.0;
    double lam = params_.lambda, g = params_.gamma();
    return lam * (1.0 + lam / g) * std::exp(-lam * age) * (-std::expm1(-g * age));
}

double StationaryEdgeLaw::index_density(double s) const {
    double m1 = dist_.m1();
    if (params_.version == Version::P) return s * dist_.density(s) / m1;
    return (s + m1) / (2.0 * m1) * dist_.density(s);
}

double StationaryEdgeLaw::g1(double age) const {
    double g = params_.gamma();
    return -std::expm1(-g * age) / g;
}

double StationaryEdgeLaw::g2(double s) const {
    if (params_.version == Version::U) return params_.alpha * (s + dist_.m1());
    return 2.0 * params_.alpha * s;
}

void StationaryEdgeLaw::verify_normalization() const {
    double a_max = age_cutoff(params_);
    double lam = params_.lambda, g = params_.gamma();
    QuadResult q = integrate([&](double a) { return age_density(a); }, 0.0, a_max, 1e-10, 1e-10);
    // closed-form tail of the age density beyond a_max
    double c = 1.0 + lam / g;
    double tail = c * (std::exp(-lam * a_max) - lam / (lam + g) * std::exp(-(lam + g) * a_max));
    if (!q.converged || std::abs(q.value + tail - 1.0) > 1e-8)
        throw NonConvergence("stationary age density failed its normalization check");
    double m1 = dist_.m1();
    double w = expect_over_s(
        dist_,
        [&](double s) {
            return params_.version == Version::P ? s / m1 : (s + m1) / (2.0 * m1);
        },
        1e-10);
    if (std::abs(w - 1.0) > 1e-8)
        throw NonConvergence("stationary index density failed its normalization check");
}

namespace {

struct AgeIntegrals {
    double i1;    // int g1 f_inf da
    double i1sq;  // int g1^2 f_inf da
    double ipair; // int int g1(a) g1(a') f_inf(a) f(a'|a) da da'
};

AgeIntegrals age_integrals(const ModelParams& p) {
    double lam = p.lambda, g = p.gamma();
    return {2.0 / (lam + 2 * g), 6.0 / ((lam + 2 * g) * (lam + 3 * g)),
            (5 * lam + 6 * g) / ((lam + g) * (lam + 2 * g) * (lam + 3 * g))};
}

}  // namespace

EdgeDegreeMoments edge_degree_moments(const ModelParams& p,
                                      const SocialIndexDistribution& dist) {
    require_valid(p);
    double m1 = dist.m1(), m2 = dist.m2(), m3 = dist.m3();
    require_finite(m2, "E[S^2]");
    require_finite(m3, "E[S^3]");
    AgeIntegrals ai = age_integrals(p);
    double a = p.alpha;
    double s_mean, s_sq, s_pair;
    if (p.version == Version::U) {
        s_mean = a * (m2 + 3 * m1 * m1) / (2 * m1);
        s_sq = a * a * (m3 + 3 * m1 * m2 + 4 * m1 * m1 * m1) / (2 * m1);
        s_pair = 2 * a * a * (m2 + m1 * m1);
    } else {
        s_mean = 2 * a * m2 / m1;
        s_sq = 4 * a * a * m3 / m1;
        s_pair = s_mean * s_mean;
    }
    EdgeDegreeMoments out;
    out.e_d1 = ai.i1 * s_mean;
    out.e_d1_sq = out.e_d1 + ai.i1sq * s_sq;
    out.e_d1d2 = ai.ipair * s_pair;
    out.covariance = out.e_d1d2 - out.e_d1 * out.e_d1;
    out.variance = out.e_d1_sq - out.e_d1 * out.e_d1;
    out.rho = out.covariance / out.variance;
    return out;
}

double covariance(const ModelParams& p, const SocialIndexDistribution& dist) {
    require_valid(p);
    double m1 = dist.m1(), m2 = dist.m2();
    require_finite(m2, "E[S^2]");
    double lam = p.lambda, g = p.gamma(), a = p.alpha;
    AgeIntegrals ai = age_integrals(p);
    if (p.version == Version::P) {
        // lambda^2 / ((lambda+gamma)(lambda+2 gamma)^2 (lambda+3 gamma)) * (2 alpha E[S^2]/E[S])^2
        double k = 2 * a * m2 / m1;
        return k * k * lam * lam /
               ((lam + g) * (lam + 2 * g) * (lam + 2 * g) * (lam + 3 * g));
    }
    double s_pair = 2 * a * a * (m2 + m1 * m1);
    double s_mean = a * (m2 + 3 * m1 * m1) / (2 * m1);
    return ai.ipair * s_pair - (ai.i1 * s_mean) * (ai.i1 * s_mean);
}

double assortativity_threshold(const ModelParams& p) {
    require_valid(p);
    double lam = p.lambda, g = p.gamma();
    double a = lam * lam / ((lam + g) * (lam + 3 * g));
    return 1.0 + a + std::sqrt(a * a + 4.0 * a);
}

double degree_correlation(const ModelParams& p, const SocialIndexDistribution& dist) {
    return edge_degree_moments(p, dist).rho;
}

double expect_over_s(const SocialIndexDistribution& dist,
                     const std::function<double(double)>& f, double abs_tol) {
    if (dist.is_discrete()) {
        double sum = 0;
        for (auto [s, w] : dist.atoms()) sum += w * f(s);
        return sum;
    }
    // u = 1 - e^{-w} opens the upper tail onto a log scale; without it the
    // quantile map hides heavy-tail mass in a boundary layer at u -> 1
    const double u_max = 1.0 - 0x1.0p-53;  // largest double below 1
    return integrate_checked(
        [&](double w) {
            double u = std::min(-std::expm1(-w), u_max);
            return f(dist.quantile(u)) * std::exp(-w);
        },
        0.0, 45.0, abs_tol, abs_tol, 4000);
}

}  // namespace dynet::analytic
