#include "dynet/critical.hpp"

#include <mpfr.h>

#include <cmath>
#include <functional>
#include <future>
#include <vector>

#include "dynet/errors.hpp"
#include "dynet/kernels.hpp"

namespace dynet::critical {

namespace {

constexpr int kMaxTerms = 100000;
constexpr double kTermTol = 1e-14;

// ln of the peak term magnitude of sum (-w)^n / (n! prod(1 + (l-1) v)).
// Terms grow while w / (n (1 + (n-1) v)) > 1; the peak index solves
// n (1 + (n-1) v) = w.
double log_peak_term(double w, double v) {
    if (w <= 1.0) return 0.0;
    double n_star;
    if (v > 0) {
        double disc = (1.0 - v) * (1.0 - v) + 4.0 * v * w;
        n_star = (-(1.0 - v) + std::sqrt(disc)) / (2.0 * v);
    } else {
        n_star = w;
    }
    double n = std::max(1.0, std::floor(n_star));
    double lt = n * std::log(w) - std::lgamma(n + 1.0);
    if (v > 0) {
        double b = 1.0 / v;
        lt -= n * std::log(v) + std::lgamma(n + b) - std::lgamma(b);
    }
    return lt;
}

double h_core_double(double w, double v) {
    double sum = 1.0, term = 1.0;
    double prev_mag = 1.0;
    for (int n = 0; n < kMaxTerms; ++n) {
        term *= -w / ((n + 1.0) * (1.0 + n * v));
        sum += term;
        double mag = std::abs(term);
        double thr = kTermTol * (1.0 + std::abs(sum));
        if (mag <= prev_mag && mag < thr && n > 0) return sum;
        prev_mag = mag;
    }
    throw MaxIterations("H series did not converge within 1e5 terms");
}

struct MpfrEval {
    double value;       // sign-preserving even when |H| underflows a double
    long sum_exp;       // base-2 exponent of the sum (0 for a zero sum)
    long noise_exp;     // base-2 exponent of the arithmetic noise floor
};

// One pass at fixed precision. Terms stop once they sink below the noise
// floor (peak term magnitude * 2^-prec); by the alternating-series bound the
// truncation error sits at that floor too.
MpfrEval h_core_mpfr(double w, double v, mpfr_prec_t prec) {
    mpfr_t sum, term, denom, wm, vm;
    mpfr_inits2(prec, sum, term, denom, wm, vm, (mpfr_ptr) nullptr);
    mpfr_set_d(sum, 1.0, MPFR_RNDN);
    mpfr_set_d(term, 1.0, MPFR_RNDN);
    mpfr_set_d(wm, w, MPFR_RNDN);
    mpfr_set_d(vm, v, MPFR_RNDN);
    long max_term_exp = 1;
    long prev_exp = 1;
    bool done = false;
    for (int n = 0; n < kMaxTerms && !done; ++n) {
        // term *= -w / ((n+1)(1 + n v))
        mpfr_mul_ui(denom, vm, n, MPFR_RNDN);
        mpfr_add_ui(denom, denom, 1, MPFR_RNDN);
        mpfr_mul_ui(denom, denom, n + 1, MPFR_RNDN);
        mpfr_mul(term, term, wm, MPFR_RNDN);
        mpfr_div(term, term, denom, MPFR_RNDN);
        mpfr_neg(term, term, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);
        if (mpfr_zero_p(term)) {
            done = true;
            break;
        }
        long te = mpfr_get_exp(term);
        max_term_exp = std::max(max_term_exp, te);
        if (n > 0 && te <= prev_exp && te < max_term_exp - static_cast<long>(prec) + 4)
            done = true;
        prev_exp = te;
    }
    MpfrEval out;
    out.noise_exp = max_term_exp - static_cast<long>(prec) + 8;
    out.sum_exp = mpfr_zero_p(sum) ? out.noise_exp : mpfr_get_exp(sum);
    out.value = mpfr_get_d(sum, MPFR_RNDN);
    if (out.value == 0.0 && !mpfr_zero_p(sum)) {
        // |H| underflows double range; the root scan only needs the sign
        out.value = mpfr_sgn(sum) > 0 ? 5e-324 : -5e-324;
    }
    mpfr_clears(sum, term, denom, wm, vm, (mpfr_ptr) nullptr);
    if (!done) throw MaxIterations("H series did not converge within 1e5 terms");
    return out;
}

// How far below 1 the function can sink near its first root: the value scale
// there is Gamma(b) (z/2)^{1-b} with b = 1/v and z = 2 sqrt(w/v).
double log_dip(double w, double v) {
    if (w <= 0 || v <= 0) return 0.0;
    double b = 1.0 / v;
    double half_z = std::sqrt(w / v);
    if (half_z <= 1.0) return 0.0;
    double env = std::lgamma(b) - (b - 1.0) * std::log(half_z);
    return std::max(0.0, -env);
}

// Canonical variables: w = x/u, v = u/lambda; series value depends on (w, v)
// only. Near its first root at small v the function dips exponentially far
// below the peak term, so the precision budget covers peak, dip and slack,
// and is raised further if the cancelled sum fails to clear the noise floor.
double h_core(double w, double v) {
    if (w < 0) throw InvalidConfig("H is defined for x >= 0");
    double lp = log_peak_term(w, v);
    if (lp < 7.0) {
        double val = h_core_double(w, v);
        double noise = 1e-15 * std::exp(lp);
        if (std::abs(val) > 1024.0 * noise) return val;
    }
    auto prec = static_cast<mpfr_prec_t>((lp + log_dip(w, v)) / std::log(2.0)) + 96;
    for (int tries = 0; tries < 40; ++tries) {
        MpfrEval ev = h_core_mpfr(w, v, prec);
        long margin = ev.sum_exp - ev.noise_exp;
        if (margin > 20) return ev.value;
        long deficit = 40 - margin;
        prec += std::max<long>(128, deficit + 64);
    }
    throw NonConvergence("H evaluation could not certify the sign at any precision");
}

// Geometric scan factor. The roots of H sit at the zeros of a Bessel function
// of order nu = lambda/u - 1; consecutive zeros are ~2.78 nu^{-2/3} apart in
// relative terms, so for small u the scan must step finer than the default 5%
// or it can hop over the first root into the oscillatory region.
double scan_factor(double v) {
    double nu = std::max(1.0, 1.0 / v - 1.0);
    double rel_gap = 2.78 * std::pow(nu, -2.0 / 3.0);
    return 1.0 + std::min(0.05, 0.5 * rel_gap);
}

double smallest_root(const std::function<double(double)>& h, double scan_start,
                     double scan_bound, double factor) {
    double lo = scan_start;
    double h_lo = h(lo);
    if (h_lo <= 0) throw RootNotFound("H not positive at the scan origin");
    double hi = lo;
    double h_hi = h_lo;
    while (h_hi > 0) {
        lo = hi;
        h_lo = h_hi;
        hi *= factor;
        if (hi > scan_bound)
            throw RootNotFound("no sign change of H up to scan bound " +
                               std::to_string(scan_bound));
        h_hi = h(hi);
    }
    // bisection to 1e-10 relative
    while (hi - lo > 1e-10 * lo) {
        double mid = 0.5 * (lo + hi);
        double hm = h(mid);
        if (hm > 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double h_series(double x, double lambda, double u_rate) {
    if (u_rate <= 0) throw InvalidConfig("H needs mu + beta > 0");
    if (lambda <= 0) throw InvalidConfig("H needs lambda > 0");
    return h_core(x / u_rate, u_rate / lambda);
}

double h_rescaled(double y, double u) {
    if (u <= 0) throw InvalidConfig("H_u needs u > 0");
    return h_core(y, u);
}

std::vector<double> h_partial_sums(double x, double lambda, double u_rate, int n_terms) {
    double w = x / u_rate, v = u_rate / lambda;
    std::vector<double> sums;
    sums.reserve(n_terms);
    double sum = 1.0, term = 1.0;
    sums.push_back(sum);
    for (int n = 0; n + 1 < n_terms; ++n) {
        term *= -w / ((n + 1.0) * (1.0 + n * v));
        sum += term;
        sums.push_back(sum);
    }
    return sums;
}

double c_cr(double lambda, double u_rate) {
    if (u_rate <= 0) throw InvalidConfig("c_cr needs mu + beta > 0");
    return smallest_root([&](double x) { return h_series(x, lambda, u_rate); }, u_rate / 10.0,
                         u_rate * 1e7, scan_factor(u_rate / lambda));
}

double c_rescaled(double u) {
    if (u <= 0) throw InvalidConfig("c(u) needs u > 0");
    return smallest_root([&](double y) { return h_rescaled(y, u); }, 0.1, 1e7, scan_factor(u));
}

double alpha2_u_moments(unsigned k, double alpha, double m1, double m2) {
    if (k < 1) throw InvalidConfig("alpha2 needs k >= 1");
    if (!std::isfinite(m2)) throw InfiniteMoment("E[S^2]");
    double f = 2.0 * m1;
    double g = m1 * m1 + m2;
    for (unsigned i = 1; i < k; ++i) {
        double f_next = m1 * f + g;
        double g_next = m2 * f + m1 * g;
        f = f_next;
        g = g_next;
    }
    return std::pow(alpha, k) * f;
}

double alpha2_u(unsigned k, double alpha, const SocialIndexDistribution& dist) {
    return alpha2_u_moments(k, alpha, dist.m1(), dist.m2());
}

double alpha2_p_moments(unsigned k, double alpha, double m1, double m2) {
    if (k < 1) throw InvalidConfig("alpha2 needs k >= 1");
    if (!std::isfinite(m2)) throw InfiniteMoment("E[S^2]");
    if (k == 1) return 2.0 * alpha * m1 * m1;
    return std::pow(2.0 * alpha, k) * m1 * m1 * std::pow(m2, k - 2.0);
}

double alpha2_p(unsigned k, double alpha, const SocialIndexDistribution& dist) {
    return alpha2_p_moments(k, alpha, dist.m1(), dist.m2());
}

double growth_rate(Version version, double alpha, const SocialIndexDistribution& dist) {
    double m1 = dist.m1(), m2 = dist.m2();
    if (!std::isfinite(m2)) throw InfiniteMoment("E[S^2]");
    if (version == Version::U) return alpha * (m1 + std::sqrt(m2));
    return 2.0 * alpha * m2;
}

double alpha2_ratio(Version version, double alpha, double m1, double m2, unsigned k) {
    if (!std::isfinite(m2)) throw InfiniteMoment("E[S^2]");
    if (version == Version::P) {
        if (k == 1) return 2.0 * alpha * m2 * m2 / (m1 * m1);
        return 2.0 * alpha * m2;
    }
    double f = 2.0 * m1;
    double g = m1 * m1 + m2;
    double ratio = 0;
    for (unsigned i = 1; i <= k; ++i) {
        double f_next = m1 * f + g;
        double g_next = m2 * f + m1 * g;
        ratio = f_next / f;
        double scale = std::max(std::abs(f_next), std::abs(g_next));
        f = f_next / scale;
        g = g_next / scale;
    }
    return alpha * ratio;
}

CriticalReport r_and_verdict(const ModelParams& p, const SocialIndexDistribution& dist,
                             double margin) {
    require_valid(p);
    CriticalReport rep;
    rep.margin = margin;
    rep.c_cr = c_cr(p.lambda, p.mu + p.beta);
    rep.u = (p.mu + p.beta) / p.lambda;
    rep.growth = growth_rate(p.version, p.alpha, dist);
    rep.r = rep.growth / rep.c_cr;
    if (std::abs(rep.r - 1.0) < margin)
        rep.verdict = Verdict::near_critical;
    else
        rep.verdict = rep.r > 1.0 ? Verdict::giant : Verdict::no_giant;
    return rep;
}

McEstimate alpha1_mc(unsigned k, double lambda, double u_rate, std::uint64_t n_samples,
                     RngStream rng) {
    if (k < 1) throw InvalidConfig("alpha1_mc needs k >= 1");
    constexpr int kBlocks = 16;  // fixed block count keeps the reduction deterministic
    std::uint64_t per_block = n_samples / kBlocks;
    std::uint64_t rem = n_samples % kBlocks;

    struct BlockSums {
        double sum = 0, sum_sq = 0;
    };
    auto run_block = [&](int b, std::uint64_t n) {
        RngStream r = rng.derive(b);
        BlockSums s;
        std::vector<double> ages(k + 1);
        for (std::uint64_t i = 0; i < n; ++i) {
            for (auto& a : ages) a = r.next_exponential(lambda);
            double prod = 1.0;
            for (unsigned j = 0; j < k; ++j) prod *= kappa1(ages[j], ages[j + 1], lambda, u_rate);
            s.sum += prod;
            s.sum_sq += prod * prod;
        }
        return s;
    };

    std::vector<std::future<BlockSums>> futs;
    futs.reserve(kBlocks);
    for (int b = 0; b < kBlocks; ++b)
        futs.push_back(std::async(std::launch::async, run_block, b,
                                  per_block + (b == 0 ? rem : 0)));
    double sum = 0, sum_sq = 0;
    for (auto& f : futs) {
        BlockSums s = f.get();
        sum += s.sum;
        sum_sq += s.sum_sq;
    }
    McEstimate est;
    est.samples = n_samples;
    est.estimate = sum / n_samples;
    double var = (sum_sq - sum * sum / n_samples) / (n_samples - 1.0);
    est.stderr_est = std::sqrt(var / n_samples);
    return est;
}

}  // namespace dynet::critical
