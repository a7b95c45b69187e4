#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "dynet/critical.hpp"
#include "dynet/errors.hpp"
#include "dynet/kernels.hpp"

using namespace dynet;
using namespace dynet::critical;

TEST_CASE("H at zero is one; small-x expansion") {
    CHECK(h_series(0.0, 1.0, 1.0) == doctest::Approx(1.0));
    // H(x) ~ 1 - x/u for tiny x
    CHECK(h_series(1e-8, 1.0, 0.5) == doctest::Approx(1.0 - 2e-8).epsilon(1e-12));
}

TEST_CASE("H frozen value: lambda = u = 1 is a Bessel J0 evaluation") {
    // H_1(x) = sum (-x)^n/(n!)^2 = J0(2 sqrt x); J0(2) at x = 1
    CHECK(h_series(1.0, 1.0, 1.0) == doctest::Approx(0.22389077914123567).epsilon(1e-12));
}

TEST_CASE("lambda -> infinity limit: H -> exp(-x/u), no root") {
    for (double x : {0.5, 2.0, 5.0})
        CHECK(h_series(x, 1e12, 1.0) == doctest::Approx(std::exp(-x)).epsilon(1e-9));
}

TEST_CASE("c_cr(1,1) against the frozen oracle, with a grid-scan bracket") {
    double root = c_cr(1.0, 1.0);
    CHECK(root == doctest::Approx(1.4457964907366961).epsilon(1e-9));

    // independent confirmation: 0.01-step scan + fixed 200-term partial sums
    double lo = 0, hi = 0;
    for (double x = 0.01;; x += 0.01) {
        REQUIRE(x < 10.0);
        if (h_series(x, 1.0, 1.0) <= 0) {
            hi = x;
            lo = x - 0.01;
            break;
        }
    }
    CHECK(lo < root);
    CHECK(root < hi);
    auto sums_lo = h_partial_sums(lo, 1.0, 1.0, 200);
    auto sums_hi = h_partial_sums(hi, 1.0, 1.0, 200);
    CHECK(sums_lo.back() > 0);
    CHECK(sums_hi.back() < 0);
}

TEST_CASE("partial sums bracket the limit once terms decrease") {
    RngStream rng(21, 5);
    for (int trial = 0; trial < 100; ++trial) {
        double u = 0.3 + 3.0 * rng.next_double();
        double lambda = 0.3 + 3.0 * rng.next_double();
        double x = u * (0.2 + 3.0 * rng.next_double());
        double limit = h_series(x, lambda, u);
        auto sums = h_partial_sums(x, lambda, u, 60);
        // terms decrease beyond w = x/u at the latest
        int start = static_cast<int>(x / u) + 2;
        for (int n = start; n + 1 < static_cast<int>(sums.size()); ++n) {
            double r0 = sums[n] - limit, r1 = sums[n + 1] - limit;
            if (std::abs(r0) < 1e-13 || std::abs(r1) < 1e-13) break;
            CHECK(r0 * r1 <= 0);
        }
    }
}

TEST_CASE("scaling identity c_cr(lambda, u) = u c(u/lambda) to 1e-9 relative") {
    RngStream rng(22, 6);
    for (int i = 0; i < 20; ++i) {
        double lambda = 0.4 + 4.0 * rng.next_double();
        double u = 0.2 + 4.0 * rng.next_double();
        double direct = c_cr(lambda, u);
        double rescaled = u * c_rescaled(u / lambda);
        CHECK(direct == doctest::Approx(rescaled).epsilon(1e-9));
    }
}

TEST_CASE("positive homogeneity: c_cr(t lambda, t u) = t c_cr(lambda, u)") {
    double base = c_cr(1.0, 1.3);
    for (double t : {0.25, 3.0, 17.0})
        CHECK(c_cr(t, 1.3 * t) == doctest::Approx(t * base).epsilon(1e-9));
}

TEST_CASE("c_cr monotone on a 5x5 grid") {
    // Increasing in mu+beta, and (checked against Bessel-zero closed forms:
    // c_cr = (u^2/lambda) j_{lambda/u-1,1}^2 / 4) also increasing in lambda;
    // the homogeneity c_cr(t lambda, t u) = t c_cr and the u->0 limit
    // c_cr -> lambda/4 force the lambda direction.
    std::vector<double> lambdas = {0.5, 0.8, 1.2, 1.9, 3.0};
    std::vector<double> us = {0.3, 0.7, 1.1, 1.8, 2.6};
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        for (std::size_t j = 0; j + 1 < us.size(); ++j)
            CHECK(c_cr(lambdas[i], us[j]) < c_cr(lambdas[i], us[j + 1]));
    }
    for (std::size_t j = 0; j < us.size(); ++j) {
        for (std::size_t i = 0; i + 1 < lambdas.size(); ++i)
            CHECK(c_cr(lambdas[i], us[j]) < c_cr(lambdas[i + 1], us[j]));
    }
    // frozen cross-checks against independent Bessel-zero evaluations
    CHECK(c_cr(3.0, 0.3) == doctest::Approx(1.33753005931).epsilon(1e-8));
    CHECK(c_cr(0.5, 0.3) == doctest::Approx(0.512763627536).epsilon(1e-8));
}

TEST_CASE("Callaway limit: u c(u) -> 1/4") {
    double v = 1e-3 * c_rescaled(1e-3);
    CHECK(std::abs(v - 0.25) < 0.01);
    // frozen Bessel-zero oracle: 1e-3 * j_{999,1}^2 / 4 * 1e-3
    CHECK(v == doctest::Approx(0.2589052861026619).epsilon(1e-7));
}

TEST_CASE("alpha2_U: matrix recursion against closed cases") {
    auto one = SocialIndexDistribution::constant(1.0);
    for (unsigned k = 1; k <= 6; ++k)
        CHECK(alpha2_u(k, 1.0, one) == doctest::Approx(std::pow(2.0, k)).epsilon(1e-12));

    auto tp = SocialIndexDistribution::two_point(1.0, 2.0, 0.5);
    CHECK(alpha2_u(2, 1.0, tp) == doctest::Approx(9.25).epsilon(1e-12));
}

namespace {

// brute-force oracle: E[prod (S_{i-1}+S_i)] over all atom tuples
double alpha2_u_bruteforce(unsigned k, double alpha,
                           const std::vector<std::pair<double, double>>& atoms) {
    std::size_t tuples = 1;
    for (unsigned i = 0; i <= k; ++i) tuples *= atoms.size();
    double total = 0;
    for (std::size_t code = 0; code < tuples; ++code) {
        std::size_t c = code;
        double prob = 1.0, prod = 1.0, prev = 0;
        for (unsigned i = 0; i <= k; ++i) {
            auto [s, w] = atoms[c % atoms.size()];
            c /= atoms.size();
            prob *= w;
            if (i > 0) prod *= prev + s;
            prev = s;
        }
        total += prob * prod;
    }
    return std::pow(alpha, k) * total;
}

}  // namespace

TEST_CASE("alpha2_U equals exhaustive enumeration for 2- and 3-point laws") {
    std::vector<std::pair<double, double>> two = {{1.0, 0.5}, {2.0, 0.5}};
    std::vector<std::pair<double, double>> three = {{0.5, 0.2}, {1.0, 0.5}, {4.0, 0.3}};
    for (auto& atoms : {two, three}) {
        double m1 = 0, m2 = 0;
        for (auto [s, w] : atoms) {
            m1 += w * s;
            m2 += w * s * s;
        }
        for (unsigned k = 1; k <= 6; ++k) {
            double expect = alpha2_u_bruteforce(k, 1.3, atoms);
            CHECK(alpha2_u_moments(k, 1.3, m1, m2) ==
                  doctest::Approx(expect).epsilon(1e-9));
        }
    }
}

TEST_CASE("alpha2_P closed form") {
    auto one = SocialIndexDistribution::constant(1.0);
    CHECK(alpha2_p(5, 1.0, one) == doctest::Approx(32.0).epsilon(1e-12));
    CHECK(alpha2_p(1, 1.0, one) == doctest::Approx(2.0).epsilon(1e-12));
    auto tp = SocialIndexDistribution::two_point(1.0, 2.0, 0.5);
    CHECK(alpha2_p(4, 0.7, tp) ==
          doctest::Approx(std::pow(1.4, 4) * 1.5 * 1.5 * 2.5 * 2.5).epsilon(1e-12));
}

TEST_CASE("U and P path sums coincide for S = 1") {
    // the kernels carry the paper's E[S] = 1 normalization for the P-version,
    // so the composite sequences agree exactly at the unit-mean point
    auto c = SocialIndexDistribution::constant(1.0);
    for (unsigned k = 1; k <= 8; ++k)
        CHECK(alpha2_u(k, 0.9, c) == doctest::Approx(alpha2_p(k, 0.9, c)).epsilon(1e-12));
}

TEST_CASE("growth rates: closed form and k=60 ratio convergence") {
    auto one = SocialIndexDistribution::constant(1.0);
    CHECK(growth_rate(Version::U, 1.0, one) == doctest::Approx(2.0));
    CHECK(growth_rate(Version::P, 1.0, one) == doctest::Approx(2.0));
    auto ex = SocialIndexDistribution::exponential(1.0);
    CHECK(growth_rate(Version::U, 1.0, ex) ==
          doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
    CHECK(growth_rate(Version::P, 1.0, ex) == doctest::Approx(4.0));

    for (auto dist : {SocialIndexDistribution::two_point(1.0, 2.0, 0.5),
                      SocialIndexDistribution::exponential(1.0)}) {
        for (Version v : {Version::U, Version::P}) {
            double limit = growth_rate(v, 1.1, dist);
            double ratio = alpha2_ratio(v, 1.1, dist.m1(), dist.m2(), 60);
            CHECK(ratio == doctest::Approx(limit).epsilon(1e-6));
        }
    }
}

TEST_CASE("R and verdict") {
    auto one = SocialIndexDistribution::constant(1.0);
    ModelParams p{1.0, 0.2, 0.0, 0.8, Version::U};
    auto rep = r_and_verdict(p, one);
    CHECK(rep.r == doctest::Approx(0.0));
    CHECK(rep.verdict == Verdict::no_giant);
    CHECK(rep.u == doctest::Approx(1.0));

    p.alpha = 0.5;
    auto rep1 = r_and_verdict(p, one);
    p.alpha = 1.0;
    auto rep2 = r_and_verdict(p, one);
    CHECK(rep2.r == doctest::Approx(2.0 * rep1.r).epsilon(1e-12));
    CHECK(rep2.c_cr == doctest::Approx(rep1.c_cr));

    // exactly critical alpha lands in the near-critical band
    p.alpha = rep1.c_cr / 2.0;
    CHECK(r_and_verdict(p, one).verdict == Verdict::near_critical);
    p.alpha = 3.0;
    CHECK(r_and_verdict(p, one).verdict == Verdict::giant);
}

TEST_CASE("alpha1_mc: exact k=1 value, positivity, ratio diagnostic") {
    // alpha1(1) = int int kappa1 dmu dmu = 1/(lambda + u)
    for (auto [lambda, u] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {2.0, 0.7}}) {
        auto est = alpha1_mc(1, lambda, u, 400000, RngStream(31, 9));
        CHECK(est.estimate > 0);
        CHECK(std::abs(est.estimate - 1.0 / (lambda + u)) < 3 * est.stderr_est);
    }

    // ratio alpha1(12)/alpha1(11) within 10% of 1/c_cr(1,1) at 1e7 samples
    auto a11 = alpha1_mc(11, 1.0, 1.0, 10'000'000, RngStream(32, 10));
    auto a12 = alpha1_mc(12, 1.0, 1.0, 10'000'000, RngStream(32, 11));
    double ratio = a12.estimate / a11.estimate;
    double target = 1.0 / c_cr(1.0, 1.0);
    CHECK(std::abs(ratio / target - 1.0) < 0.10);
}
