#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynet/quadrature.hpp"

using namespace dynet;

TEST_CASE("known integrals to tight tolerance") {
    auto r = integrate([](double x) { return std::exp(-x); }, 0.0, 40.0, 1e-12, 1e-12);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-11));

    r = integrate([](double x) { return std::sin(x); }, 0.0, M_PI, 1e-12, 1e-12);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-11));

    // mild endpoint singularity
    r = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, 1e-9, 1e-9, 10000);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("oscillatory integrand needs subdivision and gets it") {
    auto r = integrate([](double x) { return std::cos(50.0 * x); }, 0.0, 1.0, 1e-11, 1e-11);
    CHECK(r.converged);
    CHECK(r.value == doctest::Approx(std::sin(50.0) / 50.0).epsilon(1e-9));
    CHECK(r.intervals > 1);
}

TEST_CASE("gauss-legendre weights sum to one and integrate polynomials exactly") {
    for (int n : {5, 20, 200}) {
        auto gl = gauss_legendre_unit(n);
        double wsum = 0, x3 = 0;
        for (int i = 0; i < n; ++i) {
            wsum += gl.weights[i];
            x3 += gl.weights[i] * std::pow(gl.nodes[i], 3);
        }
        CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(x3 == doctest::Approx(0.25).epsilon(1e-12));
    }
    // degree 2n-1 exactness: n = 5 integrates x^9 exactly
    auto gl = gauss_legendre_unit(5);
    double x9 = 0;
    for (int i = 0; i < 5; ++i) x9 += gl.weights[i] * std::pow(gl.nodes[i], 9);
    CHECK(x9 == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("quantile strata of Exp reproduce exponential moments") {
    auto gl = gauss_legendre_unit(200);
    double lambda = 1.7;
    double mean = 0, second = 0;
    for (int i = 0; i < 200; ++i) {
        double a = -std::log1p(-gl.nodes[i]) / lambda;
        mean += gl.weights[i] * a;
        second += gl.weights[i] * a * a;
    }
    // the integrand is log-singular at u = 1, so strata converge polynomially
    CHECK(mean == doctest::Approx(1.0 / lambda).epsilon(1e-4));
    CHECK(second == doctest::Approx(2.0 / (lambda * lambda)).epsilon(1e-3));
}
