#pragma once

#include <cstdint>
#include <vector>

#include "dynet/params.hpp"
#include "dynet/rng.hpp"
#include "dynet/social_index.hpp"

namespace dynet::critical {

/// H(x) = 1 + sum_n (-1)^n (x/u)^n / n! * prod_{l=1}^n 1/(1 + (l-1) u/lambda).
/// Alternating series summed by term recurrence; arithmetic precision is
/// escalated automatically when the peak term would swamp a double.
double h_series(double x, double lambda, double u_rate);

/// Rescaled series H_u(y) (the lambda = 1, x = u*y normal form).
double h_rescaled(double y, double u);

/// Double-precision partial sums S_0..S_{n-1} (test hook for the
/// alternating-series bracketing property).
std::vector<double> h_partial_sums(double x, double lambda, double u_rate, int n_terms);

/// Smallest positive root of H: geometric scan (factor 1.05 from u_rate/10),
/// positivity certified on the scan prefix, then bisection to 1e-10 relative.
double c_cr(double lambda, double u_rate);

/// c(u): smallest positive root of H_u; c_cr(lambda, u) = u * c(u / lambda).
double c_rescaled(double u);

/// Index-kernel path sums E[prod (S_{i-1} + S_i)] style quantities.
double alpha2_u(unsigned k, double alpha, const SocialIndexDistribution& dist);
double alpha2_u_moments(unsigned k, double alpha, double m1, double m2);
double alpha2_p(unsigned k, double alpha, const SocialIndexDistribution& dist);
double alpha2_p_moments(unsigned k, double alpha, double m1, double m2);

/// lim alpha2(k)^{1/k}: alpha (E[S] + sqrt(E[S^2])) for U, 2 alpha E[S^2] for P.
double growth_rate(Version version, double alpha, const SocialIndexDistribution& dist);

/// alpha2(k+1)/alpha2(k) by normalized iteration (diagnostic; no overflow).
double alpha2_ratio(Version version, double alpha, double m1, double m2, unsigned k);

enum class Verdict { giant, no_giant, near_critical };

inline const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::giant: return "Giant";
        case Verdict::no_giant: return "NoGiant";
        case Verdict::near_critical: return "NearCritical";
    }
    return "?";
}

struct CriticalReport {
    double c_cr = 0;      // critical scale for the age-kernel path sums
    double u = 0;         // (mu + beta) / lambda
    double growth = 0;    // lim alpha2(k)^{1/k}
    double r = 0;         // growth / c_cr; giant component iff r > 1 (off-critical)
    Verdict verdict = Verdict::no_giant;
    double margin = 0.02; // |r - 1| < margin reports NearCritical
};

CriticalReport r_and_verdict(const ModelParams& p, const SocialIndexDistribution& dist,
                             double margin = 0.02);

struct McEstimate {
    double estimate = 0;
    double stderr_est = 0;
    std::uint64_t samples = 0;
};

/// Monte Carlo estimate of alpha1(k) = E[prod kappa1(X_{i-1}/lambda, X_i/lambda)]
/// over i.i.d. Exp(1) X's. Diagnostic cross-check of the c_cr machinery.
McEstimate alpha1_mc(unsigned k, double lambda, double u_rate, std::uint64_t n_samples,
                     RngStream rng);

}  // namespace dynet::critical
