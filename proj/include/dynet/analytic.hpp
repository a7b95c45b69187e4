#pragma once

#include <functional>
#include <vector>

#include "dynet/params.hpp"
#include "dynet/social_index.hpp"

namespace dynet::analytic {

/// Upper truncation point for age quadrature; the exponential tails beyond it
/// are below 4e-18 of the mass.
double age_cutoff(const ModelParams& p);

/// Conditional Poisson mean of the degree of an (age, index) node.
double mixing_mean(double age, double s, const ModelParams& p, double mu_s);

struct DegreeMoments {
    double mean;
    double variance;
};

/// Closed-form mean and variance of the asymptotic degree law.
DegreeMoments degree_mean_var(const ModelParams& p, const SocialIndexDistribution& dist);

/// P(D = k) for the mixed-Poisson degree law, by quadrature over age and index.
double mixed_poisson_pmf(unsigned k, const ModelParams& p, const SocialIndexDistribution& dist);

/// pmf for k = 0..k_max inclusive.
std::vector<double> mixed_poisson_pmf_table(const ModelParams& p,
                                            const SocialIndexDistribution& dist,
                                            unsigned k_max);

/// Suggested table length: ceil(mean + 10 sqrt(var)).
unsigned suggested_pmf_len(const ModelParams& p, const SocialIndexDistribution& dist);

/// Density of the age of a random neighbour of an age-a node (same for U and P).
double neighbor_age_density(double age_nb, double age, const ModelParams& p);

/// Density/mass of the social index of a random neighbour of an index-s node.
double neighbor_index_density(double s_nb, double s, const ModelParams& p,
                              const SocialIndexDistribution& dist);

/// Type law of the "first" endpoint of a uniformly random edge.
class StationaryEdgeLaw {
  public:
    StationaryEdgeLaw(const ModelParams& p, const SocialIndexDistribution& dist);

    double age_density(double age) const;
    double index_density(double s) const;  // density (continuous) or mass (atoms)

    /// Poisson-mean factors of the degree of a type-(a,s) node.
    double g1(double age) const;
    double g2(double s) const;

    const ModelParams& params() const { return params_; }
    const SocialIndexDistribution& dist() const { return dist_; }

  private:
    void verify_normalization() const;

    ModelParams params_;
    SocialIndexDistribution dist_;
};

/// Moments of the degrees (D1, D2) at the two ends of a random edge,
/// with the connecting edge itself excluded.
struct EdgeDegreeMoments {
    double e_d1;        // E[D1] = E[D2]
    double e_d1_sq;     // E[D1^2]
    double e_d1d2;      // E[D1 D2]
    double covariance;  // E[D1 D2] - E[D1]^2
    double variance;    // E[D1^2] - E[D1]^2
    double rho;         // covariance / variance
};

EdgeDegreeMoments edge_degree_moments(const ModelParams& p, const SocialIndexDistribution& dist);

/// Covariance of neighbour degrees; needs m1, m2 only.
double covariance(const ModelParams& p, const SocialIndexDistribution& dist);

/// Critical ratio for E[S^2]/E[S]^2 below which the U-version covariance is
/// positive: 1 + a + sqrt(a^2 + 4a), a = lambda^2/((lambda+gamma)(lambda+3 gamma)).
double assortativity_threshold(const ModelParams& p);

/// Degree correlation rho = C / Var[D1]; needs m1, m2, m3.
double degree_correlation(const ModelParams& p, const SocialIndexDistribution& dist);

/// E[phi(S)] by exact atom summation or quantile-mapped quadrature.
double expect_over_s(const SocialIndexDistribution& dist, const std::function<double(double)>& f,
                     double abs_tol = 1e-10);

}  // namespace dynet::analytic
