#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dynet/rng.hpp"

namespace dynet {

/// Law of the per-node social index S. Supported families have closed-form
/// moments; heavy-tail families may report infinite second/third moments
/// (returned as +inf, never as an error).
class SocialIndexDistribution {
  public:
    enum class Kind { constant, two_point, exponential, pareto, log_normal };

    static SocialIndexDistribution constant(double s);
    static SocialIndexDistribution two_point(double s1, double s2, double p1);
    static SocialIndexDistribution exponential(double rate);
    static SocialIndexDistribution pareto(double shape, double scale);
    /// m and v are the mean and variance of log(S).
    static SocialIndexDistribution log_normal(double m, double v);

    Kind kind() const { return kind_; }
    const std::vector<double>& raw_params() const { return par_; }

    /// Exact E[S], E[S^2], E[S^3]; +inf for Pareto with shape <= 2 (m2) or <= 3 (m3).
    double m1() const;
    double m2() const;
    double m3() const;
    double variance() const { return m2() - m1() * m1(); }

    double sample(RngStream& rng) const;

    bool is_discrete() const { return kind_ == Kind::constant || kind_ == Kind::two_point; }
    /// Atoms (value, mass) for discrete families; throws otherwise.
    std::vector<std::pair<double, double>> atoms() const;

    /// Density w.r.t. Lebesgue measure for continuous families, mass for atoms.
    double density(double s) const;
    /// Quantile function (continuous families; step function for discrete).
    double quantile(double u) const;

    std::string describe() const;

    bool operator==(const SocialIndexDistribution& o) const {
        return kind_ == o.kind_ && par_ == o.par_;
    }

  private:
    SocialIndexDistribution(Kind k, std::vector<double> par);

    Kind kind_;
    std::vector<double> par_;
};

/// Standard normal quantile (used for the log-normal family).
double normal_quantile(double u);

}  // namespace dynet
