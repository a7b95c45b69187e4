#pragma once

#include <cstdint>
#include <vector>

#include "dynet/kernels.hpp"
#include "dynet/params.hpp"
#include "dynet/rng.hpp"
#include "dynet/sim.hpp"
#include "dynet/social_index.hpp"

namespace dynet::bjr {

struct TypePoint {
    double age;
    double s;
};

/// Pair-connection kernel kappa(x, x') = kappa1(a, a') * kappa2(s, s') of the
/// static snapshot view, plus a constant test kernel. Carries the type
/// measure (params and social-index law) so grids and samplers can be built
/// from it.
class Kernel {
  public:
    static Kernel model(const ModelParams& p, const SocialIndexDistribution& dist);
    static Kernel constant(double value, const ModelParams& p,
                           const SocialIndexDistribution& dist);

    double operator()(const TypePoint& x, const TypePoint& y) const {
        if (constant_) return value_;
        return kappa1(x.age, y.age, params_.lambda, params_.gamma()) *
               kappa2(params_.version, params_.alpha, x.s, y.s);
    }
    double age_part(double a, double b) const {
        return constant_ ? 1.0 : kappa1(a, b, params_.lambda, params_.gamma());
    }
    double index_part(double s, double sp) const {
        return constant_ ? value_ : kappa2(params_.version, params_.alpha, s, sp);
    }

    bool is_constant() const { return constant_; }
    const ModelParams& params() const { return params_; }
    const SocialIndexDistribution& dist() const { return dist_; }

  private:
    Kernel(bool constant, double value, const ModelParams& p,
           const SocialIndexDistribution& dist)
        : constant_(constant), value_(value), params_(p), dist_(dist) {}

    bool constant_;
    double value_;
    ModelParams params_;
    SocialIndexDistribution dist_;
};

/// Discretized type space: age nodes are Gauss-Legendre strata of Exp(lambda)
/// (equal-probability quantile map), index nodes are exact atoms for discrete
/// families and quantile-mapped strata otherwise.
struct TypeGrid {
    std::vector<double> ages, age_w;
    std::vector<double> ss, s_w;

    static TypeGrid build(const ModelParams& p, const SocialIndexDistribution& dist,
                          int age_nodes = 200, int s_nodes = 200);
    static TypeGrid build(const Kernel& kernel, int age_nodes = 200, int s_nodes = 200) {
        return build(kernel.params(), kernel.dist(), age_nodes, s_nodes);
    }
};

struct FixedPointSolution {
    std::vector<double> f;  // row-major: f[i * n_s + p]
    double rho_kappa = 0;
    std::size_t iterations = 0;
    double residual = 0;
};

/// Maximal solution of f = 1 - exp(-T f) by monotone iteration from f == 1;
/// rho_kappa is the mu-weighted integral of f.
FixedPointSolution solve_rho(const Kernel& kernel, const TypeGrid& grid, double tol = 1e-10,
                             std::size_t max_iter = 100000);

/// Largest eigenvalue of the weighted kernel operator by power iteration
/// (Rayleigh-quotient convergence below tol).
double operator_norm(const Kernel& kernel, const TypeGrid& grid, double tol = 1e-10,
                     std::size_t max_iter = 100000);

enum class SampleMethod { automatic, exact, fast };

/// G(n, kappa): n i.i.d. types, every unordered pair connected independently
/// with min(kappa/n, 1). The fast path draws per-row Poisson partner counts
/// and is used only when every pair probability is below 1e-3.
sim::Snapshot sample_graph(std::size_t n, const Kernel& kernel, RngStream rng,
                           SampleMethod method = SampleMethod::automatic);

}  // namespace dynet::bjr
