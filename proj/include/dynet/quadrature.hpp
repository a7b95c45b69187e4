#pragma once

#include <functional>
#include <vector>

namespace dynet {

struct QuadResult {
    double value = 0;
    double error = 0;       // estimated absolute error
    int intervals = 0;      // intervals used by the adaptive subdivision
    bool converged = false;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-10, double rel_tol = 1e-10, int max_intervals = 2000);

/// Same, but throws NonConvergence if the requested tolerance is not met.
double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double abs_tol = 1e-10, double rel_tol = 1e-10,
                         int max_intervals = 2000);

/// Gauss-Legendre nodes and weights on [0, 1]; weights sum to 1 exactly
/// (last weight absorbs rounding).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
GaussLegendre gauss_legendre_unit(int n);

}  // namespace dynet
