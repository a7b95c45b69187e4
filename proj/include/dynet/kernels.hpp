#pragma once

#include <algorithm>
#include <cmath>

#include "dynet/params.hpp"

namespace dynet {

/// Age part of the connection kernel:
/// (e^{(lambda - rate)(a ^ b)} - 1) / (lambda - rate), continuous at lambda = rate.
inline double kappa1(double a, double b, double lambda, double edge_rate) {
    double x = lambda - edge_rate;
    double m = std::min(a, b);
    if (std::abs(x) < 1e-9 * lambda) {
        double xm = x * m;
        return m * (1.0 + xm / 2.0 + xm * xm / 6.0);
    }
    return std::expm1(x * m) / x;
}

/// Social-index part: alpha (s + s') for U, 2 alpha s s' for P.
inline double kappa2(Version v, double alpha, double s, double sp) {
    return v == Version::U ? alpha * (s + sp) : 2.0 * alpha * s * sp;
}

}  // namespace dynet
