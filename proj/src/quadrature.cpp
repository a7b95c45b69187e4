#include "dynet/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "dynet/errors.hpp"

namespace dynet {

namespace {

// 15-point Kronrod extension of 7-point Gauss (QUADPACK dqk15 constants).
const double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                        0.741531185599394, 0.586087235467691, 0.405845151377397,
                        0.207784955007898, 0.000000000000000};
const double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                        0.140653259715525, 0.169004726639267, 0.190350578064785,
                        0.204432940075298, 0.209482141084728};
const double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                       0.417959183673469};

struct Panel {
    double a, b, value, err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
    double h = 0.5 * (b - a);
    double c = 0.5 * (a + b);
    double fc = f(c);
    double res_g = fc * kWg[3];
    double res_k = fc * kWgk[7];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        res_k += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) res_g += kWg[j / 2] * (f1 + f2);
    }
    res_k *= h;
    res_g *= h;
    return {a, b, res_k, std::abs(res_k - res_g)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, double rel_tol, int max_intervals) {
    QuadResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    std::priority_queue<Panel> heap;
    Panel first = eval_panel(f, a, b);
    double total = first.value, toterr = first.err;
    heap.push(first);
    int n = 1;
    while (toterr > std::max(abs_tol, rel_tol * std::abs(total)) && n < max_intervals) {
        Panel worst = heap.top();
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        Panel l = eval_panel(f, worst.a, mid);
        Panel r = eval_panel(f, mid, worst.b);
        total += l.value + r.value - worst.value;
        toterr += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
        ++n;
    }
    out.value = total;
    out.error = toterr;
    out.intervals = n;
    out.converged = toterr <= std::max(abs_tol, rel_tol * std::abs(total));
    return out;
}

double integrate_checked(const std::function<double(double)>& f, double a, double b,
                         double abs_tol, double rel_tol, int max_intervals) {
    QuadResult r = integrate(f, a, b, abs_tol, rel_tol, max_intervals);
    if (!r.converged)
        throw NonConvergence("quadrature did not reach tolerance; error estimate " +
                             std::to_string(r.error));
    return r.value;
}

GaussLegendre gauss_legendre_unit(int n) {
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    // Newton on P_n with the three-term recurrence; nodes on [-1,1] then mapped.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.nodes[i] = 0.5 * (1.0 - x);  // map [-1,1] -> [0,1], descending cos order
        gl.nodes[n - 1 - i] = 0.5 * (1.0 + x);
        gl.weights[i] = 0.5 * w;
        gl.weights[n - 1 - i] = 0.5 * w;
    }
    double sum = 0;
    for (double w : gl.weights) sum += w;
    gl.weights[n - 1] += 1.0 - sum;
    return gl;
}

}  // namespace dynet
