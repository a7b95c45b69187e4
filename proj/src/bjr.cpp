#include "dynet/bjr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dynet/errors.hpp"
#include "dynet/fenwick.hpp"
#include "dynet/quadrature.hpp"

namespace dynet::bjr {

Kernel Kernel::model(const ModelParams& p, const SocialIndexDistribution& dist) {
    require_valid(p);
    if (p.version == Version::P && !std::isfinite(dist.m2()))
        throw InfiniteMoment("E[S^2] (the P-kernel is not integrable for this index law)");
    return Kernel(false, 0.0, p, dist);
}

Kernel Kernel::constant(double value, const ModelParams& p,
                        const SocialIndexDistribution& dist) {
    if (!(value >= 0)) throw InvalidConfig("constant kernel value must be >= 0");
    return Kernel(true, value, p, dist);
}

TypeGrid TypeGrid::build(const ModelParams& p, const SocialIndexDistribution& dist,
                         int age_nodes, int s_nodes) {
    require_valid(p);
    TypeGrid g;
    GaussLegendre gl = gauss_legendre_unit(age_nodes);
    g.ages.resize(age_nodes);
    g.age_w = gl.weights;
    for (int i = 0; i < age_nodes; ++i) g.ages[i] = -std::log1p(-gl.nodes[i]) / p.lambda;
    if (dist.is_discrete()) {
        for (auto [s, w] : dist.atoms()) {
            g.ss.push_back(s);
            g.s_w.push_back(w);
        }
    } else {
        GaussLegendre gs = gauss_legendre_unit(s_nodes);
        g.ss.resize(s_nodes);
        g.s_w = gs.weights;
        for (int i = 0; i < s_nodes; ++i) g.ss[i] = dist.quantile(gs.nodes[i]);
    }
    return g;
}

namespace {

struct KernelMatrices {
    std::vector<double> k1w;  // [i * m + j] = age_part(a_i, a_j) * age_w[j]
    std::vector<double> k2v;  // [p * r + q] = index_part(s_p, s_q) * s_w[q]
    std::size_t m, r;
};

KernelMatrices build_matrices(const Kernel& kernel, const TypeGrid& grid) {
    KernelMatrices km;
    km.m = grid.ages.size();
    km.r = grid.ss.size();
    km.k1w.resize(km.m * km.m);
    km.k2v.resize(km.r * km.r);
    for (std::size_t i = 0; i < km.m; ++i)
        for (std::size_t j = 0; j < km.m; ++j)
            km.k1w[i * km.m + j] = kernel.age_part(grid.ages[i], grid.ages[j]) * grid.age_w[j];
    for (std::size_t p = 0; p < km.r; ++p)
        for (std::size_t q = 0; q < km.r; ++q)
            km.k2v[p * km.r + q] = kernel.index_part(grid.ss[p], grid.ss[q]) * grid.s_w[q];
    return km;
}

// out[i][p] = sum_j k1w[i][j] * sum_q k2v[p][q] * f[j][q]
void apply_operator(const KernelMatrices& km, const std::vector<double>& f,
                    std::vector<double>& tmp, std::vector<double>& out) {
    const std::size_t m = km.m, r = km.r;
    // tmp[j][p] = sum_q f[j][q] k2v[p][q]
    for (std::size_t j = 0; j < m; ++j)
        for (std::size_t p = 0; p < r; ++p) {
            double acc = 0;
            const double* frow = &f[j * r];
            const double* krow = &km.k2v[p * r];
            for (std::size_t q = 0; q < r; ++q) acc += frow[q] * krow[q];
            tmp[j * r + p] = acc;
        }
    // out[i][p] = sum_j k1w[i][j] tmp[j][p]
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < r; ++p) {
            double acc = 0;
            for (std::size_t j = 0; j < m; ++j) acc += km.k1w[i * m + j] * tmp[j * r + p];
            out[i * r + p] = acc;
        }
}

}  // namespace

FixedPointSolution solve_rho(const Kernel& kernel, const TypeGrid& grid, double tol,
                             std::size_t max_iter) {
    KernelMatrices km = build_matrices(kernel, grid);
    const std::size_t m = km.m, r = km.r, sz = m * r;
    std::vector<double> f(sz, 1.0), tf(sz), tmp(sz);
    double residual = 0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        apply_operator(km, f, tmp, tf);
        residual = 0;
        for (std::size_t i = 0; i < sz; ++i) {
            double next = -std::expm1(-tf[i]);
            if (next > f[i] + 1e-12)
                throw NonConvergence("fixed-point iterates lost monotonicity");
            residual = std::max(residual, f[i] - next);
            f[i] = next;
        }
        if (residual < tol) {
            FixedPointSolution sol;
            sol.f = std::move(f);
            sol.iterations = it;
            sol.residual = residual;
            double rho = 0;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t p = 0; p < r; ++p)
                    rho += grid.age_w[i] * grid.s_w[p] * sol.f[i * r + p];
            sol.rho_kappa = rho;
            return sol;
        }
    }
    throw MaxIterations("fixed-point iteration did not reach tolerance; residual " +
                        std::to_string(residual));
}

double operator_norm(const Kernel& kernel, const TypeGrid& grid, double tol,
                     std::size_t max_iter) {
    KernelMatrices km = build_matrices(kernel, grid);
    const std::size_t m = km.m, r = km.r, sz = m * r;
    std::vector<double> f(sz, 1.0), tf(sz), tmp(sz);
    double rayleigh = 0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        apply_operator(km, f, tmp, tf);
        // mu-weighted inner products
        double num = 0, den = 0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < r; ++p) {
                double w = grid.age_w[i] * grid.s_w[p];
                num += w * f[i * r + p] * tf[i * r + p];
                den += w * f[i * r + p] * f[i * r + p];
            }
        double q = num / den;
        double norm = 0;
        for (double v : tf) norm = std::max(norm, std::abs(v));
        if (norm == 0) return 0.0;  // zero kernel
        for (std::size_t i = 0; i < sz; ++i) f[i] = tf[i] / norm;
        if (it > 1 && std::abs(q - rayleigh) < tol * std::max(1.0, std::abs(q))) return q;
        rayleigh = q;
    }
    throw MaxIterations("power iteration did not converge");
}

namespace {

struct TypedNodes {
    std::vector<double> age, s;   // by node id
    std::vector<std::uint32_t> order;  // ids sorted by age ascending
};

TypedNodes draw_types(std::size_t n, const Kernel& kernel, RngStream& rng) {
    TypedNodes t;
    t.age.resize(n);
    t.s.resize(n);
    const double lambda = kernel.params().lambda;
    for (std::size_t i = 0; i < n; ++i) {
        t.age[i] = rng.next_exponential(lambda);
        t.s[i] = kernel.dist().sample(rng);
    }
    t.order.resize(n);
    std::iota(t.order.begin(), t.order.end(), 0);
    std::sort(t.order.begin(), t.order.end(),
              [&](std::uint32_t a, std::uint32_t b) { return t.age[a] < t.age[b]; });
    return t;
}

sim::Snapshot assemble(std::size_t n, const TypedNodes& t,
                       std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs) {
    for (auto& pr : pairs)
        if (pr.first > pr.second) std::swap(pr.first, pr.second);
    std::sort(pairs.begin(), pairs.end());
    sim::Snapshot snap;
    snap.t_obs = 0;
    std::vector<std::uint32_t> degree(n, 0);
    for (auto [a, b] : pairs) {
        ++degree[a];
        ++degree[b];
        snap.edges.push_back({a, b, 1, false});
    }
    snap.edge_copies = pairs.size();
    snap.nodes.reserve(n);
    for (std::uint32_t id = 0; id < n; ++id)
        snap.nodes.push_back({id, t.age[id], t.s[id], degree[id]});
    return snap;
}

}  // namespace

sim::Snapshot sample_graph(std::size_t n, const Kernel& kernel, RngStream rng,
                           SampleMethod method) {
    if (n < 1) throw InvalidConfig("sample_graph needs n >= 1");
    TypedNodes t = draw_types(n, kernel, rng);
    const double dn = static_cast<double>(n);

    // kappa1 is monotone in min(age,age'), so with ids sorted ascending the
    // age part of row i is a constant phi_i for every partner above i.
    std::vector<double> phi(n);
    for (std::size_t i = 0; i < n; ++i) {
        double a = t.age[t.order[i]];
        phi[i] = kernel.age_part(a, a);
    }

    double s_max = *std::max_element(t.s.begin(), t.s.end());
    double p_bound = 0;
    if (n >= 2) {
        double kappa2_max = kernel.index_part(s_max, s_max);
        p_bound = phi[n - 2] * kappa2_max / dn;
    }
    bool use_fast = method == SampleMethod::fast ||
                    (method == SampleMethod::automatic && p_bound < 1e-3);
    if (method == SampleMethod::fast && p_bound >= 1e-3)
        throw InvalidConfig("fast sampling requested but pair probabilities reach " +
                            std::to_string(p_bound));

    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    if (!use_fast) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            std::uint32_t id_i = t.order[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                std::uint32_t id_j = t.order[j];
                double p = std::min(1.0, phi[i] * kernel.index_part(t.s[id_i], t.s[id_j]) / dn);
                if (rng.next_double() < p) pairs.emplace_back(id_i, id_j);
            }
        }
        return assemble(n, t, pairs);
    }

    // fast path: per-row Poisson partner counts, partners by mixture sampling
    const bool preferential = !kernel.is_constant() && kernel.params().version == Version::P;
    const bool uniform_only = kernel.is_constant();
    FenwickTree suffix_s(n);  // weights in sorted order
    double suffix_sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
        suffix_s.set(i, t.s[t.order[i]]);
        suffix_sum += t.s[t.order[i]];
    }
    std::vector<std::uint32_t> row;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        std::uint32_t id_i = t.order[i];
        suffix_s.set(i, 0.0);
        suffix_sum -= t.s[id_i];
        double m_i = static_cast<double>(n - 1 - i);
        double w_uniform, w_weighted;
        if (uniform_only) {
            w_uniform = kernel.index_part(0, 0) / dn * m_i;  // constant kernel value
            w_weighted = 0;
        } else if (preferential) {
            w_uniform = 0;
            w_weighted = phi[i] * 2.0 * kernel.params().alpha * t.s[id_i] * suffix_sum / dn;
        } else {
            double a = kernel.params().alpha;
            w_uniform = phi[i] * a * t.s[id_i] / dn * m_i;
            w_weighted = phi[i] * a * suffix_sum / dn;
        }
        double lam_i = w_uniform + w_weighted;
        if (lam_i <= 0) continue;
        std::poisson_distribution<std::uint64_t> pois(lam_i);
        std::uint64_t k = pois(rng);
        if (k == 0) continue;
        row.clear();
        for (std::uint64_t c = 0; c < k; ++c) {
            std::size_t j;
            if (rng.next_double() * lam_i < w_uniform) {
                j = i + 1 + rng.next_below(n - 1 - i);
            } else {
                double x = suffix_s.prefix(i + 1) + rng.next_double() * suffix_sum;
                j = suffix_s.sample(x);
                if (j <= i || j >= n) continue;  // fp boundary
            }
            row.push_back(static_cast<std::uint32_t>(j));
        }
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        for (std::uint32_t j : row) pairs.emplace_back(id_i, t.order[j]);
    }
    return assemble(n, t, pairs);
}

}  // namespace dynet::bjr
