#include "dynet/graphstats.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "dynet/errors.hpp"

namespace dynet::graphstats {

namespace {

class UnionFind {
  public:
    explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
        for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (size_[a] < size_[b]) std::swap(a, b);
        parent_[b] = a;
        size_[a] += size_[b];
    }
    std::size_t size(std::size_t root) const { return size_[root]; }

  private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
};

}  // namespace

ComponentSummary largest_component(const sim::Snapshot& snap) {
    const std::size_t n = snap.nodes.size();
    std::unordered_map<sim::node_id, std::size_t> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) index.emplace(snap.nodes[i].id, i);
    UnionFind uf(n);
    for (const auto& e : snap.edges) {
        if (e.self_loop) continue;
        uf.unite(index.at(e.a), index.at(e.b));
    }
    ComponentSummary out;
    for (std::size_t i = 0; i < n; ++i) {
        if (uf.find(i) == i) {
            ++out.component_count;
            out.largest_size = std::max(out.largest_size, uf.size(i));
        }
    }
    out.largest_fraction = n ? static_cast<double>(out.largest_size) / n : 0.0;
    return out;
}

namespace {

// degrees of the two ends of every usable edge copy
struct PairData {
    std::vector<double> x, y;  // one entry per edge copy (undirected)
};

void collect_pairs(const sim::Snapshot& snap, AssortativityPolicy policy, PairData& pd) {
    std::unordered_map<sim::node_id, double> degree;
    degree.reserve(snap.nodes.size());
    for (const auto& n : snap.nodes) degree.emplace(n.id, n.degree);
    for (const auto& e : snap.edges) {
        if (policy.exclude_self_loops && e.self_loop) continue;
        std::uint32_t copies = policy.count_multiplicity ? e.multiplicity : 1;
        double da = degree.at(e.a), db = degree.at(e.b);
        for (std::uint32_t c = 0; c < copies; ++c) {
            pd.x.push_back(da);
            pd.y.push_back(db);
        }
    }
}

EdgePairStats pair_stats_from(const PairData& pd) {
    const std::size_t m = pd.x.size();  // edge copies
    if (m < 2) throw TooFewEdges("need at least 2 edges for degree-pair statistics");

    // symmetrized sums: each copy contributes (x,y) and (y,x)
    double sx = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sx += pd.x[i] + pd.y[i];
        sxx += pd.x[i] * pd.x[i] + pd.y[i] * pd.y[i];
        sxy += 2.0 * pd.x[i] * pd.y[i];
    }
    const double n = 2.0 * static_cast<double>(m);

    EdgePairStats st;
    st.pairs = static_cast<std::uint64_t>(n);
    st.mean = sx / n;
    st.variance = sxx / n - st.mean * st.mean;
    st.covariance = sxy / n - st.mean * st.mean;

    auto corr = [](double nn, double sx_, double sxx_, double sxy_) -> std::optional<double> {
        double var = nn * sxx_ - sx_ * sx_;
        if (var <= 0) return std::nullopt;
        return (nn * sxy_ - sx_ * sx_) / var;
    };
    auto cov = [](double nn, double sx_, double sxy_) {
        return sxy_ / nn - (sx_ / nn) * (sx_ / nn);
    };

    st.r = corr(n, sx, sxx, sxy);
    if (!st.r.has_value()) {
        st.se_r = std::numeric_limits<double>::quiet_NaN();
        st.se_cov = std::numeric_limits<double>::quiet_NaN();
        return st;
    }

    // jackknife over edge copies
    double sum_r = 0, sum_r2 = 0, sum_c = 0, sum_c2 = 0;
    bool all_defined = true;
    for (std::size_t i = 0; i < m; ++i) {
        double xi = pd.x[i], yi = pd.y[i];
        double nn = n - 2;
        double sx_ = sx - xi - yi;
        double sxx_ = sxx - xi * xi - yi * yi;
        double sxy_ = sxy - 2 * xi * yi;
        auto ri = corr(nn, sx_, sxx_, sxy_);
        if (!ri.has_value()) {
            all_defined = false;
            break;
        }
        sum_r += *ri;
        sum_r2 += *ri * *ri;
        double ci = cov(nn, sx_, sxy_);
        sum_c += ci;
        sum_c2 += ci * ci;
    }
    if (all_defined && m > 1) {
        double dm = static_cast<double>(m);
        double var_r = (sum_r2 - sum_r * sum_r / dm) * (dm - 1.0) / dm;
        double var_c = (sum_c2 - sum_c * sum_c / dm) * (dm - 1.0) / dm;
        st.se_r = std::sqrt(std::max(0.0, var_r));
        st.se_cov = std::sqrt(std::max(0.0, var_c));
    } else {
        st.se_r = std::numeric_limits<double>::quiet_NaN();
        st.se_cov = std::numeric_limits<double>::quiet_NaN();
    }
    return st;
}

}  // namespace

EdgePairStats edge_pair_stats(const sim::Snapshot& snap, AssortativityPolicy policy) {
    PairData pd;
    collect_pairs(snap, policy, pd);
    return pair_stats_from(pd);
}

EdgePairStats edge_pair_stats_pooled(const std::vector<const sim::Snapshot*>& snaps,
                                     AssortativityPolicy policy) {
    PairData pd;
    for (const sim::Snapshot* s : snaps) collect_pairs(*s, policy, pd);
    return pair_stats_from(pd);
}

AssortativityEstimate assortativity(const sim::Snapshot& snap, AssortativityPolicy policy) {
    EdgePairStats st = edge_pair_stats(snap, policy);
    return {st.r, st.se_r, st.pairs};
}

std::vector<std::uint64_t> degree_histogram(const sim::Snapshot& snap) {
    std::uint32_t max_deg = 0;
    for (const auto& n : snap.nodes) max_deg = std::max(max_deg, n.degree);
    std::vector<std::uint64_t> hist(max_deg + 1, 0);
    for (const auto& n : snap.nodes) ++hist[n.degree];
    return hist;
}

double ks_statistic_exp(std::vector<double> xs, double rate) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double f = -std::expm1(-rate * xs[i]);
        d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
    }
    return d;
}

double age_ks_statistic(const sim::Snapshot& snap, double lambda) {
    std::vector<double> ages;
    ages.reserve(snap.nodes.size());
    for (const auto& n : snap.nodes) ages.push_back(n.age);
    return ks_statistic_exp(std::move(ages), lambda);
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < a.size() && j < b.size()) {
        double v = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= v) ++i;
        while (j < b.size() && b[j] <= v) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

double ks_critical(double n_eff, double significance) {
    return std::sqrt(-0.5 * std::log(significance / 2.0)) / std::sqrt(n_eff);
}

double total_variation(const std::vector<std::uint64_t>& hist, const std::vector<double>& pmf) {
    std::uint64_t total = 0;
    for (auto c : hist) total += c;
    if (total == 0) throw Error("total_variation: empty histogram");
    double tv = 0, pmf_covered = 0;
    std::size_t k_max = std::max(hist.size(), pmf.size());
    for (std::size_t k = 0; k < k_max; ++k) {
        double emp = k < hist.size() ? static_cast<double>(hist[k]) / total : 0.0;
        double th = k < pmf.size() ? pmf[k] : 0.0;
        tv += std::abs(emp - th);
        pmf_covered += th;
    }
    tv += std::max(0.0, 1.0 - pmf_covered);  // theory mass beyond the table
    return 0.5 * tv;
}

}  // namespace dynet::graphstats
