#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "dynet/sim.hpp"

namespace dynet::graphstats {

struct ComponentSummary {
    std::size_t component_count = 0;
    std::size_t largest_size = 0;
    double largest_fraction = 0;
};

/// Connected components with multiplicity collapsed and self-loops ignored.
ComponentSummary largest_component(const sim::Snapshot& snap);

struct AssortativityPolicy {
    bool exclude_self_loops = true;
    bool count_multiplicity = true;
};

struct AssortativityEstimate {
    std::optional<double> r;  // empty iff degree variance over edge ends is zero
    double std_error = 0;     // jackknife over edges
    std::uint64_t pair_count = 0;  // directed degree pairs (2 per edge copy)
};

/// Pearson correlation of the degrees at the two ends of a random edge
/// (Newman's mixing coefficient). Throws TooFewEdges below 2 usable edges.
AssortativityEstimate assortativity(const sim::Snapshot& snap, AssortativityPolicy policy = {});

/// Sufficient statistics over the directed degree pairs, for estimators that
/// need the covariance as well as the correlation.
struct EdgePairStats {
    std::uint64_t pairs = 0;
    double mean = 0;      // mean endpoint degree over edge ends
    double variance = 0;  // variance of endpoint degree over edge ends
    double covariance = 0;
    std::optional<double> r;
    double se_r = 0;    // jackknife over edges
    double se_cov = 0;  // jackknife over edges
};
EdgePairStats edge_pair_stats(const sim::Snapshot& snap, AssortativityPolicy policy = {});

/// Pooled over disjoint snapshots (replicas); jackknife still runs per edge.
EdgePairStats edge_pair_stats_pooled(const std::vector<const sim::Snapshot*>& snaps,
                                     AssortativityPolicy policy = {});

/// Counts by degree, index 0..max_degree.
std::vector<std::uint64_t> degree_histogram(const sim::Snapshot& snap);

/// One-sample Kolmogorov-Smirnov statistic of the node ages against Exp(lambda).
double age_ks_statistic(const sim::Snapshot& snap, double lambda);

double ks_statistic_exp(std::vector<double> xs, double rate);

/// Two-sample KS statistic (tie-aware).
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Asymptotic critical value c(alpha)/sqrt(n_eff); for the two-sample test use
/// n_eff = n*m/(n+m).
double ks_critical(double n_eff, double significance);

/// Total variation between an empirical histogram and a pmf table; pmf mass
/// beyond the table counts fully.
double total_variation(const std::vector<std::uint64_t>& hist, const std::vector<double>& pmf);

}  // namespace dynet::graphstats
