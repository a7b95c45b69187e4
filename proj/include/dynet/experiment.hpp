#pragma once

#include <cstdint>
#include <vector>

#include "dynet/graphstats.hpp"
#include "dynet/json_config.hpp"
#include "dynet/sim.hpp"

namespace dynet {

/// Everything a reproducible experiment needs: a config plus the code version
/// determines every output byte (fixed replica streams, fixed merge order).
struct ExperimentConfig {
    ModelParams params;
    SocialIndexDistribution dist = SocialIndexDistribution::constant(1.0);
    std::uint64_t seed = 1;
    sim::StopRule stop = sim::StopRule::population(10000);
    int replicas = 1;
    int threads = 0;  // 0 = hardware concurrency
    std::uint64_t max_restarts = 1000;
};

/// Replica r runs on RngStream(seed, r); results are returned in replica
/// order no matter the thread schedule.
std::vector<sim::RunResult> run_replicas(const ExperimentConfig& cfg);

struct PooledStats {
    std::uint64_t nodes_total = 0;
    std::uint64_t edge_copies_total = 0;
    std::uint64_t self_loop_copies = 0;
    std::uint64_t multi_edge_copies = 0;
    std::uint64_t discarded_total = 0;
    double mean_degree = 0;
    double mean_degree_se = 0;  // over replicas (0 for a single replica)
    double degree_variance = 0;
    std::vector<std::uint64_t> degree_hist;
    double age_ks = 0;
    double age_ks_critical = 0;  // significance 0.01
    bool age_ks_pass = false;
    graphstats::EdgePairStats pairs;
    double largest_fraction_mean = 0;
    double largest_fraction_se = 0;
    double component_count_mean = 0;
};

PooledStats pool_stats(const std::vector<sim::RunResult>& results, double lambda);

json stats_to_json(const PooledStats& st);

/// Report for `simulate`: config echo + pooled statistics.
json simulate_report(const ExperimentConfig& cfg, const std::vector<sim::RunResult>& results);

/// All closed-form quantities for both versions; k_max 0 picks
/// mean + 10 sqrt(var) automatically.
json theory_report(const ModelParams& p, const SocialIndexDistribution& dist,
                   unsigned k_max = 0);

/// Theory vs simulation side by side with z-scores.
json compare_report(const ExperimentConfig& cfg, int grid_age = 200, int grid_s = 200);

}  // namespace dynet
