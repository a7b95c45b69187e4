#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "dynet/fenwick.hpp"
#include "dynet/params.hpp"
#include "dynet/rng.hpp"
#include "dynet/social_index.hpp"

namespace dynet::sim {

using node_id = std::uint32_t;
constexpr node_id kNoNode = std::numeric_limits<node_id>::max();

struct EventRecord {
    enum class Type { none, birth, death, edge_create, edge_delete };
    Type type = Type::none;
    double time = 0;
    node_id a = kNoNode;  // birth/death: the node; edge events: one endpoint
    node_id b = kNoNode;  // edge events: the other endpoint
};

struct StopRule {
    enum class Kind { population, time };
    Kind kind = Kind::population;
    double threshold = 0;

    static StopRule population(std::uint64_t n) {
        return {Kind::population, static_cast<double>(n)};
    }
    static StopRule time(double t) { return {Kind::time, t}; }
};

/// Frozen observation of the network at one instant.
struct Snapshot {
    struct NodeRow {
        node_id id;
        double age;
        double social_index;
        std::uint32_t degree;  // multiplicity counted, self-loops contribute 2
    };
    struct EdgeRow {
        node_id a, b;  // a <= b
        std::uint32_t multiplicity;
        bool self_loop;
    };

    double t_obs = 0;
    std::vector<NodeRow> nodes;  // ordered by id
    std::vector<EdgeRow> edges;  // ordered by (a, b)
    std::uint64_t edge_copies = 0;      // edges counted with multiplicity
    std::uint64_t self_loop_copies = 0;
    std::uint64_t multi_edge_copies = 0;  // copies beyond the first per pair

    std::size_t n() const { return nodes.size(); }
    double mean_degree() const {
        if (nodes.empty()) return 0;
        return 2.0 * static_cast<double>(edge_copies) / static_cast<double>(nodes.size());
    }
};

/// Live population, edge multiset and the weighted index used for sampling.
/// One state is strictly sequential; distinct states are independent.
class SimState {
  public:
    /// Founder population: a single node born at time 0.
    static SimState initial(const SocialIndexDistribution& dist, RngStream& rng);

    double clock() const { return clock_; }
    std::uint64_t n_alive() const { return n_alive_; }
    std::uint64_t edge_count() const { return edges_.size(); }
    double sum_social() const { return sum_s_; }
    std::uint64_t births() const { return births_; }

    double total_rate(const ModelParams& p) const {
        return p.lambda * n_alive_ + p.mu * n_alive_ + p.alpha * sum_s_ +
               p.beta * edges_.size();
    }

    /// Advances the clock by Exp(total rate) and executes one event chosen
    /// proportionally to its rate. If the event would land past t_cap the
    /// clock freezes at t_cap and no event runs (Type::none).
    EventRecord step(const ModelParams& p, const SocialIndexDistribution& dist, RngStream& rng,
                     double t_cap = std::numeric_limits<double>::infinity());

    Snapshot snapshot() const;

    struct AuditReport {
        std::vector<std::string> mismatches;
        bool ok() const { return mismatches.empty(); }
    };
    /// Recomputes every aggregate from the raw collections and reports drift.
    AuditReport audit(const ModelParams& p) const;

    /// Fault-injection hook for audit tests.
    void corrupt_sum_social(double delta) { sum_s_ += delta; }

  private:
    struct NodeRec {
        double birth_time;
        double s;
        bool alive;
    };
    struct EdgeRec {
        node_id u, v;
        std::uint32_t pos_u, pos_v;  // positions in the incidence lists
    };

    node_id add_node(double t, double s);
    void kill_node(node_id d);
    void add_edge(node_id u, node_id v);
    void remove_edge(std::uint32_t e);
    void detach_incidence(node_id n, std::uint32_t pos);
    node_id sample_alive_uniform(RngStream& rng) const;
    node_id sample_alive_weighted(RngStream& rng) const;

    double clock_ = 0;
    std::vector<NodeRec> nodes_;
    std::vector<std::vector<std::uint32_t>> inc_;  // node -> incident edge indexes
    std::vector<EdgeRec> edges_;                   // one entry per edge copy
    std::vector<node_id> alive_;
    std::vector<std::uint32_t> pos_in_alive_;
    FenwickTree weights_;  // social-index weights of alive nodes
    std::uint64_t n_alive_ = 0;
    double sum_s_ = 0;
    std::uint64_t births_ = 0;
};

struct RunResult {
    Snapshot snapshot;
    std::uint64_t discarded_runs = 0;  // extinct attempts before the accepted one
    std::uint64_t events = 0;          // events in the accepted run
    double clock = 0;
};

/// Runs until the stop rule fires, restarting on extinction with the next
/// RNG substream (conditioning on survival). Throws TooManyRestarts after
/// max_restarts discarded attempts.
RunResult run(const ModelParams& p, const SocialIndexDistribution& dist, StopRule stop,
              RngStream rng, std::uint64_t max_restarts = 1000);

}  // namespace dynet::sim
