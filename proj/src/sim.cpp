#include "dynet/sim.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "dynet/errors.hpp"

namespace dynet::sim {

SimState SimState::initial(const SocialIndexDistribution& dist, RngStream& rng) {
    SimState st;
    st.add_node(0.0, dist.sample(rng));
    return st;
}

node_id SimState::add_node(double t, double s) {
    node_id id = static_cast<node_id>(nodes_.size());
    nodes_.push_back({t, s, true});
    inc_.emplace_back();
    weights_.push_back(s);
    pos_in_alive_.push_back(static_cast<std::uint32_t>(alive_.size()));
    alive_.push_back(id);
    ++n_alive_;
    sum_s_ += s;
    ++births_;
    return id;
}

void SimState::kill_node(node_id d) {
    while (!inc_[d].empty()) remove_edge(inc_[d].back());
    NodeRec& rec = nodes_[d];
    rec.alive = false;
    weights_.set(d, 0.0);
    sum_s_ -= rec.s;
    --n_alive_;
    // swap-remove from the alive list
    std::uint32_t p = pos_in_alive_[d];
    node_id last = alive_.back();
    alive_[p] = last;
    pos_in_alive_[last] = p;
    alive_.pop_back();
}

void SimState::add_edge(node_id u, node_id v) {
    auto e = static_cast<std::uint32_t>(edges_.size());
    if (u == v) {
        auto pos = static_cast<std::uint32_t>(inc_[u].size());
        inc_[u].push_back(e);
        edges_.push_back({u, u, pos, pos});
    } else {
        auto pu = static_cast<std::uint32_t>(inc_[u].size());
        auto pv = static_cast<std::uint32_t>(inc_[v].size());
        inc_[u].push_back(e);
        inc_[v].push_back(e);
        edges_.push_back({u, v, pu, pv});
    }
}

void SimState::detach_incidence(node_id n, std::uint32_t pos) {
    auto& lst = inc_[n];
    auto last = static_cast<std::uint32_t>(lst.size() - 1);
    if (pos != last) {
        std::uint32_t moved = lst[last];
        lst[pos] = moved;
        EdgeRec& m = edges_[moved];
        if (m.u == n && m.pos_u == last) {
            m.pos_u = pos;
            if (m.u == m.v) m.pos_v = pos;
        } else {
            m.pos_v = pos;
        }
    }
    lst.pop_back();
}

void SimState::remove_edge(std::uint32_t e) {
    EdgeRec rec = edges_[e];
    detach_incidence(rec.u, rec.pos_u);
    if (rec.v != rec.u) detach_incidence(rec.v, rec.pos_v);
    auto last = static_cast<std::uint32_t>(edges_.size() - 1);
    if (e != last) {
        EdgeRec moved = edges_[last];
        edges_[e] = moved;
        inc_[moved.u][moved.pos_u] = e;
        if (moved.v != moved.u) inc_[moved.v][moved.pos_v] = e;
    }
    edges_.pop_back();
}

node_id SimState::sample_alive_uniform(RngStream& rng) const {
    return alive_[rng.next_below(alive_.size())];
}

node_id SimState::sample_alive_weighted(RngStream& rng) const {
    // retry covers the measure-zero boundary where rounding lands on a dead slot
    for (int tries = 0; tries < 64; ++tries) {
        double x = rng.next_double() * weights_.total();
        std::size_t slot = weights_.sample(x);
        if (slot < nodes_.size() && nodes_[slot].alive) return static_cast<node_id>(slot);
    }
    return alive_.back();
}

EventRecord SimState::step(const ModelParams& p, const SocialIndexDistribution& dist,
                           RngStream& rng, double t_cap) {
    if (n_alive_ == 0) throw Extinct();
    const double birth_rate = p.lambda * n_alive_;
    const double death_rate = p.mu * n_alive_;
    const double create_rate = p.alpha * sum_s_;
    const double delete_rate = p.beta * edges_.size();
    const double total = birth_rate + death_rate + create_rate + delete_rate;

    double dt = rng.next_exponential(total);
    if (clock_ + dt > t_cap) {
        clock_ = t_cap;
        return {EventRecord::Type::none, t_cap, kNoNode, kNoNode};
    }
    clock_ += dt;

    double u = rng.next_double() * total;
    if (u < birth_rate) {
        node_id id = add_node(clock_, dist.sample(rng));
        return {EventRecord::Type::birth, clock_, id, kNoNode};
    }
    u -= birth_rate;
    if (u < death_rate) {
        node_id d = sample_alive_uniform(rng);
        kill_node(d);
        return {EventRecord::Type::death, clock_, d, kNoNode};
    }
    u -= death_rate;
    if (u < create_rate) {
        node_id creator = sample_alive_weighted(rng);
        node_id partner = p.version == Version::U ? sample_alive_uniform(rng)
                                                  : sample_alive_weighted(rng);
        add_edge(creator, partner);
        return {EventRecord::Type::edge_create, clock_, creator, partner};
    }
    auto e = static_cast<std::uint32_t>(rng.next_below(edges_.size()));
    EdgeRec rec = edges_[e];
    remove_edge(e);
    return {EventRecord::Type::edge_delete, clock_, rec.u, rec.v};
}

Snapshot SimState::snapshot() const {
    Snapshot snap;
    snap.t_obs = clock_;
    std::vector<std::uint32_t> degree(nodes_.size(), 0);
    std::vector<std::pair<node_id, node_id>> pairs;
    pairs.reserve(edges_.size());
    for (const EdgeRec& e : edges_) {
        ++degree[e.u];
        ++degree[e.v];  // self-loop: same slot twice -> degree 2
        pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
    }
    std::sort(pairs.begin(), pairs.end());
    for (std::size_t i = 0; i < pairs.size();) {
        std::size_t j = i;
        while (j < pairs.size() && pairs[j] == pairs[i]) ++j;
        auto mult = static_cast<std::uint32_t>(j - i);
        bool self = pairs[i].first == pairs[i].second;
        snap.edges.push_back({pairs[i].first, pairs[i].second, mult, self});
        if (self) snap.self_loop_copies += mult;
        snap.multi_edge_copies += mult - 1;
        i = j;
    }
    snap.edge_copies = edges_.size();
    snap.nodes.reserve(n_alive_);
    for (node_id id = 0; id < nodes_.size(); ++id) {
        const NodeRec& n = nodes_[id];
        if (!n.alive) continue;
        snap.nodes.push_back({id, clock_ - n.birth_time, n.s, degree[id]});
    }
    return snap;
}

SimState::AuditReport SimState::audit(const ModelParams& p) const {
    AuditReport rep;
    auto flag = [&](const std::string& s) { rep.mismatches.push_back(s); };

    std::uint64_t alive_count = 0;
    double s_total = 0, s_comp = 0;  // Kahan
    for (const NodeRec& n : nodes_) {
        if (!n.alive) continue;
        ++alive_count;
        double y = n.s - s_comp;
        double t = s_total + y;
        s_comp = (t - s_total) - y;
        s_total = t;
    }
    if (alive_count != n_alive_)
        flag("alive count: stored " + std::to_string(n_alive_) + " recomputed " +
             std::to_string(alive_count));
    if (std::abs(s_total - sum_s_) > 1e-9 * std::max(1.0, std::abs(s_total)))
        flag("sum of social indices drifted: stored " + std::to_string(sum_s_) +
             " recomputed " + std::to_string(s_total));
    if (std::abs(weights_.total() - s_total) > 1e-9 * std::max(1.0, std::abs(s_total)))
        flag("weight index total drifted from recomputed sum");
    for (node_id id = 0; id < nodes_.size(); ++id) {
        double expect = nodes_[id].alive ? nodes_[id].s : 0.0;
        if (weights_.weight(id) != expect) {
            flag("weight index slot " + std::to_string(id) + " inconsistent");
            break;
        }
    }
    if (alive_.size() != n_alive_) flag("alive list size mismatch");
    for (std::uint32_t p_idx = 0; p_idx < alive_.size(); ++p_idx) {
        node_id id = alive_[p_idx];
        if (!nodes_[id].alive || pos_in_alive_[id] != p_idx) {
            flag("alive list back-pointers inconsistent");
            break;
        }
    }
    for (std::uint32_t e = 0; e < edges_.size(); ++e) {
        const EdgeRec& rec = edges_[e];
        bool ok = nodes_[rec.u].alive && nodes_[rec.v].alive &&
                  rec.pos_u < inc_[rec.u].size() && inc_[rec.u][rec.pos_u] == e &&
                  rec.pos_v < inc_[rec.v].size() && inc_[rec.v][rec.pos_v] == e;
        if (!ok) {
            flag("edge " + std::to_string(e) + " endpoint or incidence inconsistent");
            break;
        }
    }
    std::uint64_t inc_total = 0;
    for (const auto& lst : inc_) inc_total += lst.size();
    std::uint64_t expected_ends = 0;
    for (const EdgeRec& rec : edges_) expected_ends += rec.u == rec.v ? 1 : 2;
    if (inc_total != expected_ends) flag("incidence list totals inconsistent");

    double rate = p.lambda * alive_count + p.mu * alive_count + p.alpha * s_total +
                  p.beta * edges_.size();
    if (std::abs(rate - total_rate(p)) > 1e-9 * std::max(1.0, rate))
        flag("total event rate drifted beyond 1e-9 relative");
    return rep;
}

RunResult run(const ModelParams& p, const SocialIndexDistribution& dist, StopRule stop,
              RngStream rng, std::uint64_t max_restarts) {
    require_valid(p, /*need_gamma=*/false);
    if (stop.kind == StopRule::Kind::population && stop.threshold < 1)
        throw InvalidConfig("population stop rule needs a target of at least 1");

    for (std::uint64_t attempt = 0;; ++attempt) {
        if (attempt > max_restarts) throw TooManyRestarts(attempt);
        RngStream r = rng.derive(attempt);
        SimState st = SimState::initial(dist, r);
        std::uint64_t events = 0;
        bool extinct = false;
        while (true) {
            if (stop.kind == StopRule::Kind::population &&
                st.n_alive() >= static_cast<std::uint64_t>(stop.threshold))
                break;
            if (st.n_alive() == 0) {
                extinct = true;
                break;
            }
            if (stop.kind == StopRule::Kind::time) {
                EventRecord ev = st.step(p, dist, r, stop.threshold);
                if (ev.type == EventRecord::Type::none) break;  // clock frozen at T
                ++events;
            } else {
                st.step(p, dist, r);
                ++events;
            }
        }
        if (extinct) continue;
        RunResult out;
        out.snapshot = st.snapshot();
        out.discarded_runs = attempt;
        out.events = events;
        out.clock = st.clock();
        return out;
    }
}

}  // namespace dynet::sim
