#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dynet/errors.hpp"
#include "dynet/graphstats.hpp"
#include "dynet/sim.hpp"

using namespace dynet;
using namespace dynet::sim;

namespace {
const auto kConst1 = SocialIndexDistribution::constant(1.0);
}

TEST_CASE("only positive rate fires: birth with probability 1") {
    ModelParams p{1.0, 0.0, 0.0, 1.0, Version::U};  // M = 0, so beta contributes nothing
    RngStream rng(1, 0);
    for (int trial = 0; trial < 200; ++trial) {
        SimState st = SimState::initial(kConst1, rng);
        EventRecord ev = st.step(p, kConst1, rng);
        CHECK(ev.type == EventRecord::Type::birth);
        CHECK(st.n_alive() == 2);
    }
}

TEST_CASE("P-version creator is sampled proportionally to social index") {
    RngStream rng(2, 0);
    SimState st = SimState::initial(kConst1, rng);  // node 0, s = 1
    ModelParams birth_only{1.0, 0.0, 0.0, 0.0, Version::U};
    auto s3 = SocialIndexDistribution::constant(3.0);
    EventRecord ev = st.step(birth_only, s3, rng);  // node 1, s = 3
    REQUIRE(ev.type == EventRecord::Type::birth);
    REQUIRE(st.sum_social() == doctest::Approx(4.0));

    ModelParams edges_only{0.0, 0.0, 1.0, 0.0, Version::P};
    int by_node1 = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        EventRecord e = st.step(edges_only, kConst1, rng);
        REQUIRE(e.type == EventRecord::Type::edge_create);
        if (e.a == 1) ++by_node1;
    }
    CHECK(std::abs(by_node1 / double(n) - 0.75) < 0.01);
    CHECK(st.edge_count() == static_cast<std::uint64_t>(n));
    CHECK(st.audit(edges_only).ok());
}

TEST_CASE("Yule process mean: E[N(t)] = e^{lambda t}") {
    ModelParams p{1.0, 0.0, 0.0, 0.0, Version::U};
    const int replicas = 10000;
    const double t = 2.0;
    double sum = 0, sum_sq = 0;
    for (int r = 0; r < replicas; ++r) {
        auto res = run(p, kConst1, StopRule::time(t), RngStream(3, r));
        double n = static_cast<double>(res.snapshot.n());
        sum += n;
        sum_sq += n * n;
    }
    double mean = sum / replicas;
    double se = std::sqrt((sum_sq / replicas - mean * mean) / replicas);
    CHECK(std::abs(mean - std::exp(t)) < 3 * se);
}

TEST_CASE("no-edge run: exact node count, zero edges, snapshot consistency") {
    ModelParams p{1.0, 0.0, 0.0, 0.0, Version::U};
    auto res = run(p, kConst1, StopRule::population(100), RngStream(4, 0));
    CHECK(res.snapshot.n() == 100);
    CHECK(res.snapshot.edges.empty());
    CHECK(res.discarded_runs == 0);
    for (const auto& row : res.snapshot.nodes) CHECK(row.degree == 0);
}

TEST_CASE("discard fraction approximates the extinction probability mu/lambda") {
    ModelParams p{1.0, 0.5, 0.0, 0.0, Version::U};
    std::uint64_t attempts = 0, discards = 0;
    int call = 0;
    while (attempts < 10000) {
        auto res = run(p, kConst1, StopRule::population(100), RngStream(5, call++), 100000);
        attempts += res.discarded_runs + 1;
        discards += res.discarded_runs;
    }
    double frac = static_cast<double>(discards) / attempts;
    CHECK(std::abs(frac - 0.5) < 0.02);
}

TEST_CASE("mean degree approaches 2 alpha mu_S / (lambda + beta + mu)") {
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::U};
    double pooled_ends = 0, pooled_nodes = 0;
    for (int r = 0; r < 2; ++r) {
        auto res = run(p, kConst1, StopRule::population(10000), RngStream(6, r));
        pooled_ends += 2.0 * res.snapshot.edge_copies;
        pooled_nodes += res.snapshot.n();
    }
    CHECK(std::abs(pooled_ends / pooled_nodes - 1.0) < 0.06);
}

TEST_CASE("degree sum equals twice the edge ends, self-loops counted twice") {
    ModelParams p{1.0, 0.3, 1.5, 0.5, Version::P};
    auto res = run(p, kConst1, StopRule::population(2000), RngStream(7, 0));
    std::uint64_t deg_sum = 0;
    for (const auto& n : res.snapshot.nodes) deg_sum += n.degree;
    CHECK(deg_sum == 2 * res.snapshot.edge_copies);
    std::uint64_t copies = 0;
    for (const auto& e : res.snapshot.edges) copies += e.multiplicity;
    CHECK(copies == res.snapshot.edge_copies);
}

TEST_CASE("time stop freezes the clock exactly at the target") {
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::U};
    auto res = run(p, kConst1, StopRule::time(5.0), RngStream(8, 1));
    CHECK(res.clock == 5.0);
    CHECK(res.snapshot.t_obs == 5.0);
    for (const auto& n : res.snapshot.nodes) {
        CHECK(n.age >= 0.0);
        CHECK(n.age <= 5.0);
    }
}

TEST_CASE("audit: clean after a million mixed events, detects injected fault") {
    ModelParams p{1.0, 0.9, 1.0, 1.0, Version::P};
    auto tp = SocialIndexDistribution::two_point(0.5, 2.5, 0.6);
    RngStream rng(9, 0);
    SimState st = SimState::initial(tp, rng);
    CHECK(st.audit(p).ok());
    std::uint64_t events = 0;
    while (events < 1'000'000) {
        if (st.n_alive() == 0) st = SimState::initial(tp, rng);
        st.step(p, tp, rng);
        ++events;
    }
    auto rep = st.audit(p);
    if (!rep.ok()) {
        for (auto& m : rep.mismatches) MESSAGE(m);
    }
    CHECK(rep.ok());
    st.corrupt_sum_social(0.5);
    auto bad = st.audit(p);
    CHECK_FALSE(bad.ok());
    CHECK(bad.mismatches.size() >= 1);
}

TEST_CASE("identical seeds give identical runs") {
    ModelParams p{1.0, 0.3, 1.0, 0.7, Version::P};
    auto a = run(p, kConst1, StopRule::population(500), RngStream(10, 3));
    auto b = run(p, kConst1, StopRule::population(500), RngStream(10, 3));
    REQUIRE(a.snapshot.nodes.size() == b.snapshot.nodes.size());
    REQUIRE(a.snapshot.edges.size() == b.snapshot.edges.size());
    CHECK(a.clock == b.clock);
    for (std::size_t i = 0; i < a.snapshot.edges.size(); ++i) {
        CHECK(a.snapshot.edges[i].a == b.snapshot.edges[i].a);
        CHECK(a.snapshot.edges[i].b == b.snapshot.edges[i].b);
        CHECK(a.snapshot.edges[i].multiplicity == b.snapshot.edges[i].multiplicity);
    }
}

TEST_CASE("extinct state refuses to step") {
    ModelParams p{1.0, 0.9999, 0.0, 0.0, Version::U};
    RngStream rng(11, 0);
    SimState st = SimState::initial(kConst1, rng);
    ModelParams death_only{0.0, 1.0, 0.0, 0.0, Version::U};
    st.step(death_only, kConst1, rng);
    CHECK(st.n_alive() == 0);
    CHECK_THROWS_AS(st.step(p, kConst1, rng), Extinct);
}

TEST_CASE("too many restarts raises with the attempt count") {
    // lambda barely above mu and a huge target: extinction dominates
    ModelParams p{1.0, 0.999, 0.0, 0.0, Version::U};
    CHECK_THROWS_AS(run(p, kConst1, StopRule::population(100000), RngStream(12, 0), 5),
                    TooManyRestarts);
}

TEST_CASE("age distribution passes a KS test against Exp(lambda)") {
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::U};
    auto res = run(p, kConst1, StopRule::population(10000), RngStream(13, 2));
    double d = graphstats::age_ks_statistic(res.snapshot, p.lambda);
    CHECK(d < graphstats::ks_critical(static_cast<double>(res.snapshot.n()), 0.01));
}

TEST_CASE("U and P degree histograms are indistinguishable for constant S") {
    ModelParams pu{1.0, 0.2, 1.0, 0.8, Version::U};
    ModelParams pp = pu;
    pp.version = Version::P;
    auto ru = run(pu, kConst1, StopRule::population(10000), RngStream(14, 0));
    auto rp = run(pp, kConst1, StopRule::population(10000), RngStream(14, 1));
    std::vector<double> du, dp;
    for (const auto& n : ru.snapshot.nodes) du.push_back(n.degree);
    for (const auto& n : rp.snapshot.nodes) dp.push_back(n.degree);
    double d = graphstats::ks_two_sample(du, dp);
    double n_eff = du.size() * double(dp.size()) / (du.size() + double(dp.size()));
    CHECK(d < graphstats::ks_critical(n_eff, 0.01));
}

TEST_CASE("self-loop and multi-edge fractions shrink as N grows") {
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::P};
    auto median_fraction = [&](std::uint64_t n_target, int stream0) {
        std::vector<double> self_frac, multi_frac;
        for (int r = 0; r < 3; ++r) {
            auto res = run(p, kConst1, StopRule::population(n_target),
                           RngStream(15, stream0 + r));
            double m = static_cast<double>(res.snapshot.edge_copies);
            self_frac.push_back(res.snapshot.self_loop_copies / m);
            multi_frac.push_back(res.snapshot.multi_edge_copies / m);
        }
        std::sort(self_frac.begin(), self_frac.end());
        std::sort(multi_frac.begin(), multi_frac.end());
        return std::pair<double, double>{self_frac[1], multi_frac[1]};
    };
    auto [s3, m3] = median_fraction(1000, 0);
    auto [s4, m4] = median_fraction(10000, 10);
    auto [s5, m5] = median_fraction(100000, 20);
    CHECK(s3 >= s4);
    CHECK(s4 >= s5);
    CHECK(m3 >= m4);
    CHECK(m4 >= m5);
}
