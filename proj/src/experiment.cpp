#include "dynet/experiment.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "dynet/analytic.hpp"
#include "dynet/bjr.hpp"
#include "dynet/critical.hpp"
#include "dynet/errors.hpp"

namespace dynet {

std::vector<sim::RunResult> run_replicas(const ExperimentConfig& cfg) {
    if (cfg.replicas < 1) throw InvalidConfig("replicas must be >= 1");
    std::vector<sim::RunResult> results(cfg.replicas);
    unsigned hw = std::thread::hardware_concurrency();
    int n_threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(hw ? hw : 1);
    n_threads = std::min<int>(n_threads, cfg.replicas);

    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mu;
    auto worker = [&] {
        for (;;) {
            int r = next.fetch_add(1);
            if (r >= cfg.replicas) return;
            try {
                results[r] = sim::run(cfg.params, cfg.dist, cfg.stop,
                                      RngStream(cfg.seed, r), cfg.max_restarts);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
    return results;
}

PooledStats pool_stats(const std::vector<sim::RunResult>& results, double lambda) {
    PooledStats st;
    std::vector<double> ages;
    std::vector<double> replica_mean_degree, replica_fraction, replica_components;
    std::vector<const sim::Snapshot*> snaps;
    double deg_sum = 0, deg_sq_sum = 0;
    for (const auto& res : results) {
        const sim::Snapshot& snap = res.snapshot;
        snaps.push_back(&snap);
        st.nodes_total += snap.nodes.size();
        st.edge_copies_total += snap.edge_copies;
        st.self_loop_copies += snap.self_loop_copies;
        st.multi_edge_copies += snap.multi_edge_copies;
        st.discarded_total += res.discarded_runs;
        replica_mean_degree.push_back(snap.mean_degree());
        for (const auto& n : snap.nodes) {
            ages.push_back(n.age);
            deg_sum += n.degree;
            deg_sq_sum += static_cast<double>(n.degree) * n.degree;
            if (n.degree >= st.degree_hist.size()) st.degree_hist.resize(n.degree + 1, 0);
            ++st.degree_hist[n.degree];
        }
        auto comp = graphstats::largest_component(snap);
        replica_fraction.push_back(comp.largest_fraction);
        replica_components.push_back(static_cast<double>(comp.component_count));
    }
    auto mean_se = [](const std::vector<double>& xs) {
        double m = 0;
        for (double x : xs) m += x;
        m /= xs.size();
        if (xs.size() < 2) return std::pair<double, double>{m, 0.0};
        double v = 0;
        for (double x : xs) v += (x - m) * (x - m);
        v /= (xs.size() - 1.0);
        return std::pair<double, double>{m, std::sqrt(v / xs.size())};
    };
    st.mean_degree = 2.0 * static_cast<double>(st.edge_copies_total) / st.nodes_total;
    st.mean_degree_se = mean_se(replica_mean_degree).second;
    double dmean = deg_sum / st.nodes_total;
    st.degree_variance = deg_sq_sum / st.nodes_total - dmean * dmean;
    st.age_ks = graphstats::ks_statistic_exp(std::move(ages), lambda);
    st.age_ks_critical = graphstats::ks_critical(static_cast<double>(st.nodes_total), 0.01);
    st.age_ks_pass = st.age_ks < st.age_ks_critical;
    try {
        st.pairs = graphstats::edge_pair_stats_pooled(snaps);
    } catch (const TooFewEdges&) {
        st.pairs = {};
    }
    auto [fm, fs] = mean_se(replica_fraction);
    st.largest_fraction_mean = fm;
    st.largest_fraction_se = fs;
    st.component_count_mean = mean_se(replica_components).first;
    return st;
}

json stats_to_json(const PooledStats& st) {
    json j;
    j["nodes"] = st.nodes_total;
    j["edge_copies"] = st.edge_copies_total;
    j["mean_degree"] = st.mean_degree;
    j["mean_degree_se"] = st.mean_degree_se;
    j["degree_variance"] = st.degree_variance;
    j["degree_hist"] = st.degree_hist;
    j["components"] = {{"largest_fraction_mean", st.largest_fraction_mean},
                       {"largest_fraction_se", st.largest_fraction_se},
                       {"count_mean", st.component_count_mean}};
    json assort;
    if (st.pairs.r.has_value()) {
        assort["r"] = *st.pairs.r;
        assort["se"] = st.pairs.se_r;
    } else {
        assort["r"] = nullptr;
        assort["se"] = nullptr;
    }
    assort["pairs"] = st.pairs.pairs;
    j["assortativity"] = assort;
    j["age_ks"] = {{"statistic", st.age_ks},
                   {"critical_0.01", st.age_ks_critical},
                   {"pass", st.age_ks_pass}};
    j["self_loop_copies"] = st.self_loop_copies;
    j["multi_edge_copies"] = st.multi_edge_copies;
    j["discarded_runs"] = st.discarded_total;
    return j;
}

namespace {

json stop_to_json(const sim::StopRule& stop) {
    json j;
    j["kind"] = stop.kind == sim::StopRule::Kind::population ? "population" : "time";
    j["threshold"] = stop.threshold;
    return j;
}

}  // namespace

json simulate_report(const ExperimentConfig& cfg, const std::vector<sim::RunResult>& results) {
    json j;
    j["schema"] = 1;
    j["config"] = config_to_json(cfg.params, cfg.dist);
    j["config"]["seed"] = cfg.seed;
    j["config"]["stop"] = stop_to_json(cfg.stop);
    j["config"]["replicas"] = cfg.replicas;
    j["stats"] = stats_to_json(pool_stats(results, cfg.params.lambda));
    return j;
}

namespace {

json version_theory(const ModelParams& base, const SocialIndexDistribution& dist,
                    Version version, unsigned k_max) {
    ModelParams p = base;
    p.version = version;
    json j;
    auto dm = analytic::degree_mean_var(p, dist);
    j["degree_mean"] = dm.mean;
    j["degree_variance"] = dm.variance;
    j["covariance"] = analytic::covariance(p, dist);
    if (std::isfinite(dist.m3())) {
        auto em = analytic::edge_degree_moments(p, dist);
        j["edge_degree_mean"] = em.e_d1;
        j["edge_degree_sq"] = em.e_d1_sq;
        j["edge_degree_product"] = em.e_d1d2;
        j["rho"] = em.rho;
    } else {
        j["edge_degree_mean"] = nullptr;
        j["edge_degree_sq"] = nullptr;
        j["edge_degree_product"] = nullptr;
        j["rho"] = nullptr;
        j["note"] = "rho needs E[S^3] < infinity";
    }
    unsigned k = k_max ? k_max : analytic::suggested_pmf_len(p, dist);
    j["pmf"] = analytic::mixed_poisson_pmf_table(p, dist, k);
    return j;
}

}  // namespace

json theory_report(const ModelParams& p, const SocialIndexDistribution& dist, unsigned k_max) {
    require_valid(p);
    json j;
    j["schema"] = 1;
    j["params"] = config_to_json(p, dist);
    j["moments"] = {{"m1", dist.m1()},
                    {"m2", std::isfinite(dist.m2()) ? json(dist.m2()) : json(nullptr)},
                    {"m3", std::isfinite(dist.m3()) ? json(dist.m3()) : json(nullptr)}};
    j["assortativity_threshold"] = analytic::assortativity_threshold(p);
    if (std::isfinite(dist.m2()))
        j["m2_over_m1_sq"] = dist.m2() / (dist.m1() * dist.m1());
    j["U"] = version_theory(p, dist, Version::U, k_max);
    j["P"] = version_theory(p, dist, Version::P, k_max);
    return j;
}

json compare_report(const ExperimentConfig& cfg, int grid_age, int grid_s) {
    require_valid(cfg.params);
    auto results = run_replicas(cfg);
    PooledStats st = pool_stats(results, cfg.params.lambda);

    json rows = json::array();
    auto add_row = [&rows](const std::string& name, double theory, double mc, double se) {
        json r;
        r["quantity"] = name;
        r["theory"] = theory;
        r["mc"] = mc;
        r["stderr"] = se;
        r["z"] = se > 0 ? (mc - theory) / se : 0.0;
        rows.push_back(r);
    };

    auto dm = analytic::degree_mean_var(cfg.params, cfg.dist);
    add_row("mean_degree", dm.mean, st.mean_degree,
            st.mean_degree_se > 0 ? st.mean_degree_se
                                  : std::sqrt(dm.variance / st.nodes_total));

    if (std::isfinite(cfg.dist.m3()) && st.pairs.r.has_value()) {
        auto em = analytic::edge_degree_moments(cfg.params, cfg.dist);
        add_row("degree_correlation", em.rho, *st.pairs.r, st.pairs.se_r);
        add_row("edge_degree_covariance", em.covariance, st.pairs.covariance,
                st.pairs.se_cov);
    }

    auto kern = bjr::Kernel::model(cfg.params, cfg.dist);
    auto grid = bjr::TypeGrid::build(kern, grid_age, grid_s);
    auto fp = bjr::solve_rho(kern, grid);
    add_row("largest_fraction", fp.rho_kappa, st.largest_fraction_mean,
            st.largest_fraction_se);

    unsigned k = analytic::suggested_pmf_len(cfg.params, cfg.dist);
    auto pmf = analytic::mixed_poisson_pmf_table(cfg.params, cfg.dist, k);
    double tv = graphstats::total_variation(st.degree_hist, pmf);

    json j;
    j["schema"] = 1;
    j["config"] = config_to_json(cfg.params, cfg.dist);
    j["config"]["seed"] = cfg.seed;
    j["config"]["stop"] = stop_to_json(cfg.stop);
    j["config"]["replicas"] = cfg.replicas;
    j["rows"] = rows;
    j["degree_tv"] = tv;
    j["age_ks"] = {{"statistic", st.age_ks},
                   {"critical_0.01", st.age_ks_critical},
                   {"pass", st.age_ks_pass}};
    j["stats"] = stats_to_json(st);
    return j;
}

}  // namespace dynet
