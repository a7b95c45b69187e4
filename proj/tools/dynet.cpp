#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "dynet/analytic.hpp"
#include "dynet/bjr.hpp"
#include "dynet/critical.hpp"
#include "dynet/errors.hpp"
#include "dynet/experiment.hpp"
#include "dynet/snapshot_io.hpp"

namespace fs = std::filesystem;
using namespace dynet;

namespace {

struct ParamCli {
    double lambda = 1.0, mu = 0.2, alpha = 1.0, beta = 0.8;
    std::string version = "U";
    std::string s_spec = "const:1";
    std::uint64_t seed = 1;
    std::string config_path;

    CLI::Option *o_lambda = nullptr, *o_mu = nullptr, *o_alpha = nullptr, *o_beta = nullptr,
                *o_version = nullptr, *o_s = nullptr, *o_seed = nullptr;

    void attach(CLI::App* cmd) {
        o_lambda = cmd->add_option("--lambda", lambda, "node birth rate");
        o_mu = cmd->add_option("--mu", mu, "node death rate");
        o_alpha = cmd->add_option("--alpha", alpha, "edge-creation rate per unit social index");
        o_beta = cmd->add_option("--beta", beta, "edge death rate");
        o_version = cmd->add_option("--version", version, "U or P")
                        ->check(CLI::IsMember({"U", "P"}));
        o_s = cmd->add_option("--s", s_spec,
                              "social index law, kind:args (const:1, two_point:1,2,0.5, "
                              "exp:1, pareto:2.5,1, lognormal:0,0.25)");
        o_seed = cmd->add_option("--seed", seed, "master RNG seed");
        cmd->add_option("--config", config_path, "JSON config file; flags override its values");
    }

    /// Effective config: defaults, then config file, then explicit flags.
    std::tuple<ModelParams, SocialIndexDistribution, std::uint64_t> resolve() const {
        json eff = {{"lambda", lambda}, {"mu", mu},           {"alpha", alpha},
                    {"beta", beta},     {"version", version}, {"seed", seed}};
        eff["social_index"] = to_json(dist_from_string(s_spec));
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw InvalidConfig("cannot open config file: " + config_path);
            json file;
            try {
                in >> file;
            } catch (const json::exception& e) {
                throw InvalidConfig(std::string("bad config JSON: ") + e.what());
            }
            for (auto& [k, v] : file.items()) eff[k] = v;
            if (o_lambda->count()) eff["lambda"] = lambda;
            if (o_mu->count()) eff["mu"] = mu;
            if (o_alpha->count()) eff["alpha"] = alpha;
            if (o_beta->count()) eff["beta"] = beta;
            if (o_version->count()) eff["version"] = version;
            if (o_s->count()) eff["social_index"] = to_json(dist_from_string(s_spec));
            if (o_seed->count()) eff["seed"] = seed;
        }
        ModelParams p = params_from_json(eff);
        SocialIndexDistribution d = dist_from_json(eff.at("social_index"));
        return {p, d, eff.value("seed", std::uint64_t{1})};
    }
};

void emit(const json& j, const std::string& out_path) {
    std::string text = j.dump(2);
    text += '\n';
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        sim::write_text(out_path, text);
    }
}

sim::StopRule make_stop(std::uint64_t stop_n, double stop_t, bool has_t) {
    if (has_t) return sim::StopRule::time(stop_t);
    return sim::StopRule::population(stop_n);
}

int run_simulate(const ExperimentConfig& cfg, const std::string& out_dir) {
    require_valid(cfg.params, /*need_gamma=*/false);
    fs::create_directories(out_dir);
    auto results = run_replicas(cfg);
    for (int r = 0; r < cfg.replicas; ++r) {
        std::string tag = "_r" + std::to_string(r);
        sim::write_nodes_csv(out_dir + "/nodes" + tag + ".csv", results[r].snapshot);
        sim::write_edges_csv(out_dir + "/edges" + tag + ".csv", results[r].snapshot);
        json side = sim::sidecar_json(cfg.params, cfg.dist, cfg.seed, r, results[r]);
        sim::write_text(out_dir + "/run" + tag + ".json", side.dump(2) + "\n");
    }
    json report = simulate_report(cfg, results);
    sim::write_text(out_dir + "/report.json", report.dump(2) + "\n");
    emit(report, "");
    return 0;
}

json phase_report(const ModelParams& p, const SocialIndexDistribution& dist, double margin,
                  int grid_age, int grid_s) {
    auto rep = critical::r_and_verdict(p, dist, margin);
    auto kern = bjr::Kernel::model(p, dist);
    auto grid = bjr::TypeGrid::build(kern, grid_age, grid_s);
    auto fp = bjr::solve_rho(kern, grid);
    json j;
    j["schema"] = 1;
    j["params"] = config_to_json(p, dist);
    j["c_cr"] = rep.c_cr;
    j["u"] = rep.u;
    j["growth_rate"] = rep.growth;
    j["R"] = rep.r;
    j["verdict"] = critical::to_string(rep.verdict);
    j["margin"] = rep.margin;
    j["rho_kappa"] = fp.rho_kappa;
    return j;
}

void write_density_csvs(const ModelParams& p, const SocialIndexDistribution& dist,
                        const std::string& prefix) {
    analytic::StationaryEdgeLaw law(p, dist);
    double a_max = analytic::age_cutoff(p);
    std::string buf = "age,density\n";
    for (int i = 0; i <= 400; ++i) {
        double a = a_max * i / 400.0;
        buf += sim::format_double(a);
        buf += ',';
        buf += sim::format_double(law.age_density(a));
        buf += '\n';
    }
    sim::write_text(prefix + "_stationary_age.csv", buf);
    for (Version v : {Version::U, Version::P}) {
        ModelParams pv = p;
        pv.version = v;
        unsigned k = analytic::suggested_pmf_len(pv, dist);
        auto pmf = analytic::mixed_poisson_pmf_table(pv, dist, k);
        std::string b2 = "k,probability\n";
        for (unsigned i = 0; i < pmf.size(); ++i) {
            b2 += std::to_string(i);
            b2 += ',';
            b2 += sim::format_double(pmf[i]);
            b2 += '\n';
        }
        sim::write_text(prefix + "_pmf_" + to_string(v) + ".csv", b2);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamic-population network simulator and analytic engine"};
    app.require_subcommand(1);

    // simulate
    auto* c_sim = app.add_subcommand("simulate", "run the event simulator, write snapshots");
    ParamCli p_sim;
    p_sim.attach(c_sim);
    std::uint64_t stop_n = 10000;
    double stop_t = 0;
    int replicas = 1, threads = 0;
    std::uint64_t max_restarts = 1000;
    std::string out_dir = "out";
    auto* o_stop_t = c_sim->add_option("--stop-t", stop_t, "stop at clock time");
    c_sim->add_option("--stop-n", stop_n, "stop at population size (default 10000)");
    c_sim->add_option("--replicas", replicas, "independent replicas");
    c_sim->add_option("--threads", threads, "worker threads (0 = hardware)");
    c_sim->add_option("--max-restarts", max_restarts, "extinction restart cap");
    c_sim->add_option("--out", out_dir, "output directory");

    // theory
    auto* c_th = app.add_subcommand("theory", "evaluate every closed-form quantity");
    ParamCli p_th;
    p_th.attach(c_th);
    unsigned kmax = 0;
    std::string densities_prefix, th_out;
    c_th->add_option("--kmax", kmax, "pmf table length (default mean + 10 sd)");
    c_th->add_option("--densities", densities_prefix, "write density CSV tables with this prefix");
    c_th->add_option("--out", th_out, "write the JSON here instead of stdout");

    // phase
    auto* c_ph = app.add_subcommand("phase", "giant-component criterion report");
    ParamCli p_ph;
    p_ph.attach(c_ph);
    double margin = 0.02;
    int grid_age = 200, grid_s = 200;
    std::string ph_out;
    c_ph->add_option("--margin", margin, "near-critical band around R = 1");
    c_ph->add_option("--grid-age", grid_age, "age grid nodes");
    c_ph->add_option("--grid-s", grid_s, "index grid nodes");
    c_ph->add_option("--out", ph_out, "write the JSON here instead of stdout");

    // rho
    auto* c_rho = app.add_subcommand("rho", "survival fixed point and operator norm");
    ParamCli p_rho;
    p_rho.attach(c_rho);
    int rho_grid_age = 200, rho_grid_s = 200;
    double rho_tol = 1e-10;
    std::string f_out, rho_out;
    c_rho->add_option("--grid-age", rho_grid_age, "age grid nodes");
    c_rho->add_option("--grid-s", rho_grid_s, "index grid nodes");
    c_rho->add_option("--tol", rho_tol, "fixed-point sup-norm tolerance");
    c_rho->add_option("--f-out", f_out, "write the f grid as CSV");
    c_rho->add_option("--out", rho_out, "write the JSON here instead of stdout");

    // sweep
    auto* c_sw = app.add_subcommand("sweep", "R and verdict over a parameter ladder (CSV)");
    ParamCli p_sw;
    p_sw.attach(c_sw);
    std::string sweep_param = "alpha";
    double sw_from = 0.1, sw_to = 2.0;
    int sw_steps = 10;
    bool sw_sim = false;
    std::uint64_t sw_stop_n = 10000;
    int sw_replicas = 4;
    std::string sw_out;
    c_sw->add_option("--param", sweep_param, "parameter to sweep")
        ->check(CLI::IsMember({"alpha", "lambda", "mu", "beta"}));
    c_sw->add_option("--from", sw_from, "first value");
    c_sw->add_option("--to", sw_to, "last value");
    c_sw->add_option("--steps", sw_steps, "number of grid points");
    c_sw->add_flag("--simulate", sw_sim, "also measure the largest-component fraction");
    c_sw->add_option("--stop-n", sw_stop_n, "population per simulated cell");
    c_sw->add_option("--replicas", sw_replicas, "replicas per simulated cell");
    c_sw->add_option("--out", sw_out, "write the CSV here instead of stdout");

    // compare
    auto* c_cmp = app.add_subcommand("compare", "theory vs simulation with z-scores");
    ParamCli p_cmp;
    p_cmp.attach(c_cmp);
    std::uint64_t cmp_stop_n = 20000;
    int cmp_replicas = 8, cmp_threads = 0, cmp_grid_age = 200, cmp_grid_s = 200;
    std::string cmp_out;
    c_cmp->add_option("--stop-n", cmp_stop_n, "population per replica");
    c_cmp->add_option("--replicas", cmp_replicas, "replicas");
    c_cmp->add_option("--threads", cmp_threads, "worker threads (0 = hardware)");
    c_cmp->add_option("--grid-age", cmp_grid_age, "age grid nodes");
    c_cmp->add_option("--grid-s", cmp_grid_s, "index grid nodes");
    c_cmp->add_option("--out", cmp_out, "write the JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_sim->parsed()) {
            auto [params, dist, seed] = p_sim.resolve();
            ExperimentConfig cfg{params, dist, seed,
                                 make_stop(stop_n, stop_t, o_stop_t->count() > 0), replicas,
                                 threads, max_restarts};
            return run_simulate(cfg, out_dir);
        }
        if (c_th->parsed()) {
            auto [params, dist, seed] = p_th.resolve();
            (void)seed;
            emit(theory_report(params, dist, kmax), th_out);
            if (!densities_prefix.empty()) write_density_csvs(params, dist, densities_prefix);
            return 0;
        }
        if (c_ph->parsed()) {
            auto [params, dist, seed] = p_ph.resolve();
            (void)seed;
            emit(phase_report(params, dist, margin, grid_age, grid_s), ph_out);
            return 0;
        }
        if (c_rho->parsed()) {
            auto [params, dist, seed] = p_rho.resolve();
            (void)seed;
            auto kern = bjr::Kernel::model(params, dist);
            auto grid = bjr::TypeGrid::build(kern, rho_grid_age, rho_grid_s);
            auto fp = bjr::solve_rho(kern, grid, rho_tol);
            double norm = bjr::operator_norm(kern, grid);
            json j;
            j["schema"] = 1;
            j["params"] = config_to_json(params, dist);
            j["rho_kappa"] = fp.rho_kappa;
            j["norm_estimate"] = norm;
            j["grid_sizes"] = {grid.ages.size(), grid.ss.size()};
            j["residual"] = fp.residual;
            j["iterations"] = fp.iterations;
            emit(j, rho_out);
            if (!f_out.empty()) {
                std::string buf = "age,s,f\n";
                for (std::size_t i = 0; i < grid.ages.size(); ++i)
                    for (std::size_t q = 0; q < grid.ss.size(); ++q) {
                        buf += sim::format_double(grid.ages[i]);
                        buf += ',';
                        buf += sim::format_double(grid.ss[q]);
                        buf += ',';
                        buf += sim::format_double(fp.f[i * grid.ss.size() + q]);
                        buf += '\n';
                    }
                sim::write_text(f_out, buf);
            }
            return 0;
        }
        if (c_sw->parsed()) {
            auto [params, dist, seed] = p_sw.resolve();
            std::string buf = sw_sim ? "param,R,verdict,measured_fraction\n"
                                     : "param,R,verdict\n";
            for (int i = 0; i < sw_steps; ++i) {
                double v = sw_steps == 1
                               ? sw_from
                               : sw_from + (sw_to - sw_from) * i / (sw_steps - 1.0);
                ModelParams cell = params;
                if (sweep_param == "alpha") cell.alpha = v;
                if (sweep_param == "lambda") cell.lambda = v;
                if (sweep_param == "mu") cell.mu = v;
                if (sweep_param == "beta") cell.beta = v;
                auto rep = critical::r_and_verdict(cell, dist);
                buf += sim::format_double(v);
                buf += ',';
                buf += sim::format_double(rep.r);
                buf += ',';
                buf += critical::to_string(rep.verdict);
                if (sw_sim) {
                    ExperimentConfig cfg{cell, dist, seed,
                                         sim::StopRule::population(sw_stop_n), sw_replicas};
                    auto st = pool_stats(run_replicas(cfg), cell.lambda);
                    buf += ',';
                    buf += sim::format_double(st.largest_fraction_mean);
                }
                buf += '\n';
            }
            if (sw_out.empty())
                std::fwrite(buf.data(), 1, buf.size(), stdout);
            else
                sim::write_text(sw_out, buf);
            return 0;
        }
        if (c_cmp->parsed()) {
            auto [params, dist, seed] = p_cmp.resolve();
            ExperimentConfig cfg{params, dist, seed, sim::StopRule::population(cmp_stop_n),
                                 cmp_replicas, cmp_threads};
            emit(compare_report(cfg, cmp_grid_age, cmp_grid_s), cmp_out);
            return 0;
        }
    } catch (const Error& e) {
        json err;
        err["error"] = "dynet";
        err["message"] = e.what();
        err["exit_code"] = e.exit_code();
        std::cerr << err.dump() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        json err;
        err["error"] = "internal";
        err["message"] = e.what();
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
