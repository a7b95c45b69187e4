#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dynet/experiment.hpp"
#include "dynet/snapshot_io.hpp"

using namespace dynet;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

sim::RunResult golden_run() {
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::P};
    auto dist = SocialIndexDistribution::two_point(1.0, 2.0, 0.5);
    return sim::run(p, dist, sim::StopRule::population(12), RngStream(7, 0));
}

}  // namespace

TEST_CASE("format_double is shortest round-trip") {
    CHECK(sim::format_double(0.6) == "0.6");
    CHECK(sim::format_double(1.0) == "1");
    double x = 0.1 + 0.2;
    CHECK(std::stod(sim::format_double(x)) == x);
    CHECK(sim::format_double(1e300) == "1e+300");
}

TEST_CASE("snapshot CSVs match the golden files byte for byte") {
    auto res = golden_run();
    fs::create_directories("io_test_out");
    sim::write_nodes_csv("io_test_out/nodes.csv", res.snapshot);
    sim::write_edges_csv("io_test_out/edges.csv", res.snapshot);
    CHECK(slurp("io_test_out/nodes.csv") == slurp(std::string(GOLDEN_DIR) + "/nodes.csv"));
    CHECK(slurp("io_test_out/edges.csv") == slurp(std::string(GOLDEN_DIR) + "/edges.csv"));
}

TEST_CASE("nodes CSV carries the header and one row per alive node") {
    auto res = golden_run();
    sim::write_nodes_csv("io_test_out/nodes2.csv", res.snapshot);
    std::istringstream in(slurp("io_test_out/nodes2.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "id,age,social_index,degree");
    std::size_t rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == res.snapshot.n());
}

TEST_CASE("sidecar json records the run provenance") {
    auto res = golden_run();
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::P};
    auto dist = SocialIndexDistribution::two_point(1.0, 2.0, 0.5);
    json side = sim::sidecar_json(p, dist, 7, 0, res);
    CHECK(side["schema"] == 1);
    CHECK(side["seed"] == 7);
    CHECK(side["params"]["lambda"] == 1.0);
    CHECK(side["params"]["social_index"]["kind"] == "two_point");
    CHECK(side["clock"].get<double>() == res.clock);
    CHECK(side["discarded_runs"].get<std::uint64_t>() == res.discarded_runs);
}

TEST_CASE("simulate report json is deterministic") {
    ExperimentConfig cfg;
    cfg.params = {1.0, 0.2, 1.0, 0.8, Version::U};
    cfg.dist = SocialIndexDistribution::constant(1.0);
    cfg.seed = 11;
    cfg.stop = sim::StopRule::population(500);
    cfg.replicas = 4;
    auto r1 = run_replicas(cfg);
    auto r2 = run_replicas(cfg);
    CHECK(simulate_report(cfg, r1).dump() == simulate_report(cfg, r2).dump());
}

TEST_CASE("theory report carries both versions and degenerate S makes them equal") {
    ModelParams p{1.0, 0.2, 1.0, 0.8, Version::U};
    json rep = theory_report(p, SocialIndexDistribution::constant(1.0), 12);
    CHECK(rep["U"]["degree_mean"] == rep["P"]["degree_mean"]);
    CHECK(rep["U"]["rho"].get<double>() ==
          doctest::Approx(rep["P"]["rho"].get<double>()).epsilon(1e-12));
    double pmf_sum = 0;
    for (double v : rep["U"]["pmf"]) pmf_sum += v;
    CHECK(pmf_sum > 0.999);
    // distinguishable with a spread-out S
    json rep2 = theory_report(p, SocialIndexDistribution::two_point(1.0, 2.0, 0.5), 12);
    CHECK(rep2["U"]["degree_variance"].get<double>() <
          rep2["P"]["degree_variance"].get<double>());
}

#ifdef DYNET_BIN
namespace {
int run_cli(const std::string& args, const std::string& out_file) {
    std::string cmd = std::string(DYNET_BIN) + " " + args + " > " + out_file + " 2>/dev/null";
    return std::system(cmd.c_str());
}
}  // namespace

TEST_CASE("cli: same command twice gives byte-identical output") {
    REQUIRE(run_cli("theory --lambda 1 --mu 0.2 --beta 0.8 --alpha 1 --s const:1", "th1.json") == 0);
    REQUIRE(run_cli("theory --lambda 1 --mu 0.2 --beta 0.8 --alpha 1 --s const:1", "th2.json") == 0);
    CHECK(slurp("th1.json") == slurp("th2.json"));

    REQUIRE(run_cli("simulate --lambda 1 --mu 0.2 --beta 0.8 --alpha 1 --s const:1 "
                    "--stop-n 300 --replicas 2 --seed 7 --out sim_a",
                    "sim_a.json") == 0);
    REQUIRE(run_cli("simulate --lambda 1 --mu 0.2 --beta 0.8 --alpha 1 --s const:1 "
                    "--stop-n 300 --replicas 2 --seed 7 --out sim_b",
                    "sim_b.json") == 0);
    CHECK(slurp("sim_a/report.json") == slurp("sim_b/report.json"));
    CHECK(slurp("sim_a/nodes_r0.csv") == slurp("sim_b/nodes_r0.csv"));
    CHECK(slurp("sim_a/edges_r1.csv") == slurp("sim_b/edges_r1.csv"));
}

TEST_CASE("cli: exit codes classify failures") {
    // subcritical population: invalid config
    CHECK(run_cli("theory --lambda 0.5 --mu 1.0", "euc.json") / 256 == 2);
    // zero gamma: analytics unavailable
    CHECK(run_cli("theory --lambda 1 --mu 0 --beta 0", "ezg.json") / 256 == 2);
    // zero gamma is legal dynamics: simulate accepts it
    CHECK(run_cli("simulate --lambda 1 --mu 0 --beta 0 --alpha 0 --stop-n 50 --out sim_zg",
                  "zg.json") == 0);
    // unknown flag: parse error
    CHECK(run_cli("theory --bogus 1", "ebogus.json") / 256 == 2);
    // restart cap: lambda barely above mu
    CHECK(run_cli("simulate --lambda 1 --mu 0.999 --alpha 0 --beta 1 --stop-n 100000 "
                  "--max-restarts 3 --replicas 1 --out sim_tmr",
                  "tmr.json") / 256 == 4);
}

TEST_CASE("cli: config file with flag overrides") {
    json cfg = {{"lambda", 2.0},   {"mu", 0.5},      {"alpha", 1.5},
                {"beta", 0.5},     {"version", "P"}, {"seed", 3},
                {"social_index", {{"kind", "exponential"}, {"rate", 1.0}}}};
    sim::write_text("cfg.json", cfg.dump());
    REQUIRE(run_cli("theory --config cfg.json --alpha 2.0", "thcfg.json") == 0);
    json out = json::parse(slurp("thcfg.json"));
    CHECK(out["params"]["lambda"] == 2.0);
    CHECK(out["params"]["alpha"] == 2.0);  // flag wins
    CHECK(out["params"]["social_index"]["kind"] == "exponential");
}

TEST_CASE("cli: phase and rho emit the advertised keys") {
    REQUIRE(run_cli("phase --lambda 1 --mu 0.2 --beta 0.8 --alpha 1.2 --s const:1 "
                    "--grid-age 80 --grid-s 1",
                    "ph.json") == 0);
    json ph = json::parse(slurp("ph.json"));
    for (const char* k : {"c_cr", "u", "R", "verdict", "rho_kappa"}) CHECK(ph.contains(k));
    CHECK(ph["verdict"] == "Giant");

    REQUIRE(run_cli("rho --lambda 1 --mu 0.2 --beta 0.8 --alpha 1.2 --s const:1 "
                    "--grid-age 80 --grid-s 1",
                    "rho.json") == 0);
    json rho = json::parse(slurp("rho.json"));
    for (const char* k : {"rho_kappa", "norm_estimate", "grid_sizes", "residual"})
        CHECK(rho.contains(k));
}

TEST_CASE("cli: sweep verdict flips exactly once along an alpha ladder") {
    REQUIRE(run_cli("sweep --param alpha --from 0.2 --to 1.6 --steps 8 "
                    "--lambda 1 --mu 0.2 --beta 0.8 --s const:1",
                    "sw.csv") == 0);
    std::istringstream in(slurp("sw.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "param,R,verdict");
    int flips = 0;
    std::string prev;
    while (std::getline(in, line)) {
        auto pos = line.rfind(',');
        std::string verdict = line.substr(pos + 1);
        if (!prev.empty() && verdict != prev) ++flips;
        prev = verdict;
    }
    CHECK(flips == 1);
}
#endif
