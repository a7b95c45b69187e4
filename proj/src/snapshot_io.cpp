#include "dynet/snapshot_io.hpp"

#include <charconv>
#include <fstream>

#include "dynet/errors.hpp"

namespace dynet::sim {

std::string format_double(double x) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out << content;
    if (!out) throw Error("write failed: " + path);
}

void write_nodes_csv(const std::string& path, const Snapshot& snap) {
    std::string buf = "id,age,social_index,degree\n";
    for (const auto& n : snap.nodes) {
        buf += std::to_string(n.id);
        buf += ',';
        buf += format_double(n.age);
        buf += ',';
        buf += format_double(n.social_index);
        buf += ',';
        buf += std::to_string(n.degree);
        buf += '\n';
    }
    write_text(path, buf);
}

void write_edges_csv(const std::string& path, const Snapshot& snap) {
    std::string buf = "id_a,id_b,multiplicity,self_loop\n";
    for (const auto& e : snap.edges) {
        buf += std::to_string(e.a);
        buf += ',';
        buf += std::to_string(e.b);
        buf += ',';
        buf += std::to_string(e.multiplicity);
        buf += ',';
        buf += e.self_loop ? '1' : '0';
        buf += '\n';
    }
    write_text(path, buf);
}

json sidecar_json(const ModelParams& p, const SocialIndexDistribution& dist,
                  std::uint64_t seed, std::uint64_t stream, const RunResult& result) {
    json j;
    j["schema"] = 1;
    j["params"] = config_to_json(p, dist);
    j["seed"] = seed;
    j["stream"] = stream;
    j["discarded_runs"] = result.discarded_runs;
    j["events"] = result.events;
    j["clock"] = result.clock;
    j["nodes"] = result.snapshot.nodes.size();
    j["edge_copies"] = result.snapshot.edge_copies;
    j["self_loop_copies"] = result.snapshot.self_loop_copies;
    j["multi_edge_copies"] = result.snapshot.multi_edge_copies;
    return j;
}

}  // namespace dynet::sim
