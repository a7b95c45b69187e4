#pragma once

#include <string>

#include "dynet/json_config.hpp"
#include "dynet/sim.hpp"

namespace dynet::sim {

/// CSV with header "id,age,social_index,degree"; doubles are shortest
/// round-trip so files are byte-stable for a given snapshot.
void write_nodes_csv(const std::string& path, const Snapshot& snap);

/// CSV with header "id_a,id_b,multiplicity,self_loop".
void write_edges_csv(const std::string& path, const Snapshot& snap);

/// Sidecar with params, seed/stream, discard count and observation clock.
json sidecar_json(const ModelParams& p, const SocialIndexDistribution& dist,
                  std::uint64_t seed, std::uint64_t stream, const RunResult& result);

void write_text(const std::string& path, const std::string& content);

/// Shortest round-trip decimal form of a double (std::to_chars).
std::string format_double(double x);

}  // namespace dynet::sim
