#include "pairlink/generators.hpp"

#include <algorithm>
#include <random>

#include "pairlink/error.hpp"

namespace pairlink {

std::vector<std::size_t> sbm_blocks(const SbmParams& params) {
  std::vector<std::size_t> blocks(params.num_nodes);
  for (std::size_t v = 0; v < params.num_nodes; ++v) blocks[v] = v * params.num_blocks / params.num_nodes;
  return blocks;
}

Graph stochastic_block_model(const SbmParams& params, Rng& rng) {
  if (params.num_blocks == 0 || params.num_blocks > params.num_nodes) {
    throw ValidationError("SBM needs 1 <= blocks <= nodes");
  }
  auto valid_p = [](double p) { return p >= 0.0 && p <= 1.0; };
  if (!valid_p(params.p_in) || !valid_p(params.p_out)) {
    throw ValidationError("SBM probabilities must lie in [0, 1]");
  }
  const auto blocks = sbm_blocks(params);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::vector<WeightedEdge> edges;
  for (NodeId u = 0; u < params.num_nodes; ++u) {
    for (NodeId v = u + 1; v < params.num_nodes; ++v) {
      const double p = blocks[u] == blocks[v] ? params.p_in : params.p_out;
      if (coin(rng) < p) edges.push_back({u, v, 1.0});
    }
  }
  return Graph(params.num_nodes, false, edges);
}

Graph barabasi_albert(std::size_t num_nodes, std::size_t edges_per_node, Rng& rng) {
  if (edges_per_node == 0 || edges_per_node + 1 > num_nodes) {
    throw ValidationError("Barabasi-Albert needs 1 <= edges_per_node < nodes");
  }
  std::vector<WeightedEdge> edges;
  // Each arc endpoint appears once per incident edge, so a uniform pick from
  // this list is a degree-proportional pick.
  std::vector<NodeId> endpoints;
  const auto seed_nodes = static_cast<NodeId>(edges_per_node + 1);
  for (NodeId u = 0; u < seed_nodes; ++u) {
    for (NodeId v = u + 1; v < seed_nodes; ++v) {
      edges.push_back({u, v, 1.0});
      endpoints.push_back(u);
      endpoints.push_back(v);
    }
  }
  for (auto v = seed_nodes; v < num_nodes; ++v) {
    std::vector<NodeId> targets;
    std::uniform_int_distribution<std::size_t> pick(0, endpoints.size() - 1);
    while (targets.size() < edges_per_node) {
      NodeId t = endpoints[pick(rng)];
      if (std::find(targets.begin(), targets.end(), t) == targets.end()) targets.push_back(t);
    }
    for (NodeId t : targets) {
      edges.push_back({v, t, 1.0});
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
  return Graph(num_nodes, false, edges);
}

}  // namespace pairlink
