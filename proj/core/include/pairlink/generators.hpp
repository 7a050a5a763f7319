#pragma once

#include <cstddef>
#include <vector>

#include "pairlink/graph.hpp"
#include "pairlink/rng.hpp"

namespace pairlink {

struct SbmParams {
  std::size_t num_nodes = 400;
  std::size_t num_blocks = 2;
  double p_in = 0.10;
  double p_out = 0.01;
};

// Planted-partition SBM: node v belongs to block v * blocks / n (contiguous,
// near-equal sizes) and every unordered pair is an edge independently with
// p_in inside a block and p_out across. Undirected.
Graph stochastic_block_model(const SbmParams& params, Rng& rng);

std::vector<std::size_t> sbm_blocks(const SbmParams& params);

// Barabasi-Albert preferential attachment: starts from a clique on
// `edges_per_node + 1` nodes; each new node links to `edges_per_node`
// distinct existing nodes chosen proportionally to degree. Undirected.
Graph barabasi_albert(std::size_t num_nodes, std::size_t edges_per_node, Rng& rng);

}  // namespace pairlink
