#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pairlink/graph.hpp"
#include "pairlink/rng.hpp"

namespace pairlink {

enum class SamplerStrategy { global, local };

// Which endpoint of a positive pair a local sampler keeps. `coin` flips a
// fair coin per draw (the undirected default); `source` always keeps src.
enum class AnchorRule { source, coin };

struct SamplerConfig {
  SamplerStrategy strategy = SamplerStrategy::global;
  std::size_t num_neg = 1;
  /// Exponent on node degree for local sampling; 0 means uniform.
  double degree_power = 0.0;
  AnchorRule anchor = AnchorRule::coin;

  void validate() const;
};

std::string to_string(SamplerStrategy s);
SamplerStrategy parse_sampler_strategy(const std::string& s);
std::string to_string(AnchorRule a);
AnchorRule parse_anchor_rule(const std::string& s);

/// Attempts allowed per requested draw before a sampler gives up.
inline constexpr std::size_t kRejectionBudget = 1000;

// m ordered pairs drawn uniformly from V x V minus observed arcs and
// self-pairs, by rejection. Repeats across draws are allowed.
std::vector<NodePair> sample_global(const Graph& g, std::size_t m, Rng& rng);

// Corrupts one endpoint of positive pairs: keeps the anchor and draws the
// other endpoint with probability proportional to degree^beta, rejecting the
// anchor itself and its observed neighbors.
class LocalSampler {
 public:
  LocalSampler(const Graph& g, double degree_power);

  NodePair sample(NodePair pos, AnchorRule anchor, Rng& rng) const;

 private:
  const Graph* graph_;
  std::vector<double> weights_;
  double total_weight_ = 0.0;
  mutable std::discrete_distribution<std::size_t> pick_;
};

NodePair sample_local(const Graph& g, NodePair pos, Rng& rng, double degree_power,
                      AnchorRule anchor = AnchorRule::coin);

/// Training unit consumed by the objectives; indices point into the batch's
/// positive and negative lists.
struct TrainingPair {
  NodePair pos;
  NodePair neg;
  double gamma = 1.0;
  std::size_t pos_index = 0;
  std::size_t neg_index = 0;
};

// Identity pairing plus (num_neg - 1) pairings under independent uniform
// permutations of the negatives: m * num_neg pairs, each negative used exactly
// num_neg times. `gammas` (optional) are the positives' margins.
std::vector<TrainingPair> share_negatives(std::span<const NodePair> pos,
                                          std::span<const NodePair> neg, std::size_t num_neg,
                                          Rng& rng, std::span<const double> gammas = {});

struct WeightedPair {
  NodePair pair;
  double weight = 1.0;
};

/// Positive set with per-pair margins in (0, 1]; contains every edge of the
/// source graph with weight 1 and no duplicate pairs.
struct AugmentedEdgeSet {
  std::vector<WeightedPair> pairs;
};

// For each start node and each of `walks_per_node` walks of `walk_length`
// steps, the pair (start, node at step s) joins the set with weight 1/s.
// Original edges keep weight 1; a pair seen more than once keeps its largest
// weight; self-pairs are dropped. Undirected pairs are stored as (min, max).
AugmentedEdgeSet walk_augment(const Graph& g, std::size_t walk_length, Rng& rng,
                              std::size_t walks_per_node = 1);

}  // namespace pairlink
