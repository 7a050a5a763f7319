#pragma once

#include <span>
#include <string>

#include "pairlink/graph.hpp"
#include "pairlink/metrics.hpp"

namespace pairlink {

enum class HeuristicKind { cn, jaccard, pa, aa, ra };

std::string to_string(HeuristicKind kind);
HeuristicKind parse_heuristic_kind(const std::string& s);

// Neighborhood similarity over 1-hop out-neighbor sets that exclude the node
// itself (unlike neighborhood(), whose sets include the center).
//   cn      |C|                          C = N(u) & N(v)
//   jaccard |C| / |N(u) | N(v)|          0 when the union is empty
//   pa      d(u) d(v)
//   aa      sum over C of 1 / ln d(w)    degree-1 terms skipped with a warning
//   ra      sum over C of 1 / d(w)
double heuristic_score(const Graph& g, NodeId u, NodeId v, HeuristicKind kind);

/// Scores positives against a shared negative set.
RankingResult heuristic_rank(const Graph& g, std::span<const NodePair> pos,
                             std::span<const NodePair> neg, HeuristicKind kind);

/// Scores each positive against its own candidate list.
RankingResult heuristic_rank(const Graph& g, std::span<const NodePair> pos,
                             std::span<const std::vector<NodePair>> per_pos_neg,
                             HeuristicKind kind);

}  // namespace pairlink
