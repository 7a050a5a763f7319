#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pairlink/graph.hpp"
#include "pairlink/metrics.hpp"
#include "pairlink/model.hpp"

namespace pairlink {

enum class EvalMode { shared, per_positive };

std::string to_string(EvalMode mode);
EvalMode parse_eval_mode(const std::string& s);

struct EvalProtocol {
  EvalMode mode = EvalMode::shared;
  /// Shared-set size, or candidates per positive in per_positive mode.
  std::size_t num_neg = 500;
  std::vector<std::size_t> hits_k = {20};
};

// Fixed candidate sets for one split. Negatives are non-edges of the graph
// passed to make_eval_candidates; per-positive lists corrupt the destination
// of each positive uniformly.
struct EvalCandidates {
  std::vector<NodePair> positives;
  std::vector<NodePair> shared;
  std::vector<std::vector<NodePair>> per_positive;
  std::uint64_t seed = 0;
};

EvalCandidates make_eval_candidates(const Graph& exclusion, std::span<const NodePair> positives,
                                    const EvalProtocol& protocol, std::uint64_t seed);

using PairScorer = std::function<std::vector<double>(std::span<const NodePair>)>;

RankingResult rank_candidates(const PairScorer& scorer, const EvalCandidates& candidates);

/// "auc" always; "hits@K" per requested K in shared mode; "mrr" in
/// per_positive mode.
MetricReport metrics_from_ranking(const RankingResult& ranking, const EvalProtocol& protocol);

/// Encodes once in eval mode and scores every candidate.
MetricReport evaluate_model(const LinkModel& model, ParameterStore& store,
                            const EvalCandidates& candidates, const EvalProtocol& protocol);

}  // namespace pairlink
