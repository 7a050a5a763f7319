#include "pairlink/evaluation.hpp"

#include "pairlink/error.hpp"
#include "pairlink/sampling.hpp"

namespace pairlink {

std::string to_string(EvalMode mode) { return mode == EvalMode::shared ? "shared" : "per_positive"; }

EvalMode parse_eval_mode(const std::string& s) {
  if (s == "shared") return EvalMode::shared;
  if (s == "per_positive") return EvalMode::per_positive;
  throw ConfigError("unknown eval_mode '" + s + "' (shared, per_positive)");
}

EvalCandidates make_eval_candidates(const Graph& exclusion, std::span<const NodePair> positives,
                                    const EvalProtocol& protocol, std::uint64_t seed) {
  if (protocol.num_neg == 0) throw ValidationError("evaluation needs at least one negative");
  EvalCandidates c;
  c.seed = seed;
  c.positives.assign(positives.begin(), positives.end());
  Rng rng(seed);
  if (protocol.mode == EvalMode::shared) {
    c.shared = sample_global(exclusion, protocol.num_neg, rng);
  } else {
    LocalSampler corrupt(exclusion, 0.0);
    c.per_positive.reserve(positives.size());
    for (const auto& p : positives) {
      std::vector<NodePair> list;
      list.reserve(protocol.num_neg);
      for (std::size_t i = 0; i < protocol.num_neg; ++i) {
        list.push_back(corrupt.sample(p, AnchorRule::source, rng));
      }
      c.per_positive.push_back(std::move(list));
    }
  }
  return c;
}

RankingResult rank_candidates(const PairScorer& scorer, const EvalCandidates& candidates) {
  RankingResult r;
  r.pos_scores = scorer(candidates.positives);
  if (candidates.per_positive.empty()) {
    r.shared_neg_scores = scorer(candidates.shared);
  } else {
    // One flat batch, then split back per positive.
    std::vector<NodePair> flat;
    for (const auto& list : candidates.per_positive) flat.insert(flat.end(), list.begin(), list.end());
    auto scores = scorer(flat);
    r.per_pos_neg_scores.emplace();
    std::size_t at = 0;
    for (const auto& list : candidates.per_positive) {
      r.per_pos_neg_scores->emplace_back(scores.begin() + static_cast<std::ptrdiff_t>(at),
                                         scores.begin() + static_cast<std::ptrdiff_t>(at + list.size()));
      at += list.size();
    }
  }
  return r;
}

MetricReport metrics_from_ranking(const RankingResult& ranking, const EvalProtocol& protocol) {
  MetricReport report;
  report.metrics["auc"] = ranking_auc(ranking);
  if (ranking.shared_neg_scores) {
    for (std::size_t k : protocol.hits_k) {
      if (k <= ranking.shared_neg_scores->size()) {
        report.metrics["hits@" + std::to_string(k)] = hits_at_k(ranking, k);
      }
    }
  } else {
    report.metrics["mrr"] = mrr(ranking);
  }
  return report;
}

MetricReport evaluate_model(const LinkModel& model, ParameterStore& store,
                            const EvalCandidates& candidates, const EvalProtocol& protocol) {
  const Matrix encoded = model.embed(store);
  auto scorer = [&](std::span<const NodePair> pairs) { return model.score_with(encoded, store, pairs); };
  MetricReport report = metrics_from_ranking(rank_candidates(scorer, candidates), protocol);
  report.seed = candidates.seed;
  return report;
}

}  // namespace pairlink
