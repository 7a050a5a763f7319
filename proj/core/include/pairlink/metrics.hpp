#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pairlink {

// Scores for one evaluation: positives plus exactly one negative layout.
struct RankingResult {
  std::vector<double> pos_scores;
  /// Shared candidate set (Hits@K mode).
  std::optional<std::vector<double>> shared_neg_scores;
  /// One candidate list per positive (MRR mode).
  std::optional<std::vector<std::vector<double>>> per_pos_neg_scores;

  /// Throws ValidationError unless exactly one layout is set and all scores
  /// are finite.
  void validate() const;
};

// Fraction of positives scoring strictly above the k-th largest shared
// negative. A positive tied with that negative is a miss.
double hits_at_k(const RankingResult& r, std::size_t k);

// Mean reciprocal rank with mid-rank ties:
// rank = 1 + #{neg > pos} + 0.5 #{neg == pos}.
double mrr(const RankingResult& r);

/// Strict empirical AUC; per-positive lists are pooled into one negative set.
double ranking_auc(const RankingResult& r);

// Flat metric map plus run metadata; serialized as a flat JSON object.
struct MetricReport {
  std::map<std::string, double> metrics;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::size_t epoch = 0;

  std::string to_json() const;
  static MetricReport from_json(const std::string& text);
  double at(const std::string& name) const;
};

}  // namespace pairlink
