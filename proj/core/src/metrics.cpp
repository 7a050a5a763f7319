#include "pairlink/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include <nlohmann/json.hpp>

#include "pairlink/error.hpp"
#include "pairlink/objectives.hpp"

namespace pairlink {
namespace {

bool finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void RankingResult::validate() const {
  if (shared_neg_scores.has_value() == per_pos_neg_scores.has_value()) {
    throw ValidationError("ranking result needs exactly one negative layout");
  }
  bool ok = finite(pos_scores);
  if (shared_neg_scores) ok = ok && finite(*shared_neg_scores);
  if (per_pos_neg_scores) {
    if (per_pos_neg_scores->size() != pos_scores.size()) {
      throw ValidationError("per-positive candidate lists must match the positive count");
    }
    for (const auto& l : *per_pos_neg_scores) ok = ok && finite(l);
  }
  if (!ok) throw ValidationError("ranking result holds non-finite scores");
}

double hits_at_k(const RankingResult& r, std::size_t k) {
  r.validate();
  if (!r.shared_neg_scores) throw ValidationError("hits_at_k needs a shared negative set");
  if (k == 0) throw ValidationError("hits_at_k needs k >= 1");
  const auto& neg = *r.shared_neg_scores;
  if (neg.size() < k) {
    throw ValidationError("hits_at_k: " + std::to_string(neg.size()) + " negatives, fewer than k=" +
                          std::to_string(k));
  }
  if (r.pos_scores.empty()) throw UndefinedMetricError("hits_at_k needs positives");
  std::vector<double> top(neg);
  std::nth_element(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(k - 1), top.end(),
                   std::greater<>());
  const double threshold = top[k - 1];
  const auto hits = std::count_if(r.pos_scores.begin(), r.pos_scores.end(),
                                  [threshold](double s) { return s > threshold; });
  return static_cast<double>(hits) / static_cast<double>(r.pos_scores.size());
}

double mrr(const RankingResult& r) {
  r.validate();
  if (!r.per_pos_neg_scores) throw ValidationError("mrr needs per-positive candidate lists");
  if (r.pos_scores.empty()) throw UndefinedMetricError("mrr needs positives");
  double total = 0.0;
  for (std::size_t i = 0; i < r.pos_scores.size(); ++i) {
    const auto& negs = (*r.per_pos_neg_scores)[i];
    if (negs.empty()) throw ValidationError("positive " + std::to_string(i) + " has no candidates");
    const double p = r.pos_scores[i];
    std::size_t above = 0, tied = 0;
    for (double s : negs) {
      above += s > p;
      tied += s == p;
    }
    const double rank = 1.0 + static_cast<double>(above) + 0.5 * static_cast<double>(tied);
    total += 1.0 / rank;
  }
  return total / static_cast<double>(r.pos_scores.size());
}

double ranking_auc(const RankingResult& r) {
  r.validate();
  if (r.shared_neg_scores) return empirical_auc(r.pos_scores, *r.shared_neg_scores);
  std::vector<double> pooled;
  for (const auto& l : *r.per_pos_neg_scores) pooled.insert(pooled.end(), l.begin(), l.end());
  return empirical_auc(r.pos_scores, pooled);
}

std::string MetricReport::to_json() const {
  nlohmann::ordered_json j;
  for (const auto& [name, value] : metrics) j[name] = value;
  j["seed"] = seed;
  j["config_hash"] = config_hash;
  j["epoch"] = epoch;
  return j.dump();
}

MetricReport MetricReport::from_json(const std::string& text) {
  MetricReport r;
  try {
    auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw FormatError("metric report must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (it.key() == "seed") {
        r.seed = it.value().get<std::uint64_t>();
      } else if (it.key() == "config_hash") {
        r.config_hash = it.value().get<std::string>();
      } else if (it.key() == "epoch") {
        r.epoch = it.value().get<std::size_t>();
      } else {
        r.metrics[it.key()] = it.value().get<double>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad metric report: ") + e.what());
  }
  return r;
}

double MetricReport::at(const std::string& name) const {
  auto it = metrics.find(name);
  if (it == metrics.end()) throw IndexError("report has no metric '" + name + "'");
  return it->second;
}

}  // namespace pairlink
