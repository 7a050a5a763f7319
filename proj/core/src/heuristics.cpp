#include "pairlink/heuristics.hpp"

#include <cmath>

#include "pairlink/error.hpp"
#include "pairlink/log.hpp"

namespace pairlink {

std::string to_string(HeuristicKind kind) {
  switch (kind) {
    case HeuristicKind::cn: return "cn";
    case HeuristicKind::jaccard: return "jaccard";
    case HeuristicKind::pa: return "pa";
    case HeuristicKind::aa: return "aa";
    case HeuristicKind::ra: return "ra";
  }
  return "?";
}

HeuristicKind parse_heuristic_kind(const std::string& s) {
  if (s == "cn") return HeuristicKind::cn;
  if (s == "jaccard") return HeuristicKind::jaccard;
  if (s == "pa") return HeuristicKind::pa;
  if (s == "aa") return HeuristicKind::aa;
  if (s == "ra") return HeuristicKind::ra;
  throw ConfigError("unknown heuristic '" + s + "' (cn, jaccard, pa, aa, ra)");
}

double heuristic_score(const Graph& g, NodeId u, NodeId v, HeuristicKind kind) {
  g.check_node(u);
  g.check_node(v);
  if (u == v) throw ValidationError("heuristic_score needs two distinct nodes");
  auto nu = g.neighbors(u);
  auto nv = g.neighbors(v);

  if (kind == HeuristicKind::pa) {
    return static_cast<double>(nu.size()) * static_cast<double>(nv.size());
  }

  // Merge walk over the sorted rows.
  std::size_t common = 0;
  double sum = 0.0;
  std::size_t i = 0, j = 0;
  while (i < nu.size() && j < nv.size()) {
    if (nu[i] < nv[j]) {
      ++i;
    } else if (nv[j] < nu[i]) {
      ++j;
    } else {
      const NodeId w = nu[i];
      ++common;
      const auto dw = static_cast<double>(g.degree(w));
      if (kind == HeuristicKind::ra) {
        sum += 1.0 / dw;
      } else if (kind == HeuristicKind::aa) {
        if (g.degree(w) <= 1) {
          warn("adamic-adar: skipping common neighbor " + std::to_string(w) + " of degree " +
               std::to_string(g.degree(w)));
        } else {
          sum += 1.0 / std::log(dw);
        }
      }
      ++i;
      ++j;
    }
  }
  switch (kind) {
    case HeuristicKind::cn: return static_cast<double>(common);
    case HeuristicKind::jaccard: {
      const std::size_t uni = nu.size() + nv.size() - common;
      return uni == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(uni);
    }
    case HeuristicKind::aa:
    case HeuristicKind::ra: return sum;
    case HeuristicKind::pa: break;
  }
  return 0.0;
}

namespace {

std::vector<double> score_all(const Graph& g, std::span<const NodePair> pairs, HeuristicKind kind) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const auto& p : pairs) out.push_back(heuristic_score(g, p.src, p.dst, kind));
  return out;
}

}  // namespace

RankingResult heuristic_rank(const Graph& g, std::span<const NodePair> pos,
                             std::span<const NodePair> neg, HeuristicKind kind) {
  if (pos.empty() || neg.empty()) throw ValidationError("heuristic_rank needs candidates on both sides");
  RankingResult r;
  r.pos_scores = score_all(g, pos, kind);
  r.shared_neg_scores = score_all(g, neg, kind);
  return r;
}

RankingResult heuristic_rank(const Graph& g, std::span<const NodePair> pos,
                             std::span<const std::vector<NodePair>> per_pos_neg,
                             HeuristicKind kind) {
  if (pos.empty()) throw ValidationError("heuristic_rank needs positives");
  if (per_pos_neg.size() != pos.size()) throw ValidationError("one candidate list per positive required");
  RankingResult r;
  r.pos_scores = score_all(g, pos, kind);
  r.per_pos_neg_scores.emplace();
  for (const auto& list : per_pos_neg) r.per_pos_neg_scores->push_back(score_all(g, list, kind));
  return r;
}

}  // namespace pairlink
