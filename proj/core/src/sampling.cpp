#include "pairlink/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "pairlink/error.hpp"

namespace pairlink {

std::string to_string(SamplerStrategy s) { return s == SamplerStrategy::global ? "global" : "local"; }

SamplerStrategy parse_sampler_strategy(const std::string& s) {
  if (s == "global") return SamplerStrategy::global;
  if (s == "local") return SamplerStrategy::local;
  throw ConfigError("unknown sampler '" + s + "' (global, local)");
}

std::string to_string(AnchorRule a) { return a == AnchorRule::source ? "source" : "coin"; }

AnchorRule parse_anchor_rule(const std::string& s) {
  if (s == "source") return AnchorRule::source;
  if (s == "coin") return AnchorRule::coin;
  throw ConfigError("unknown anchor rule '" + s + "' (source, coin)");
}

void SamplerConfig::validate() const {
  if (num_neg == 0) throw ConfigError("num_neg must be >= 1");
  if (!(degree_power >= 0.0) || !std::isfinite(degree_power)) {
    throw ConfigError("degree_power must be a finite value >= 0");
  }
}

std::vector<NodePair> sample_global(const Graph& g, std::size_t m, Rng& rng) {
  const std::size_t n = g.num_nodes();
  std::vector<NodePair> out;
  if (m == 0) return out;
  // Ordered non-self pairs minus stored arcs; zero means nothing to draw.
  const std::size_t candidates = n < 2 ? 0 : n * (n - 1) - g.num_arcs();
  if (candidates == 0) throw SamplingError("graph is complete: no negative pair exists");

  out.reserve(m);
  std::uniform_int_distribution<NodeId> pick(0, static_cast<NodeId>(n - 1));
  const std::size_t budget = kRejectionBudget * m;
  std::size_t attempts = 0;
  while (out.size() < m) {
    if (attempts++ >= budget) {
      throw SamplingError("global sampler exhausted " + std::to_string(budget) +
                          " attempts (graph is nearly complete)");
    }
    NodeId u = pick(rng);
    NodeId v = pick(rng);
    if (u == v || g.has_edge(u, v)) continue;
    out.push_back({u, v});
  }
  return out;
}

LocalSampler::LocalSampler(const Graph& g, double degree_power) : graph_(&g) {
  if (!(degree_power >= 0.0)) throw ValidationError("degree_power must be >= 0");
  weights_.resize(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    weights_[v] = degree_power == 0.0 ? 1.0 : std::pow(static_cast<double>(g.degree(v)), degree_power);
  }
  total_weight_ = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  if (total_weight_ > 0.0) pick_ = std::discrete_distribution<std::size_t>(weights_.begin(), weights_.end());
}

NodePair LocalSampler::sample(NodePair pos, AnchorRule anchor, Rng& rng) const {
  const Graph& g = *graph_;
  g.check_node(pos.src);
  g.check_node(pos.dst);
  bool keep_src = true;
  if (anchor == AnchorRule::coin) keep_src = std::bernoulli_distribution(0.5)(rng);
  const NodeId a = keep_src ? pos.src : pos.dst;

  // Mass left after removing the anchor and its neighbors.
  double excluded = weights_[a];
  for (NodeId w : g.neighbors(a)) excluded += weights_[w];
  if (g.degree(a) + 1 >= g.num_nodes() || !(total_weight_ - excluded > 1e-12 * total_weight_)) {
    throw SamplingError("anchor node " + std::to_string(a) + " has no eligible non-neighbor");
  }

  for (std::size_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
    const auto k = static_cast<NodeId>(pick_(rng));
    if (k == a || g.has_edge(a, k)) continue;
    return keep_src ? NodePair{a, k} : NodePair{k, a};
  }
  throw SamplingError("local sampler exhausted " + std::to_string(kRejectionBudget) +
                      " attempts for anchor " + std::to_string(a));
}

NodePair sample_local(const Graph& g, NodePair pos, Rng& rng, double degree_power,
                      AnchorRule anchor) {
  return LocalSampler(g, degree_power).sample(pos, anchor, rng);
}

std::vector<TrainingPair> share_negatives(std::span<const NodePair> pos,
                                          std::span<const NodePair> neg, std::size_t num_neg,
                                          Rng& rng, std::span<const double> gammas) {
  if (pos.size() != neg.size()) {
    throw ValidationError("share_negatives needs as many negatives as positives (" +
                          std::to_string(pos.size()) + " vs " + std::to_string(neg.size()) + ")");
  }
  if (num_neg == 0) throw ValidationError("num_neg must be >= 1");
  if (!gammas.empty() && gammas.size() != pos.size()) {
    throw ValidationError("share_negatives got " + std::to_string(gammas.size()) + " gammas for " +
                          std::to_string(pos.size()) + " positives");
  }
  const std::size_t m = pos.size();
  std::vector<TrainingPair> out;
  out.reserve(m * num_neg);
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t round = 0; round < num_neg; ++round) {
    if (round > 0) {
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
    }
    for (std::size_t i = 0; i < m; ++i) {
      out.push_back({pos[i], neg[perm[i]], gammas.empty() ? 1.0 : gammas[i], i, perm[i]});
    }
  }
  return out;
}

AugmentedEdgeSet walk_augment(const Graph& g, std::size_t walk_length, Rng& rng,
                              std::size_t walks_per_node) {
  if (walk_length == 0) throw ValidationError("walk_length must be >= 1");
  auto canonical = [&](NodeId u, NodeId v) {
    return g.directed() ? NodePair{u, v} : NodePair{std::min(u, v), std::max(u, v)};
  };
  std::map<NodePair, double> best;
  for (const auto& e : g.edges()) best[e] = 1.0;

  for (std::size_t pass = 0; pass < walks_per_node; ++pass) {
    for (NodeId start = 0; start < g.num_nodes(); ++start) {
      auto walk = random_walk(g, start, walk_length, rng);
      for (std::size_t s = 0; s < walk.size(); ++s) {
        if (walk[s] == start) continue;
        const double w = 1.0 / static_cast<double>(s + 1);
        auto [it, inserted] = best.try_emplace(canonical(start, walk[s]), w);
        if (!inserted) it->second = std::max(it->second, w);
      }
    }
  }
  AugmentedEdgeSet out;
  out.pairs.reserve(best.size());
  for (const auto& [pair, w] : best) out.pairs.push_back({pair, w});
  return out;
}

}  // namespace pairlink
