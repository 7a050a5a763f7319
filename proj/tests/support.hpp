#pragma once

#include <random>
#include <vector>

#include "pairlink/graph.hpp"
#include "pairlink/log.hpp"
#include "pairlink/rng.hpp"

namespace pairlink::testing {

// Erdos-Renyi style graph; every unordered pair is an edge with probability p.
inline Graph random_graph(std::size_t n, double p, Rng& rng, bool directed = false) {
  std::bernoulli_distribution coin(p);
  std::vector<WeightedEdge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = directed ? 0 : u + 1; v < n; ++v) {
      if (u != v && coin(rng)) edges.push_back({u, v, 1.0});
    }
  }
  return Graph(n, directed, edges);
}

inline Graph graph_of(std::size_t n, std::initializer_list<std::pair<NodeId, NodeId>> pairs,
                      bool directed = false) {
  std::vector<WeightedEdge> edges;
  for (auto [u, v] : pairs) edges.push_back({u, v, 1.0});
  return Graph(n, directed, edges);
}

// Collects warnings for the lifetime of the guard.
class CaptureWarnings {
 public:
  CaptureWarnings() {
    previous_ = set_warning_sink([this](std::string_view m) { messages.emplace_back(m); });
  }
  ~CaptureWarnings() { set_warning_sink(previous_); }
  CaptureWarnings(const CaptureWarnings&) = delete;
  CaptureWarnings& operator=(const CaptureWarnings&) = delete;

  std::vector<std::string> messages;

 private:
  WarningSink previous_;
};

}  // namespace pairlink::testing
