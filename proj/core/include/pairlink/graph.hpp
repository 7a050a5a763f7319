#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pairlink/rng.hpp"
#include "pairlink/tensor.hpp"

namespace pairlink {

using NodeId = std::uint32_t;

struct NodePair {
  NodeId src = 0;
  NodeId dst = 0;

  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

/// Input record for graph construction; duplicates and self-loops are allowed
/// here and resolved by the Graph constructor.
struct WeightedEdge {
  NodeId src = 0;
  NodeId dst = 0;
  double weight = 1.0;
};

// Immutable sparse graph in CSR form. Undirected graphs store every edge as
// two arcs. Rows are sorted and duplicate-free, there are no self-loops, and
// weights (when present) are strictly positive, one per stored arc.
class Graph {
 public:
  Graph() = default;

  // Builds from raw edges: self-loops are dropped with a warning, duplicates
  // collapse with summed weights (undirected duplicates are matched in either
  // orientation). `weighted` controls whether weights are retained.
  Graph(std::size_t num_nodes, bool directed, std::span<const WeightedEdge> edges,
        bool weighted = false, std::vector<std::string> tokens = {});

  std::size_t num_nodes() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  bool directed() const noexcept { return directed_; }
  bool weighted() const noexcept { return !weights_.empty(); }

  /// Stored arcs; twice the edge count for undirected graphs.
  std::size_t num_arcs() const noexcept { return targets_.size(); }
  std::size_t num_edges() const noexcept { return directed_ ? targets_.size() : targets_.size() / 2; }

  std::span<const NodeId> neighbors(NodeId v) const;
  /// Empty span for unweighted graphs.
  std::span<const double> neighbor_weights(NodeId v) const;
  std::size_t degree(NodeId v) const;
  bool has_edge(NodeId u, NodeId v) const;
  /// 1.0 for unweighted graphs; 0.0 when the arc is absent.
  double edge_weight(NodeId u, NodeId v) const;

  /// Each edge once: (u < v) for undirected graphs, every arc for directed ones.
  std::vector<NodePair> edges() const;

  /// Original string id per node; synthesized as decimal ids when not given.
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

  void check_node(NodeId v) const;

 private:
  bool directed_ = false;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> weights_;
  std::vector<std::string> tokens_;
};

/// Dense per-node input features; row count equals the graph's node count.
struct NodeFeatures {
  Matrix values;

  std::size_t dim() const noexcept { return values.cols(); }
};

/// Token -> dense id map, assigned in first-seen order.
class TokenMap {
 public:
  NodeId intern(const std::string& token);
  std::optional<NodeId> find(const std::string& token) const;
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }

 private:
  std::unordered_map<std::string, NodeId> ids_;
  std::vector<std::string> tokens_;
};

struct EdgeRecords {
  std::vector<WeightedEdge> edges;
  bool has_explicit_weights = false;
};

/// Parses `src dst [weight]` lines; `#` starts a comment line.
EdgeRecords parse_edge_records(std::istream& in, TokenMap& tokens);

/// Graph from edge records. Weights are retained when the input carried any
/// explicit weight or any duplicate edge collapsed into a weight above 1.
Graph build_graph(const EdgeRecords& records, const TokenMap& tokens, bool directed);

Graph load_edge_list(const std::string& path, bool directed);
Graph read_edge_list(std::istream& in, bool directed);

/// Reads `token v1 ... vdim` lines. Nodes missing from the file get zero rows
/// (with a warning); tokens unknown to the graph are skipped with a warning.
NodeFeatures load_features(const std::string& path, const Graph& g);
NodeFeatures read_features(std::istream& in, const Graph& g);

void write_edge_list(std::ostream& out, const Graph& g);

/// Nodes within `hops` of v, v included. Sorted ascending.
std::vector<NodeId> neighborhood(const Graph& g, NodeId v, std::size_t hops);

/// Unweighted shortest-path length; nullopt when v is unreachable from u.
std::optional<std::size_t> distance(const Graph& g, NodeId u, NodeId v);

/// Induced subgraph plus the map from subgraph ids back to original ids.
struct Subgraph {
  Graph graph;
  std::vector<NodeId> original_ids;
};

/// Induced subgraph over the union of the two endpoints' h-hop neighborhoods.
Subgraph pair_subgraph(const Graph& g, NodeId u, NodeId v, std::size_t hops);

/// Uniform random walk of up to `length` steps, start excluded. Stops early at
/// a node without out-neighbors.
std::vector<NodeId> random_walk(const Graph& g, NodeId start, std::size_t length, Rng& rng);

std::vector<std::size_t> degrees(const Graph& g);

}  // namespace pairlink
