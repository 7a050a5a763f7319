#include "pairlink/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>

#include "pairlink/error.hpp"
#include "pairlink/log.hpp"

namespace pairlink {
namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream ss(line);
  std::string f;
  while (ss >> f) fields.push_back(f);
  return fields;
}

bool is_blank_or_comment(const std::string& line) {
  auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::optional<double> parse_double(const std::string& s) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return in;
}

}  // namespace

Graph::Graph(std::size_t num_nodes, bool directed, std::span<const WeightedEdge> edges,
             bool weighted, std::vector<std::string> tokens)
    : directed_(directed), tokens_(std::move(tokens)) {
  if (tokens_.empty()) {
    tokens_.reserve(num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) tokens_.push_back(std::to_string(i));
  } else if (tokens_.size() != num_nodes) {
    throw ValidationError("token count " + std::to_string(tokens_.size()) +
                          " does not match node count " + std::to_string(num_nodes));
  }

  std::vector<WeightedEdge> arcs;
  arcs.reserve(directed ? edges.size() : 2 * edges.size());
  std::size_t self_loops = 0;
  for (const auto& e : edges) {
    if (e.src >= num_nodes || e.dst >= num_nodes) {
      throw IndexError("edge endpoint out of range for " + std::to_string(num_nodes) + " nodes");
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      throw ValidationError("edge weight must be finite and > 0");
    }
    if (e.src == e.dst) {
      ++self_loops;
      continue;
    }
    if (directed) {
      arcs.push_back(e);
    } else {
      // Canonical orientation first so that "a b" and "b a" collapse together.
      NodeId lo = std::min(e.src, e.dst), hi = std::max(e.src, e.dst);
      arcs.push_back({lo, hi, e.weight});
    }
  }
  if (self_loops > 0) warn("dropped " + std::to_string(self_loops) + " self-loop(s)");

  auto by_pair = [](const WeightedEdge& a, const WeightedEdge& b) {
    return a.src != b.src ? a.src < b.src : a.dst < b.dst;
  };
  std::sort(arcs.begin(), arcs.end(), by_pair);
  std::vector<WeightedEdge> merged;
  merged.reserve(arcs.size());
  for (const auto& a : arcs) {
    if (!merged.empty() && merged.back().src == a.src && merged.back().dst == a.dst) {
      merged.back().weight += a.weight;
    } else {
      merged.push_back(a);
    }
  }
  if (!directed) {
    const std::size_t n = merged.size();
    for (std::size_t i = 0; i < n; ++i) merged.push_back({merged[i].dst, merged[i].src, merged[i].weight});
    std::sort(merged.begin(), merged.end(), by_pair);
  }

  offsets_.assign(num_nodes + 1, 0);
  for (const auto& a : merged) ++offsets_[a.src + 1];
  for (std::size_t i = 0; i < num_nodes; ++i) offsets_[i + 1] += offsets_[i];
  targets_.reserve(merged.size());
  for (const auto& a : merged) targets_.push_back(a.dst);
  if (weighted) {
    weights_.reserve(merged.size());
    for (const auto& a : merged) weights_.push_back(a.weight);
  }
}

void Graph::check_node(NodeId v) const {
  if (v >= num_nodes()) {
    throw IndexError("node " + std::to_string(v) + " out of range for " +
                     std::to_string(num_nodes()) + " nodes");
  }
}

std::span<const NodeId> Graph::neighbors(NodeId v) const {
  check_node(v);
  return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::span<const double> Graph::neighbor_weights(NodeId v) const {
  check_node(v);
  if (weights_.empty()) return {};
  return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
}

std::size_t Graph::degree(NodeId v) const {
  check_node(v);
  return offsets_[v + 1] - offsets_[v];
}

bool Graph::has_edge(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  return std::binary_search(nb.begin(), nb.end(), v);
}

double Graph::edge_weight(NodeId u, NodeId v) const {
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return 0.0;
  if (weights_.empty()) return 1.0;
  return weights_[offsets_[u] + static_cast<std::size_t>(it - nb.begin())];
}

std::vector<NodePair> Graph::edges() const {
  std::vector<NodePair> out;
  out.reserve(num_edges());
  for (NodeId u = 0; u < num_nodes(); ++u) {
    for (NodeId v : neighbors(u)) {
      if (directed_ || u < v) out.push_back({u, v});
    }
  }
  return out;
}

NodeId TokenMap::intern(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<NodeId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

std::optional<NodeId> TokenMap::find(const std::string& token) const {
  auto it = ids_.find(token);
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

EdgeRecords parse_edge_records(std::istream& in, TokenMap& tokens) {
  EdgeRecords records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    auto fields = split_fields(line);
    if (fields.size() != 2 && fields.size() != 3) {
      throw ParseError("expected 'src dst [weight]', got " + std::to_string(fields.size()) +
                           " field(s)",
                       lineno);
    }
    double w = 1.0;
    if (fields.size() == 3) {
      auto parsed = parse_double(fields[2]);
      if (!parsed || !std::isfinite(*parsed)) {
        throw ParseError("non-numeric weight '" + fields[2] + "'", lineno);
      }
      if (*parsed <= 0.0) {
        throw ValidationError("weight must be > 0 (line " + std::to_string(lineno) + ")");
      }
      w = *parsed;
      records.has_explicit_weights = true;
    }
    NodeId s = tokens.intern(fields[0]);
    NodeId d = tokens.intern(fields[1]);
    records.edges.push_back({s, d, w});
  }
  return records;
}

Graph build_graph(const EdgeRecords& records, const TokenMap& tokens, bool directed) {
  Graph probe(tokens.size(), directed, records.edges, true, tokens.tokens());
  bool weighted = records.has_explicit_weights;
  if (!weighted) {
    for (NodeId u = 0; u < probe.num_nodes() && !weighted; ++u) {
      for (double w : probe.neighbor_weights(u)) {
        if (w != 1.0) {
          weighted = true;
          break;
        }
      }
    }
  }
  if (weighted) return probe;
  return Graph(tokens.size(), directed, records.edges, false, tokens.tokens());
}

Graph read_edge_list(std::istream& in, bool directed) {
  TokenMap tokens;
  auto records = parse_edge_records(in, tokens);
  return build_graph(records, tokens, directed);
}

Graph load_edge_list(const std::string& path, bool directed) {
  auto in = open_input(path);
  return read_edge_list(in, directed);
}

NodeFeatures read_features(std::istream& in, const Graph& g) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId i = 0; i < g.tokens().size(); ++i) ids.emplace(g.tokens()[i], i);

  std::vector<std::pair<NodeId, std::vector<double>>> rows;
  std::size_t dim = 0;
  std::size_t unknown = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank_or_comment(line)) continue;
    auto fields = split_fields(line);
    if (fields.size() < 2) throw ParseError("feature line needs a token and values", lineno);
    if (dim == 0) dim = fields.size() - 1;
    if (fields.size() - 1 != dim) {
      throw ParseError("expected " + std::to_string(dim) + " feature values, got " +
                           std::to_string(fields.size() - 1),
                       lineno);
    }
    std::vector<double> values;
    values.reserve(dim);
    for (std::size_t i = 1; i < fields.size(); ++i) {
      auto v = parse_double(fields[i]);
      if (!v || !std::isfinite(*v)) throw ParseError("bad feature value '" + fields[i] + "'", lineno);
      values.push_back(*v);
    }
    auto it = ids.find(fields[0]);
    if (it == ids.end()) {
      ++unknown;
      continue;
    }
    rows.emplace_back(it->second, std::move(values));
  }
  if (dim == 0) throw ParseError("feature file has no rows", lineno);
  if (unknown > 0) warn("skipped " + std::to_string(unknown) + " feature row(s) for unknown nodes");

  NodeFeatures feats{Matrix(g.num_nodes(), dim)};
  std::vector<bool> seen(g.num_nodes(), false);
  for (auto& [id, values] : rows) {
    std::copy(values.begin(), values.end(), feats.values.row(id).begin());
    seen[id] = true;
  }
  auto missing = static_cast<std::size_t>(std::count(seen.begin(), seen.end(), false));
  if (missing > 0) warn(std::to_string(missing) + " node(s) without features get zero vectors");
  return feats;
}

NodeFeatures load_features(const std::string& path, const Graph& g) {
  auto in = open_input(path);
  return read_features(in, g);
}

void write_edge_list(std::ostream& out, const Graph& g) {
  const auto& tok = g.tokens();
  std::ostringstream buf;
  buf.precision(17);
  for (const auto& e : g.edges()) {
    buf << tok[e.src] << ' ' << tok[e.dst];
    if (g.weighted()) buf << ' ' << g.edge_weight(e.src, e.dst);
    buf << '\n';
  }
  out << buf.str();
}

namespace {

// BFS distances from `source`, stopping at `max_hops`. SIZE_MAX = unvisited.
std::vector<std::size_t> bfs(const Graph& g, NodeId source, std::size_t max_hops) {
  constexpr auto kUnseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> dist(g.num_nodes(), kUnseen);
  std::queue<NodeId> frontier;
  dist[source] = 0;
  frontier.push(source);
  while (!frontier.empty()) {
    NodeId u = frontier.front();
    frontier.pop();
    if (dist[u] == max_hops) continue;
    for (NodeId w : g.neighbors(u)) {
      if (dist[w] == kUnseen) {
        dist[w] = dist[u] + 1;
        frontier.push(w);
      }
    }
  }
  return dist;
}

}  // namespace

std::vector<NodeId> neighborhood(const Graph& g, NodeId v, std::size_t hops) {
  g.check_node(v);
  auto dist = bfs(g, v, hops);
  std::vector<NodeId> out;
  for (NodeId u = 0; u < dist.size(); ++u) {
    if (dist[u] <= hops) out.push_back(u);
  }
  return out;
}

std::optional<std::size_t> distance(const Graph& g, NodeId u, NodeId v) {
  g.check_node(u);
  g.check_node(v);
  auto dist = bfs(g, u, static_cast<std::size_t>(-1));
  if (dist[v] == static_cast<std::size_t>(-1)) return std::nullopt;
  return dist[v];
}

Subgraph pair_subgraph(const Graph& g, NodeId u, NodeId v, std::size_t hops) {
  g.check_node(u);
  g.check_node(v);
  if (u == v) throw ValidationError("pair_subgraph needs two distinct nodes");
  auto nu = neighborhood(g, u, hops);
  auto nv = neighborhood(g, v, hops);
  Subgraph sub;
  std::set_union(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(sub.original_ids));

  std::vector<NodeId> local(g.num_nodes(), static_cast<NodeId>(-1));
  for (NodeId i = 0; i < sub.original_ids.size(); ++i) local[sub.original_ids[i]] = i;

  std::vector<WeightedEdge> edges;
  std::vector<std::string> tokens;
  for (NodeId orig : sub.original_ids) {
    tokens.push_back(g.tokens()[orig]);
    auto nb = g.neighbors(orig);
    auto wts = g.neighbor_weights(orig);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      NodeId w = nb[k];
      if (local[w] == static_cast<NodeId>(-1)) continue;
      if (!g.directed() && w < orig) continue;
      edges.push_back({local[orig], local[w], wts.empty() ? 1.0 : wts[k]});
    }
  }
  sub.graph = Graph(sub.original_ids.size(), g.directed(), edges, g.weighted(), std::move(tokens));
  return sub;
}

std::vector<NodeId> random_walk(const Graph& g, NodeId start, std::size_t length, Rng& rng) {
  g.check_node(start);
  if (length == 0) throw ValidationError("random walk length must be >= 1");
  std::vector<NodeId> walk;
  walk.reserve(length);
  NodeId cur = start;
  for (std::size_t step = 0; step < length; ++step) {
    auto nb = g.neighbors(cur);
    if (nb.empty()) break;
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    cur = nb[pick(rng)];
    walk.push_back(cur);
  }
  return walk;
}

std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> out(g.num_nodes());
  for (NodeId v = 0; v < g.num_nodes(); ++v) out[v] = g.degree(v);
  return out;
}

}  // namespace pairlink
