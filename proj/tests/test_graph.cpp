#include <algorithm>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

#include "pairlink/error.hpp"
#include "pairlink/graph.hpp"
#include "support.hpp"

using namespace pairlink;
using pairlink::testing::graph_of;
using pairlink::testing::random_graph;

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

std::vector<std::vector<std::size_t>> floyd_warshall(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kInf));
  for (NodeId v = 0; v < n; ++v) {
    d[v][v] = 0;
    for (NodeId u : g.neighbors(v)) d[v][u] = 1;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] != kInf && d[k][j] != kInf) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

Graph parse(const std::string& text, bool directed = false) {
  std::istringstream in(text);
  return read_edge_list(in, directed);
}

}  // namespace

TEST(EdgeList, Triangle) {
  auto g = parse("a b\nb c\na c\n");
  EXPECT_EQ(g.num_nodes(), 3u);
  EXPECT_EQ(g.num_edges(), 3u);
  for (NodeId v = 0; v < 3; ++v) EXPECT_EQ(g.degree(v), 2u);
  EXPECT_EQ(g.tokens(), (std::vector<std::string>{"a", "b", "c"}));
  EXPECT_FALSE(g.weighted());
}

TEST(EdgeList, DuplicatesSumWeights) {
  auto g = parse("a b\nb c\na c\na b\n");
  EXPECT_EQ(g.num_edges(), 3u);
  EXPECT_TRUE(g.weighted());
  EXPECT_DOUBLE_EQ(g.edge_weight(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(g.edge_weight(1, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.edge_weight(1, 2), 1.0);
  // Reverse orientation also collapses on undirected input.
  auto h = parse("x y 0.5\ny x 0.25\n");
  EXPECT_EQ(h.num_edges(), 1u);
  EXPECT_DOUBLE_EQ(h.edge_weight(0, 1), 0.75);
}

TEST(EdgeList, ErrorsCarryLineNumbers) {
  try {
    parse("# header\na b\na\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse("a b x\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  EXPECT_THROW(parse("a b 0\n"), ValidationError);
  EXPECT_THROW(parse("a b -1\n"), ValidationError);
}

TEST(EdgeList, SelfLoopsDroppedWithWarning) {
  pairlink::testing::CaptureWarnings warnings;
  auto g = parse("a a\na b\n");
  EXPECT_EQ(g.num_edges(), 1u);
  EXPECT_FALSE(g.has_edge(0, 0));
  EXPECT_FALSE(warnings.messages.empty());
}

TEST(EdgeList, DirectedKeepsOrientation) {
  auto g = parse("a b\nb c\n", true);
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_FALSE(g.has_edge(1, 0));
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(EdgeList, WriteThenReadRoundTrips) {
  Rng rng(1);
  auto g = random_graph(20, 0.2, rng);
  std::stringstream buf;
  write_edge_list(buf, g);
  auto h = read_edge_list(buf, false);
  EXPECT_EQ(h.num_edges(), g.num_edges());
}

TEST(Features, MissingNodesGetZeroRows) {
  auto g = parse("a b\nb c\n");
  pairlink::testing::CaptureWarnings warnings;
  std::istringstream in("a 1 2\nc 3 4\nzz 5 6\n");
  auto f = read_features(in, g);
  EXPECT_EQ(f.dim(), 2u);
  EXPECT_EQ(f.values.row(1)[0], 0.0);
  EXPECT_EQ(f.values.row(1)[1], 0.0);
  EXPECT_EQ(f.values(2, 1), 4.0);
  EXPECT_GE(warnings.messages.size(), 2u);
  std::istringstream ragged("a 1 2\nb 3\n");
  EXPECT_THROW(read_features(ragged, g), ParseError);
}

TEST(Graph, ConstructionValidates) {
  std::vector<WeightedEdge> out_of_range{{0, 5, 1.0}};
  EXPECT_THROW(Graph(3, false, out_of_range), IndexError);
  std::vector<WeightedEdge> bad_weight{{0, 1, 0.0}};
  EXPECT_THROW(Graph(3, false, bad_weight, true), ValidationError);
}

TEST(Graph, AdjacencyIsSortedSymmetricAndLoopFree) {
  Rng rng(2);
  for (int t = 0; t < 20; ++t) {
    auto g = random_graph(15, 0.3, rng);
    for (NodeId v = 0; v < g.num_nodes(); ++v) {
      auto nb = g.neighbors(v);
      EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
      EXPECT_TRUE(std::adjacent_find(nb.begin(), nb.end()) == nb.end());
      for (NodeId u : nb) {
        EXPECT_NE(u, v);
        EXPECT_TRUE(g.has_edge(u, v));
      }
    }
  }
}

TEST(Neighborhood, HandExamples) {
  auto tri = graph_of(3, {{0, 1}, {1, 2}, {0, 2}});
  EXPECT_EQ(neighborhood(tri, 0, 1), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(neighborhood(tri, 2, 0), (std::vector<NodeId>{2}));
  auto path = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(neighborhood(path, 0, 2), (std::vector<NodeId>{0, 1, 2}));
  EXPECT_THROW(neighborhood(path, 9, 1), IndexError);
}

TEST(Distance, HandExamples) {
  auto path = graph_of(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(distance(path, 0, 3), 3u);
  EXPECT_EQ(distance(path, 2, 2), 0u);
  auto split = graph_of(4, {{0, 1}, {2, 3}});
  EXPECT_FALSE(distance(split, 0, 3).has_value());
  EXPECT_THROW(distance(split, 0, 4), IndexError);
}

TEST(Distance, MatchesFloydWarshallAndNeighborhoods) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 5 + t % 45;
    auto g = random_graph(n, 2.5 / static_cast<double>(n), rng);
    auto d = floyd_warshall(g);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = 0; v < n; ++v) {
        auto got = distance(g, u, v);
        if (d[u][v] == kInf) {
          EXPECT_FALSE(got.has_value());
        } else {
          EXPECT_EQ(got, d[u][v]);
        }
      }
      std::vector<NodeId> previous;
      for (std::size_t h = 0; h <= 4; ++h) {
        std::vector<NodeId> oracle;
        for (NodeId v = 0; v < n; ++v) {
          if (d[u][v] != kInf && d[u][v] <= h) oracle.push_back(v);
        }
        auto got = neighborhood(g, u, h);
        EXPECT_EQ(got, oracle);
        EXPECT_TRUE(std::includes(got.begin(), got.end(), previous.begin(), previous.end()));
        previous = got;
      }
    }
  }
}

TEST(PairSubgraph, Examples) {
  auto tri = graph_of(3, {{0, 1}, {1, 2}, {0, 2}});
  auto s = pair_subgraph(tri, 0, 1, 1);
  EXPECT_EQ(s.original_ids, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(s.graph.num_edges(), 3u);

  auto path = graph_of(5, {{0, 1}, {1, 2}, {2, 3}, {3, 4}});
  auto p = pair_subgraph(path, 0, 4, 1);
  EXPECT_EQ(p.original_ids, (std::vector<NodeId>{0, 1, 3, 4}));
  std::set<std::pair<NodeId, NodeId>> edges;
  for (const auto& e : p.graph.edges()) edges.insert({p.original_ids[e.src], p.original_ids[e.dst]});
  EXPECT_EQ(edges, (std::set<std::pair<NodeId, NodeId>>{{0, 1}, {3, 4}}));

  EXPECT_THROW(pair_subgraph(path, 2, 2, 1), ValidationError);
}

TEST(PairSubgraph, NodeSetIsUnionOfNeighborhoods) {
  Rng rng(4);
  for (int t = 0; t < 20; ++t) {
    auto g = random_graph(20, 0.12, rng);
    for (std::size_t h = 0; h <= 2; ++h) {
      auto a = neighborhood(g, 0, h);
      auto b = neighborhood(g, 7, h);
      std::vector<NodeId> both;
      std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
      auto s = pair_subgraph(g, 0, 7, h);
      EXPECT_EQ(s.original_ids, both);
      for (const auto& e : s.graph.edges()) {
        EXPECT_TRUE(g.has_edge(s.original_ids[e.src], s.original_ids[e.dst]));
      }
    }
  }
}

TEST(RandomWalk, Examples) {
  Rng rng(5);
  auto pair = graph_of(2, {{0, 1}});
  EXPECT_EQ(random_walk(pair, 0, 3, rng), (std::vector<NodeId>{1, 0, 1}));
  auto lonely = graph_of(3, {{0, 1}});
  EXPECT_TRUE(random_walk(lonely, 2, 5, rng).empty());
  EXPECT_THROW(random_walk(pair, 0, 0, rng), ValidationError);

  auto star = graph_of(4, {{0, 1}, {0, 2}, {0, 3}});
  Rng r1(77), r2(77);
  auto w1 = random_walk(star, 0, 1, r1);
  auto w2 = random_walk(star, 0, 1, r2);
  ASSERT_EQ(w1.size(), 1u);
  EXPECT_EQ(w1, w2);
  EXPECT_GE(w1[0], 1u);
}

TEST(RandomWalk, TruncatesAtSinkInDirectedGraph) {
  Rng rng(6);
  auto g = graph_of(3, {{0, 1}, {1, 2}}, true);
  EXPECT_EQ(random_walk(g, 0, 10, rng), (std::vector<NodeId>{1, 2}));
}

TEST(Degrees, Examples) {
  EXPECT_EQ(degrees(graph_of(3, {{0, 1}, {1, 2}, {0, 2}})), (std::vector<std::size_t>{2, 2, 2}));
  EXPECT_EQ(degrees(graph_of(4, {{0, 1}, {0, 2}, {0, 3}})), (std::vector<std::size_t>{3, 1, 1, 1}));
  EXPECT_EQ(degrees(Graph(2, false, {})), (std::vector<std::size_t>{0, 0}));
}
