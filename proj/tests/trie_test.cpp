#include "loom/trie.hpp"

#include <gtest/gtest.h>

#include "support/oracles.hpp"

namespace loom {
namespace {

PrimeConfig default_cfg() { return make_prime_config({"a", "b", "c"}, 251, 1); }

const TrieNode* node_for(const Trie& trie, const LabelledGraph& g) {
  return trie.find(graph_signature(trie.prime_config(), g));
}

TEST(AddQuery, SingleEdgeQuery) {
  Trie trie(default_cfg());
  LabelledGraph q;
  q.add_edge(Edge(1, "a", 2, "b"));
  trie.add_query(q, 1.0);
  EXPECT_EQ(trie.node_count(), 2u);  // root + the edge
  const TrieNode* n = node_for(trie, q);
  ASSERT_NE(n, nullptr);
  EXPECT_DOUBLE_EQ(trie.support(*n), 1.0);
  EXPECT_EQ(n->depth, 1u);
}

TEST(AddQuery, RejectsBadQueries) {
  Trie trie(default_cfg());
  LabelledGraph empty;
  EXPECT_THROW(trie.add_query(empty, 1.0), error);
  LabelledGraph disconnected;
  disconnected.add_edge(Edge(1, "a", 2, "b"));
  disconnected.add_edge(Edge(3, "a", 4, "b"));
  EXPECT_THROW(trie.add_query(disconnected, 1.0), error);
  LabelledGraph ok;
  ok.add_edge(Edge(1, "a", 2, "b"));
  EXPECT_THROW(trie.add_query(ok, 0.0), error);
}

// the 3-edge a-b-a-b path can be grown from both of its 2-edge sub-paths
TEST(AddQuery, PathAbabHasTwoParents) {
  Trie trie(default_cfg());
  for (const auto& [q, freq] : testing::example_workload().queries) {
    trie.add_query(q.graph, freq);
  }
  LabelledGraph abab;  // path a-b-a-b
  abab.add_edge(Edge(1, "a", 2, "b"));
  abab.add_edge(Edge(2, "b", 3, "a"));
  abab.add_edge(Edge(3, "a", 4, "b"));
  const TrieNode* n = node_for(trie, abab);
  ASSERT_NE(n, nullptr);
  EXPECT_EQ(n->parents.size(), 2u);

  LabelledGraph aba;  // a-b-a
  aba.add_edge(Edge(1, "a", 2, "b"));
  aba.add_edge(Edge(2, "b", 3, "a"));
  LabelledGraph bab;  // b-a-b
  bab.add_edge(Edge(1, "b", 2, "a"));
  bab.add_edge(Edge(2, "a", 3, "b"));
  const TrieNode* p1 = node_for(trie, aba);
  const TrieNode* p2 = node_for(trie, bab);
  ASSERT_NE(p1, nullptr);
  ASSERT_NE(p2, nullptr);
  EXPECT_TRUE(n->has_parent(p1));
  EXPECT_TRUE(n->has_parent(p2));

  // the 4-cycle itself can only be closed from the 3-edge path
  const TrieNode* cycle = node_for(trie, testing::four_cycle_abab());
  ASSERT_NE(cycle, nullptr);
  EXPECT_EQ(cycle->parents.size(), 1u);
  EXPECT_TRUE(cycle->has_parent(n));
}

// node set equals brute-force enumeration of connected sub-graphs,
// deduplicated by the exact oracle
TEST(AddQuery, NodeSetMatchesOracleEnumeration) {
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const LabelledGraph q =
        testing::random_connected_graph(rng, 1 + rng.below(4), {"a", "b", "c"});
    const PrimeConfig cfg = make_prime_config({"a", "b", "c"}, 251, 1000 + trial);
    Trie trie(cfg);
    trie.add_query(q, 1.0);

    const std::vector<Edge> edges(q.edges().begin(), q.edges().end());
    std::map<std::string, LabelledGraph> classes;
    for (const auto& subset : testing::connected_edge_subsets(edges, edges.size())) {
      const LabelledGraph sub = testing::graph_of_match_edges(subset);
      classes.emplace(testing::canonical_form(sub), sub);
    }
    ASSERT_EQ(trie.node_count() - 1, classes.size());
    for (const auto& [canon, sub] : classes) {
      EXPECT_NE(node_for(trie, sub), nullptr);
    }
  }
}

// merging across queries: the workload trie's nodes are exactly the union of
// the per-query sub-graph classes, collapsed by signature
TEST(AddQuery, WorkloadNodeSetIsUnionOfQueryClasses) {
  Rng rng(808);
  for (int trial = 0; trial < 10; ++trial) {
    Trie trie(make_prime_config({"a", "b", "c"}, 251, 2000 + trial));
    std::set<std::vector<Factor>> expected;
    std::size_t max_edges = 0;
    for (int i = 0; i < 3; ++i) {
      const LabelledGraph q =
          testing::random_connected_graph(rng, 1 + rng.below(4), {"a", "b", "c"});
      trie.add_query(q, 1.0 + static_cast<double>(rng.below(3)));
      max_edges = std::max(max_edges, q.edge_count());
      const std::vector<Edge> edges(q.edges().begin(), q.edges().end());
      for (const auto& subset : testing::connected_edge_subsets(edges, edges.size())) {
        expected.insert(
            graph_signature(trie.prime_config(), testing::graph_of_match_edges(subset))
                .expanded());
      }
    }
    std::set<std::vector<Factor>> got;
    std::size_t max_depth = 0;
    for (const auto& node : trie.nodes()) {
      if (node->depth == 0) continue;
      got.insert(node->signature.expanded());
      max_depth = std::max<std::size_t>(max_depth, node->depth);
    }
    EXPECT_EQ(got, expected);
    EXPECT_EQ(max_depth, max_edges);  // trie depth = largest query edge count
  }
}

// densest pattern at the default size bound: the 10-edge complete graph on 5
// vertices; the per-edge-set expansion memo keeps this tractable
TEST(AddQuery, DenseQueryAtEdgeBound) {
  Trie trie(default_cfg());
  LabelledGraph k5;
  for (VertexId u = 0; u < 5; ++u) {
    for (VertexId v = u + 1; v < 5; ++v) {
      k5.add_edge(Edge(u, u % 2 ? "b" : "a", v, v % 2 ? "b" : "a"));
    }
  }
  trie.add_query(k5, 1.0);
  const std::vector<Edge> edges(k5.edges().begin(), k5.edges().end());
  std::set<std::vector<Factor>> expected;
  for (const auto& subset : testing::connected_edge_subsets(edges, edges.size())) {
    expected.insert(
        graph_signature(trie.prime_config(), testing::graph_of_match_edges(subset)).expanded());
  }
  EXPECT_EQ(trie.node_count() - 1, expected.size());
  std::size_t max_depth = 0;
  for (const auto& node : trie.nodes()) max_depth = std::max<std::size_t>(max_depth, node->depth);
  EXPECT_EQ(max_depth, 10u);
}

TEST(AddQuery, IdempotentNodeSetDoublingWeight) {
  Trie trie(default_cfg());
  const LabelledGraph q = testing::four_cycle_abab();
  trie.add_query(q, 2.0);
  const std::size_t nodes = trie.node_count();
  const double support_before = trie.support(*node_for(trie, q));
  trie.add_query(q, 2.0);
  EXPECT_EQ(trie.node_count(), nodes);
  EXPECT_DOUBLE_EQ(trie.total_weight(), 4.0);
  EXPECT_DOUBLE_EQ(trie.support(*node_for(trie, q)), support_before);
}

TEST(Invariants, AntiMonotoneSupportAndSignatureConsistency) {
  Rng rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    Trie trie(make_prime_config({"a", "b", "c"}, 251, trial));
    for (int i = 0; i < 4; ++i) {
      trie.add_query(testing::random_connected_graph(rng, 1 + rng.below(4), {"a", "b", "c"}),
                     1.0 + static_cast<double>(rng.below(3)));
    }
    for (const auto& node : trie.nodes()) {
      for (const auto& [delta, child] : node->children) {
        EXPECT_LE(trie.support(*child), trie.support(*node) + 1e-12);
        EXPECT_TRUE(child->signature == node->signature.united(delta));
      }
      if (node->depth > 0) {
        EXPECT_TRUE(graph_signature(trie.prime_config(), node->exemplar) == node->signature);
        EXPECT_EQ(node->exemplar.edge_count(), node->depth);
      }
    }
  }
}

TEST(MotifFilter, MaximalThresholdKeepsCommonSubgraphs) {
  Trie trie(default_cfg());
  for (const auto& [q, freq] : testing::example_workload().queries) {
    trie.add_query(q.graph, freq);
  }
  const Trie motifs = trie.motif_filter(1.0);
  // only sub-graphs common to all three queries survive: the a-b edge
  EXPECT_EQ(motifs.node_count(), 2u);
  LabelledGraph ab;
  ab.add_edge(Edge(1, "a", 2, "b"));
  EXPECT_NE(node_for(motifs, ab), nullptr);
}

TEST(MotifFilter, DownwardClosedAndThresholded) {
  Rng rng(55);
  Trie trie(default_cfg());
  for (int i = 0; i < 5; ++i) {
    trie.add_query(testing::random_connected_graph(rng, 1 + rng.below(4), {"a", "b", "c"}),
                   1.0 + static_cast<double>(rng.below(4)));
  }
  const double threshold = 0.4;
  const Trie motifs = trie.motif_filter(threshold);
  std::set<std::vector<Factor>> kept;
  for (const auto& node : motifs.nodes()) {
    if (node->depth == 0) continue;
    kept.insert(node->signature.expanded());
    EXPECT_GE(motifs.support(*node), threshold);
    EXPECT_FALSE(node->parents.empty());  // downward closure keeps every parent
  }
  for (const auto& node : trie.nodes()) {
    if (node->depth == 0) continue;
    const bool survives = trie.support(*node) >= threshold;
    EXPECT_EQ(kept.count(node->signature.expanded()) != 0, survives);
  }
}

TEST(FindChild, WorkedGrowth) {
  Trie trie(testing::worked_example_config());
  trie.add_query(testing::four_cycle_abab(), 1.0);
  LabelledGraph ab;
  ab.add_edge(Edge(1, "a", 2, "b"));
  const TrieNode* edge_node = node_for(trie, ab);
  ASSERT_NE(edge_node, nullptr);

  // delta for the adjacent a-b edge at the b end: {7, 4, 1}
  const std::vector<Edge> base{Edge(1, "a", 2, "b")};
  const FactorMultiset delta =
      delta_factors(trie.prime_config(), Edge(2, "b", 3, "a"), std::span<const Edge>(base));
  const TrieNode* child = Trie::find_child(*edge_node, delta);
  ASSERT_NE(child, nullptr);
  LabelledGraph aba;
  aba.add_edge(Edge(1, "a", 2, "b"));
  aba.add_edge(Edge(2, "b", 3, "a"));
  EXPECT_TRUE(child->signature == graph_signature(trie.prime_config(), aba));

  EXPECT_EQ(Trie::find_child(*edge_node, FactorMultiset{}), nullptr);

  // a delta for a label pair that never occurs in the workload
  FactorMultiset foreign;
  foreign.add_edge_factor(2);
  foreign.add_degree_factor(3);
  foreign.add_degree_factor(9);
  EXPECT_EQ(Trie::find_child(*edge_node, foreign), nullptr);
}

TEST(SingleEdgeMotif, FindsDepthOneNodes) {
  Trie trie(default_cfg());
  for (const auto& [q, freq] : testing::matcher_workload().queries) {
    trie.add_query(q.graph, freq);
  }
  const Trie motifs = trie.motif_filter(0.4);
  EXPECT_NE(motifs.single_edge_motif(Edge(10, "a", 11, "b")), nullptr);
  EXPECT_NE(motifs.single_edge_motif(Edge(10, "b", 11, "c")), nullptr);
  EXPECT_EQ(motifs.single_edge_motif(Edge(10, "a", 11, "c")), nullptr);
}

// depth-1 membership agrees with an oracle scan over the workload's edges
TEST(SingleEdgeMotif, AgreesWithOracleScan) {
  Rng rng(99);
  const std::vector<Label> alphabet{"a", "b", "c"};
  for (int trial = 0; trial < 10; ++trial) {
    Trie trie(make_prime_config({"a", "b", "c"}, 251, 500 + trial));
    Workload wl;
    for (int i = 0; i < 3; ++i) {
      wl.queries.push_back(
          {{"q" + std::to_string(i),
            testing::random_connected_graph(rng, 1 + rng.below(4), alphabet)},
           1.0});
      trie.add_query(wl.queries.back().first.graph, 1.0);
    }
    const Trie motifs = trie.motif_filter(0.4);
    for (const Label& la : alphabet) {
      for (const Label& lb : alphabet) {
        if (la == lb) continue;
        const Edge probe(100, la, 101, lb);
        double weight = 0;
        for (const auto& [q, freq] : wl.queries) {
          bool contains = false;
          for (const Edge& e : q.graph.edges()) {
            if ((e.label_u() == la && e.label_v() == lb) ||
                (e.label_u() == lb && e.label_v() == la)) {
              contains = true;
            }
          }
          if (contains) weight += freq;
        }
        const bool expected = weight / trie.total_weight() >= 0.4;
        EXPECT_EQ(motifs.single_edge_motif(probe) != nullptr, expected)
            << la << "-" << lb << " trial " << trial;
      }
    }
  }
}

}  // namespace
}  // namespace loom
