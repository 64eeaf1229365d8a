#include "loom/workload.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "loom/isomorphism.hpp"
#include "support/oracles.hpp"

namespace loom {
namespace {

std::set<std::vector<std::pair<VertexId, VertexId>>> image_set(
    const LabelledGraph& G, const LabelledGraph& q, bool autos = false) {
  std::set<std::vector<std::pair<VertexId, VertexId>>> out;
  for (const Embedding& e : enumerate_embeddings(G, q, autos)) {
    out.insert(detail::edge_image(q, e.mapping));
  }
  return out;
}

TEST(EnumerateEmbeddings, WorkedQ2HasExactlyTwoMatches) {
  const LabelledGraph G = testing::example_graph();
  const LabelledGraph q2 = testing::path_abc();
  const auto images = image_set(G, q2);
  ASSERT_EQ(images.size(), 2u);
  EXPECT_TRUE(images.count({{1, 2}, {2, 3}}));
  EXPECT_TRUE(images.count({{2, 3}, {2, 6}}));
}

TEST(EnumerateEmbeddings, AbsentLabelGivesEmptySet) {
  const LabelledGraph G = testing::example_graph();
  LabelledGraph q;
  q.add_edge(Edge(0, "z", 1, "b"));
  EXPECT_TRUE(enumerate_embeddings(G, q).empty());
}

// agrees with exhaustive enumeration over all injective vertex maps
TEST(EnumerateEmbeddings, MatchesFactorialBruteForce) {
  Rng rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    const LabelledGraph G = testing::random_connected_graph(rng, 8, {"a", "b"}, 6);
    const LabelledGraph q = testing::random_connected_graph(rng, 2, {"a", "b"});

    // brute force: all injective maps query-vertices -> data-vertices
    std::vector<VertexId> gv, qv;
    for (const auto& [v, l] : G.vertices()) gv.push_back(v);
    for (const auto& [v, l] : q.vertices()) qv.push_back(v);
    std::set<std::vector<std::pair<VertexId, VertexId>>> expected;
    std::vector<std::size_t> pick(gv.size());
    std::iota(pick.begin(), pick.end(), 0);
    // iterate over permutations of positions, using the first |qv| entries
    std::sort(pick.begin(), pick.end());
    do {
      std::map<VertexId, VertexId> mapping;
      bool ok = true;
      for (std::size_t i = 0; i < qv.size() && ok; ++i) {
        const VertexId candidate = gv[pick[i]];
        if (G.label_of(candidate) != q.label_of(qv[i])) ok = false;
        mapping[qv[i]] = candidate;
      }
      if (ok) {
        for (const Edge& e : q.edges()) {
          const auto& nbrs = G.neighbors(mapping[e.u()]);
          if (!std::binary_search(nbrs.begin(), nbrs.end(), mapping[e.v()])) {
            ok = false;
            break;
          }
        }
      }
      if (ok) expected.insert(detail::edge_image(q, mapping));
      std::reverse(pick.begin() + static_cast<std::ptrdiff_t>(qv.size()), pick.end());
    } while (std::next_permutation(pick.begin(), pick.end()));

    EXPECT_EQ(image_set(G, q), expected);
  }
}

TEST(EnumerateEmbeddings, AutomorphismFlagRestoresRawCount) {
  LabelledGraph G;  // path a-b-a: the symmetric pattern maps onto it twice
  G.add_edge(Edge(1, "a", 2, "b"));
  G.add_edge(Edge(2, "b", 3, "a"));
  LabelledGraph q;
  q.add_edge(Edge(0, "a", 1, "b"));
  q.add_edge(Edge(1, "b", 2, "a"));
  EXPECT_EQ(enumerate_embeddings(G, q, false).size(), 1u);
  EXPECT_EQ(enumerate_embeddings(G, q, true).size(), 2u);
}

TEST(IsIsomorphic, DetectsRelabelledCopies) {
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const LabelledGraph g = testing::random_connected_graph(rng, 1 + rng.below(5), {"a", "b"});
    EXPECT_TRUE(is_isomorphic(g, testing::random_isomorphic_copy(rng, g)));
  }
  LabelledGraph p1, p2;
  p1.add_edge(Edge(0, "a", 1, "b"));
  p2.add_edge(Edge(0, "a", 1, "a"));
  EXPECT_FALSE(is_isomorphic(p1, p2));
}

TEST(CountIpt, WorkedPartitioningHasZeroIpt) {
  const LabelledGraph G = testing::example_graph();
  Workload wl;
  wl.queries.push_back({{"q2", testing::path_abc()}, 1.0});
  Partitioning part(2, 100.0, 1.1);
  for (const VertexId v : {1, 2, 3, 6}) part.assign(v, 0);
  for (const VertexId v : {4, 5, 7, 8}) part.assign(v, 1);
  const IptReport report = count_ipt(G, part, wl);
  EXPECT_EQ(report.per_query[0].embeddings, 2u);
  EXPECT_EQ(report.per_query[0].ipt, 0u);
  EXPECT_DOUBLE_EQ(report.total_weighted, 0.0);
}

TEST(CountIpt, SinglePartitionIsAlwaysZero) {
  const LabelledGraph G = testing::example_graph();
  Partitioning part(1, 100.0, 1.1);
  for (const auto& [v, l] : G.vertices()) part.assign(v, 0);
  const IptReport report = count_ipt(G, part, testing::example_workload());
  EXPECT_DOUBLE_EQ(report.total_weighted, 0.0);
}

TEST(CountIpt, UnassignedVertexRejected) {
  const LabelledGraph G = testing::example_graph();
  Partitioning part(2, 100.0, 1.1);
  part.assign(1, 0);
  try {
    count_ipt(G, part, testing::example_workload());
    FAIL();
  } catch (const error& ex) {
    EXPECT_EQ(ex.code(), errc::unassigned_vertex);
  }
}

// matches an independent recount straight from the raw embeddings
TEST(CountIpt, MatchesIndependentRecount) {
  Rng rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    const LabelledGraph G = testing::random_connected_graph(rng, 20, {"a", "b", "c"}, 12);
    Workload wl;
    wl.queries.push_back(
        {{"q0", testing::random_connected_graph(rng, 2, {"a", "b", "c"})}, 2.0});
    wl.queries.push_back(
        {{"q1", testing::random_connected_graph(rng, 3, {"a", "b", "c"})}, 1.0});
    Partitioning part(3, 100.0, 2.0);
    for (const auto& [v, l] : G.vertices()) {
      part.assign(v, static_cast<std::uint32_t>(rng.below(3)));
    }
    const IptReport report = count_ipt(G, part, wl);
    double expected_total = 0;
    for (const auto& [q, freq] : wl.queries) {
      std::uint64_t cuts = 0;
      for (const auto& image : image_set(G, q.graph)) {
        for (const auto& [u, v] : image) {
          if (*part.partition_of(u) != *part.partition_of(v)) ++cuts;
        }
      }
      expected_total += freq * static_cast<double>(cuts);
    }
    EXPECT_DOUBLE_EQ(report.total_weighted, expected_total);
  }
}

// ipt additivity over the workload plus invariance under index relabelling
TEST(CountIpt, AdditiveAndRelabelInvariant) {
  Rng rng(31);
  const LabelledGraph G = testing::random_connected_graph(rng, 15, {"a", "b"}, 10);
  Workload wl = testing::example_workload();
  Partitioning part(2, 100.0, 2.0);
  for (const auto& [v, l] : G.vertices()) {
    part.assign(v, static_cast<std::uint32_t>(rng.below(2)));
  }
  const IptReport whole = count_ipt(G, part, wl);
  double sum = 0;
  for (const auto& [q, freq] : wl.queries) {
    Workload solo;
    solo.queries.push_back({q, freq});
    sum += count_ipt(G, part, solo).total_weighted;
  }
  EXPECT_DOUBLE_EQ(whole.total_weighted, sum);

  Partitioning swapped(2, 100.0, 2.0);
  for (const auto& [v, l] : G.vertices()) {
    swapped.assign(v, 1 - *part.partition_of(v));
  }
  EXPECT_DOUBLE_EQ(count_ipt(G, swapped, wl).total_weighted, whole.total_weighted);
}

TEST(RelativeIpt, Arithmetic) {
  IptReport a, b;
  a.total_weighted = 55;
  b.total_weighted = 100;
  EXPECT_DOUBLE_EQ(relative_ipt(a, b), 55.0);
  EXPECT_DOUBLE_EQ(relative_ipt(b, b), 100.0);
  IptReport zero;
  try {
    relative_ipt(a, zero);
    FAIL();
  } catch (const error& ex) {
    EXPECT_EQ(ex.code(), errc::zero_baseline);
  }
}

TEST(ParseWorkload, MinimalFile) {
  const Workload wl =
      parse_workload_json(R"({"queries":[{"name":"one","freq":1,"edges":[[0,"a",1,"b"]]}]})");
  ASSERT_EQ(wl.queries.size(), 1u);
  EXPECT_EQ(wl.queries[0].first.name, "one");
  EXPECT_EQ(wl.queries[0].first.graph.edge_count(), 1u);
}

TEST(ParseWorkload, ErrorsNameTheOffender) {
  try {
    parse_workload_json(R"({"queries":[{"name":"bad","freq":1,"edges":[[0,"a"]]}]})");
    FAIL();
  } catch (const error& ex) {
    EXPECT_EQ(ex.code(), errc::parse);
  }
  try {
    parse_workload_json("{not json");
    FAIL();
  } catch (const error& ex) {
    EXPECT_EQ(ex.code(), errc::parse);
  }
  // disconnected pattern
  EXPECT_THROW(parse_workload_json(
                   R"({"queries":[{"freq":1,"edges":[[0,"a",1,"b"],[5,"a",6,"b"]]}]})"),
               error);
  // non-positive frequency
  EXPECT_THROW(
      parse_workload_json(R"({"queries":[{"freq":0,"edges":[[0,"a",1,"b"]]}]})"), error);
}

TEST(ParseWorkload, RoundTripIdentity) {
  Rng rng(8);
  Workload wl;
  for (int i = 0; i < 4; ++i) {
    wl.queries.push_back({{"q" + std::to_string(i),
                           testing::random_connected_graph(rng, 1 + rng.below(4), {"a", "b"})},
                          1.0 + static_cast<double>(rng.below(5))});
  }
  const Workload back = parse_workload_json(workload_to_json(wl));
  ASSERT_EQ(back.queries.size(), wl.queries.size());
  for (std::size_t i = 0; i < wl.queries.size(); ++i) {
    EXPECT_EQ(back.queries[i].first.name, wl.queries[i].first.name);
    EXPECT_DOUBLE_EQ(back.queries[i].second, wl.queries[i].second);
    EXPECT_TRUE(is_isomorphic(back.queries[i].first.graph, wl.queries[i].first.graph));
    EXPECT_EQ(back.queries[i].first.graph.edges(), wl.queries[i].first.graph.edges());
  }
}

// cross-module law: oracle-isomorphic graphs always share a signature
TEST(CrossModule, OracleIsomorphismImpliesEqualSignatures) {
  Rng rng(67);
  const PrimeConfig cfg = make_prime_config({"a", "b", "c"}, 251, 5);
  for (int i = 0; i < 30; ++i) {
    const LabelledGraph g =
        testing::random_connected_graph(rng, 1 + rng.below(6), {"a", "b", "c"});
    const LabelledGraph h = testing::random_isomorphic_copy(rng, g);
    ASSERT_TRUE(is_isomorphic(g, h));
    EXPECT_TRUE(graph_signature(cfg, g) == graph_signature(cfg, h));
  }
}

}  // namespace
}  // namespace loom
