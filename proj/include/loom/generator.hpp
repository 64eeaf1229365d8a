#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "loom/graph.hpp"
#include "loom/rng.hpp"
#include "loom/stream_io.hpp"
#include "loom/workload.hpp"

namespace loom {

// Desk-scale synthetic dataset: a labelled background graph plus planted
// instances of a skewed query workload, so motif matches exist at known
// density.
struct SyntheticSpec {
  std::uint32_t label_count = 6;          // >= 2
  std::uint64_t background_vertices = 10000;
  double background_avg_degree = 3.0;
  std::uint64_t community_size = 40;      // background locality; 0 disables
  double intra_community = 0.85;          // fraction of background edges kept local
  double workload_skew = 4.0;             // frequency ratio between successive queries
  std::uint64_t planted_dominant = 400;   // instances of the most frequent query
  std::uint32_t bridges_per_instance = 2; // edges tying each instance into the background
  std::uint64_t seed = 0;
};

struct Synthetic {
  std::vector<StreamRecord> records;
  Workload workload;
  std::map<std::string, std::uint64_t> planted;  // per query name
  std::uint64_t vertex_count = 0;
  std::uint64_t edge_count = 0;
};

namespace detail {

inline Label label_name(std::uint32_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "l" + std::to_string(i);
}

inline LabelledGraph path_pattern(const std::vector<Label>& labels) {
  LabelledGraph g;
  for (std::size_t i = 0; i + 1 < labels.size(); ++i) {
    g.add_edge(Edge(i, labels[i], i + 1, labels[i + 1]));
  }
  return g;
}

}  // namespace detail

// The three generated query shapes concentrate on the first five labels while
// background labels stay uniform, which is what gives the workload its skew
// over a heterogeneous graph. The dominant query is a 4-edge chain whose
// sub-paths the other queries overlap.
inline Workload synthetic_workload(std::uint32_t label_count, double skew) {
  if (label_count < 2) throw error(errc::infeasible, "need at least 2 labels");
  auto l = [&](std::uint32_t i) { return detail::label_name(i % label_count); };
  Workload wl;

  QueryPattern chain;
  chain.name = "chain4";
  chain.graph = detail::path_pattern({l(0), l(1), l(2), l(3), l(4)});
  wl.queries.emplace_back(std::move(chain), skew * skew);

  QueryPattern tri;
  tri.name = "triangle";
  tri.graph.add_edge(Edge(0, l(1), 1, l(2)));
  tri.graph.add_edge(Edge(1, l(2), 2, l(3)));
  tri.graph.add_edge(Edge(0, l(1), 2, l(3)));
  wl.queries.emplace_back(std::move(tri), skew);

  QueryPattern fork;
  fork.name = "path2";
  fork.graph = detail::path_pattern({l(0), l(1), l(2)});
  wl.queries.emplace_back(std::move(fork), 1.0);

  for (auto& [q, freq] : wl.queries) validate_pattern(q, kDefaultMaxQueryEdges);
  return wl;
}

inline Synthetic generate_synthetic(const SyntheticSpec& spec) {
  if (spec.label_count < 2) throw error(errc::infeasible, "need at least 2 labels");
  if (spec.background_vertices < 2) throw error(errc::infeasible, "need at least 2 vertices");
  Rng rng(substream_seed(spec.seed, "generator"));

  Synthetic out;
  out.workload = synthetic_workload(spec.label_count, spec.workload_skew);

  std::vector<Label> vertex_labels(spec.background_vertices);
  for (auto& l : vertex_labels) {
    l = detail::label_name(static_cast<std::uint32_t>(rng.below(spec.label_count)));
  }

  std::set<Edge> edges;
  auto push_edge = [&](const Edge& e) {
    if (edges.insert(e).second) out.records.push_back({format_edge_line(e), e});
  };

  // background with planted communities: most edges stay inside a vertex's
  // community so neighbourhood heuristics have structure to work with
  const auto target_background = static_cast<std::uint64_t>(
      spec.background_avg_degree * static_cast<double>(spec.background_vertices) / 2.0);
  std::uint64_t attempts = 0;
  while (edges.size() < target_background && attempts < target_background * 20) {
    ++attempts;
    const VertexId u = rng.below(spec.background_vertices);
    VertexId v;
    if (spec.community_size > 1 && rng.unit() < spec.intra_community) {
      const VertexId base = (u / spec.community_size) * spec.community_size;
      const std::uint64_t span =
          std::min<std::uint64_t>(spec.community_size, spec.background_vertices - base);
      v = base + rng.below(span);
    } else {
      v = rng.below(spec.background_vertices);
    }
    if (u == v) continue;
    push_edge(Edge(u, vertex_labels[u], v, vertex_labels[v]));
  }

  // planted instances: fresh vertices per copy, bridged into the background
  VertexId next_id = spec.background_vertices;
  const double top_freq = out.workload.queries.front().second;
  for (const auto& [q, freq] : out.workload.queries) {
    const auto copies = static_cast<std::uint64_t>(
        std::llround(static_cast<double>(spec.planted_dominant) * freq / top_freq));
    out.planted[q.name] = copies;
    for (std::uint64_t c = 0; c < copies; ++c) {
      std::map<VertexId, VertexId> local;
      for (const auto& [v, label] : q.graph.vertices()) local[v] = next_id++;
      for (const Edge& e : q.graph.edges()) {
        push_edge(Edge(local[e.u()], e.label_u(), local[e.v()], e.label_v()));
      }
      for (std::uint32_t bridge = 0; bridge < spec.bridges_per_instance; ++bridge) {
        const auto& [qv, qlabel] = *std::next(q.graph.vertices().begin(),
                                              static_cast<std::ptrdiff_t>(
                                                  rng.below(q.graph.vertex_count())));
        const VertexId b = rng.below(spec.background_vertices);
        push_edge(Edge(local[qv], qlabel, b, vertex_labels[b]));
      }
    }
  }

  std::set<VertexId> seen;
  for (const StreamRecord& r : out.records) {
    seen.insert(r.edge.u());
    seen.insert(r.edge.v());
  }
  out.vertex_count = seen.size();
  out.edge_count = out.records.size();
  return out;
}

inline std::string synthetic_manifest_json(const SyntheticSpec& spec, const Synthetic& s) {
  nlohmann::json doc;
  doc["seed"] = spec.seed;
  doc["labels"] = spec.label_count;
  doc["vertices"] = s.vertex_count;
  doc["edges"] = s.edge_count;
  doc["planted"] = nlohmann::json::object();
  for (const auto& [name, count] : s.planted) doc["planted"][name] = count;
  return doc.dump(2);
}

}  // namespace loom
