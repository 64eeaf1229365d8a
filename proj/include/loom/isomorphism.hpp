#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "loom/graph.hpp"

namespace loom {

// An injective, label- and edge-preserving mapping of a query graph's
// vertices onto data-graph vertices (a bijection onto its image).
struct Embedding {
  std::map<VertexId, VertexId> mapping;  // query vertex -> data vertex
};

namespace detail {

// Visit order for the query vertices: start from the highest-degree vertex,
// then expand so every later vertex has at least one earlier neighbour.
inline std::vector<VertexId> matching_order(const LabelledGraph& q) {
  std::vector<VertexId> order;
  std::set<VertexId> placed;
  VertexId start = q.vertices().begin()->first;
  std::size_t best = 0;
  for (const auto& [v, label] : q.vertices()) {
    if (q.degree(v) > best) {
      best = q.degree(v);
      start = v;
    }
  }
  order.push_back(start);
  placed.insert(start);
  while (order.size() < q.vertex_count()) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (const VertexId w : q.neighbors(order[i])) {
        if (placed.insert(w).second) order.push_back(w);
      }
    }
    if (placed.size() == order.size() && order.size() < q.vertex_count()) {
      // disconnected query: pick up the next untouched vertex
      for (const auto& [v, label] : q.vertices()) {
        if (placed.insert(v).second) {
          order.push_back(v);
          break;
        }
      }
    }
  }
  return order;
}

using EdgeImage = std::vector<std::pair<VertexId, VertexId>>;

inline EdgeImage edge_image(const LabelledGraph& q, const std::map<VertexId, VertexId>& m) {
  EdgeImage img;
  img.reserve(q.edge_count());
  for (const Edge& e : q.edges()) {
    VertexId a = m.at(e.u());
    VertexId b = m.at(e.v());
    if (b < a) std::swap(a, b);
    img.emplace_back(a, b);
  }
  std::sort(img.begin(), img.end());
  return img;
}

}  // namespace detail

// Enumerates the label-preserving sub-graph embeddings of q in G by pruned
// backtracking. By default embeddings with identical edge-image sets (i.e.
// automorphic re-mappings of the same matched sub-graph) are collapsed to
// one; pass count_automorphisms to keep every raw mapping. A non-zero limit
// stops the search early once that many embeddings were collected.
inline std::vector<Embedding> enumerate_embeddings(const LabelledGraph& G, const LabelledGraph& q,
                                                   bool count_automorphisms = false,
                                                   std::size_t limit = 0) {
  std::vector<Embedding> out;
  if (q.vertex_count() == 0 || G.vertex_count() == 0) return out;

  const std::vector<VertexId> order = detail::matching_order(q);
  std::map<VertexId, VertexId> mapping;
  std::set<VertexId> used;
  std::set<detail::EdgeImage> seen_images;

  // candidate check: label match, injectivity, and adjacency to every
  // already-mapped query neighbour
  auto feasible = [&](VertexId qv, VertexId gv) {
    if (used.count(gv)) return false;
    if (G.label_of(gv) != q.label_of(qv)) return false;
    for (const VertexId qn : q.neighbors(qv)) {
      auto it = mapping.find(qn);
      if (it == mapping.end()) continue;
      const auto& nbrs = G.neighbors(it->second);
      if (!std::binary_search(nbrs.begin(), nbrs.end(), gv)) return false;
    }
    return true;
  };

  auto record = [&] {
    if (!count_automorphisms) {
      if (!seen_images.insert(detail::edge_image(q, mapping)).second) return;
    }
    out.push_back(Embedding{mapping});
  };

  std::vector<std::vector<VertexId>> candidate_stack(order.size());
  std::size_t depth = 0;
  // iterative backtracking over the fixed order
  std::vector<std::size_t> cursor(order.size(), 0);
  auto candidates_for = [&](std::size_t d) {
    const VertexId qv = order[d];
    std::vector<VertexId> cands;
    // anchor on the first mapped query neighbour when one exists
    for (const VertexId qn : q.neighbors(qv)) {
      auto it = mapping.find(qn);
      if (it == mapping.end()) continue;
      for (const VertexId gv : G.neighbors(it->second)) {
        if (feasible(qv, gv)) cands.push_back(gv);
      }
      return cands;
    }
    for (const auto& [gv, label] : G.vertices()) {
      if (feasible(qv, gv)) cands.push_back(gv);
    }
    return cands;
  };

  candidate_stack[0] = candidates_for(0);
  cursor[0] = 0;
  while (true) {
    if (limit != 0 && out.size() >= limit) break;
    if (cursor[depth] < candidate_stack[depth].size()) {
      const VertexId gv = candidate_stack[depth][cursor[depth]++];
      mapping[order[depth]] = gv;
      used.insert(gv);
      if (depth + 1 == order.size()) {
        record();
        mapping.erase(order[depth]);
        used.erase(gv);
      } else {
        ++depth;
        candidate_stack[depth] = candidates_for(depth);
        cursor[depth] = 0;
      }
    } else {
      if (depth == 0) break;
      --depth;
      const VertexId gv = mapping[order[depth]];
      mapping.erase(order[depth]);
      used.erase(gv);
    }
  }
  return out;
}

// Exact graph isomorphism via the embedding oracle: equal sizes plus any
// injective embedding of b into a.
inline bool is_isomorphic(const LabelledGraph& a, const LabelledGraph& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::multiset<Label> la, lb;
  for (const auto& [v, l] : a.vertices()) la.insert(l);
  for (const auto& [v, l] : b.vertices()) lb.insert(l);
  if (la != lb) return false;
  return !enumerate_embeddings(a, b, /*count_automorphisms=*/true, /*limit=*/1).empty();
}

}  // namespace loom
