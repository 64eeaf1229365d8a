#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace loom {

using VertexId = std::uint64_t;
using Label = std::string;

enum class errc {
  self_loop,
  label_conflict,
  unknown_vertex,
  unknown_label,
  disconnected_input,
  invalid_argument,
  non_prime,
  parse,
  io,
  capacity_exhausted,
  zero_baseline,
  unassigned_vertex,
  already_assigned,
  infeasible,
};

class error : public std::runtime_error {
 public:
  error(errc code, std::string msg) : std::runtime_error(std::move(msg)), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

// Undirected labelled edge. Stored with endpoints in canonical (ascending id)
// order so that Edge(u,v) and Edge(v,u) compare equal as values.
class Edge {
 public:
  Edge(VertexId u, Label label_u, VertexId v, Label label_v) {
    if (u == v) throw error(errc::self_loop, "self-loop rejected at vertex " + std::to_string(u));
    if (v < u) {
      std::swap(u, v);
      std::swap(label_u, label_v);
    }
    u_ = u;
    v_ = v;
    label_u_ = std::move(label_u);
    label_v_ = std::move(label_v);
  }

  VertexId u() const { return u_; }
  VertexId v() const { return v_; }
  const Label& label_u() const { return label_u_; }
  const Label& label_v() const { return label_v_; }
  bool touches(VertexId x) const { return x == u_ || x == v_; }
  VertexId other(VertexId x) const { return x == u_ ? v_ : u_; }

  friend auto operator<=>(const Edge&, const Edge&) = default;

 private:
  VertexId u_, v_;
  Label label_u_, label_v_;
};

// Position-stamped edge of an online graph stream.
struct StreamEdge {
  Edge edge;
  std::uint64_t arrival_index = 0;
};

// A labelled, undirected graph. Shared representation for the data graph,
// query graphs, window sub-graphs and trie exemplars. Parallel edges collapse
// to one; self-loops are rejected by Edge itself.
class LabelledGraph {
 public:
  void add_vertex(VertexId v, const Label& label) {
    auto [it, inserted] = vertices_.emplace(v, label);
    if (!inserted && it->second != label) {
      throw error(errc::label_conflict, "vertex " + std::to_string(v) + " already labelled '" +
                                            it->second + "', got '" + label + "'");
    }
    adj_.try_emplace(v);
  }

  void add_edge(const Edge& e) {
    add_vertex(e.u(), e.label_u());
    add_vertex(e.v(), e.label_v());
    if (!edges_.insert(e).second) return;  // idempotent
    insert_sorted(adj_[e.u()], e.v());
    insert_sorted(adj_[e.v()], e.u());
  }

  bool has_vertex(VertexId v) const { return vertices_.count(v) != 0; }
  bool has_edge(const Edge& e) const { return edges_.count(e) != 0; }

  const Label& label_of(VertexId v) const {
    auto it = vertices_.find(v);
    if (it == vertices_.end()) throw error(errc::unknown_vertex, "unknown vertex " + std::to_string(v));
    return it->second;
  }

  std::size_t degree(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw error(errc::unknown_vertex, "unknown vertex " + std::to_string(v));
    return it->second.size();
  }

  // Sorted, duplicate-free neighbour list.
  const std::vector<VertexId>& neighbors(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) throw error(errc::unknown_vertex, "unknown vertex " + std::to_string(v));
    return it->second;
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::map<VertexId, Label>& vertices() const { return vertices_; }
  const std::set<Edge>& edges() const { return edges_; }

 private:
  static void insert_sorted(std::vector<VertexId>& v, VertexId x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
  }

  std::map<VertexId, Label> vertices_;
  std::set<Edge> edges_;
  std::map<VertexId, std::vector<VertexId>> adj_;
};

template <typename Range>
LabelledGraph graph_from_edges(const Range& edges) {
  LabelledGraph g;
  for (const Edge& e : edges) g.add_edge(e);
  return g;
}

inline bool is_connected(const LabelledGraph& g) {
  if (g.vertex_count() <= 1) return true;
  std::set<VertexId> seen;
  std::vector<VertexId> stack{g.vertices().begin()->first};
  seen.insert(stack.back());
  while (!stack.empty()) {
    const VertexId u = stack.back();
    stack.pop_back();
    for (const VertexId w : g.neighbors(u)) {
      if (seen.insert(w).second) stack.push_back(w);
    }
  }
  return seen.size() == g.vertex_count();
}

// Builds the induced labelled graph of a non-empty edge set, requiring it to
// be connected.
inline LabelledGraph connected_subgraph(const std::set<Edge>& edges) {
  if (edges.empty()) throw error(errc::invalid_argument, "empty edge set");
  LabelledGraph g = graph_from_edges(edges);
  if (!is_connected(g)) throw error(errc::disconnected_input, "edge set is not connected");
  return g;
}

// Vertex -> partition assignment with per-partition counters. Streaming
// discipline: a vertex, once assigned, is never moved.
class Partitioning {
 public:
  Partitioning(std::uint32_t k, double capacity, double balance_bound)
      : k_(k), capacity_(capacity), balance_bound_(balance_bound), sizes_(k, 0) {
    if (k == 0) throw error(errc::invalid_argument, "partition count must be positive");
    if (balance_bound < 1.0) throw error(errc::invalid_argument, "balance bound must be >= 1");
  }

  std::uint32_t k() const { return k_; }
  double capacity() const { return capacity_; }
  void set_capacity(double c) { capacity_ = c; }
  double balance_bound() const { return balance_bound_; }

  std::optional<std::uint32_t> partition_of(VertexId v) const {
    auto it = assignment_.find(v);
    if (it == assignment_.end()) return std::nullopt;
    return it->second;
  }

  void assign(VertexId v, std::uint32_t part) {
    if (part >= k_) throw error(errc::invalid_argument, "partition index out of range");
    auto [it, inserted] = assignment_.emplace(v, part);
    if (!inserted) {
      throw error(errc::already_assigned,
                  "vertex " + std::to_string(v) + " is already assigned; no refinement");
    }
    ++sizes_[part];
    ++total_;
  }

  std::uint64_t size_of(std::uint32_t part) const { return sizes_.at(part); }
  const std::vector<std::uint64_t>& sizes() const { return sizes_; }
  std::uint64_t total_assigned() const { return total_; }

  std::uint64_t min_size() const {
    std::uint64_t m = sizes_[0];
    for (const auto s : sizes_) m = std::min(m, s);
    return m;
  }

  std::uint64_t max_size() const {
    std::uint64_t m = sizes_[0];
    for (const auto s : sizes_) m = std::max(m, s);
    return m;
  }

  // max partition size relative to the perfectly balanced size.
  double imbalance() const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(max_size()) /
           (static_cast<double>(total_) / static_cast<double>(k_));
  }

  const std::unordered_map<VertexId, std::uint32_t>& assignment() const { return assignment_; }

 private:
  std::uint32_t k_;
  double capacity_;
  double balance_bound_;
  std::vector<std::uint64_t> sizes_;
  std::unordered_map<VertexId, std::uint32_t> assignment_;
  std::uint64_t total_ = 0;
};

}  // namespace loom
