#pragma once

#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loom/graph.hpp"
#include "loom/rng.hpp"
#include "loom/stream_io.hpp"

namespace loom {

enum class StreamOrder { as_is, random, bfs, dfs };

inline StreamOrder parse_stream_order(const std::string& s) {
  if (s == "as-is") return StreamOrder::as_is;
  if (s == "random") return StreamOrder::random;
  if (s == "bfs") return StreamOrder::bfs;
  if (s == "dfs") return StreamOrder::dfs;
  throw error(errc::invalid_argument, "unknown ordering '" + s + "'");
}

inline std::string to_string(StreamOrder o) {
  switch (o) {
    case StreamOrder::as_is: return "as-is";
    case StreamOrder::random: return "random";
    case StreamOrder::bfs: return "bfs";
    case StreamOrder::dfs: return "dfs";
  }
  return "?";
}

namespace detail {

// Traversal orders emit an edge the first time the walk encounters it (tree
// and non-tree edges alike), restarting from a seeded random unvisited vertex
// per component.
inline std::vector<StreamRecord> traversal_order(const std::vector<StreamRecord>& records,
                                                 bool depth_first, std::uint64_t seed,
                                                 std::optional<VertexId> forced_root) {
  std::map<VertexId, std::vector<VertexId>> adj;
  std::map<Edge, std::vector<std::size_t>> record_slots;  // duplicate lines grouped
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Edge& e = records[i].edge;
    auto [it, fresh] = record_slots.try_emplace(e);
    it->second.push_back(i);
    if (fresh) {
      adj[e.u()].push_back(e.v());
      adj[e.v()].push_back(e.u());
    }
  }
  for (auto& [v, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

  std::vector<VertexId> roots;
  roots.reserve(adj.size());
  for (const auto& [v, nbrs] : adj) roots.push_back(v);
  Rng rng(seed);
  rng.shuffle(roots);
  if (forced_root) {
    if (adj.find(*forced_root) == adj.end()) {
      throw error(errc::unknown_vertex, "forced root is not in the graph");
    }
    roots.insert(roots.begin(), *forced_root);
  }

  std::vector<StreamRecord> out;
  out.reserve(records.size());
  std::set<VertexId> visited;
  std::set<Edge> emitted;
  auto emit_incident = [&](VertexId u) {
    for (const VertexId w : adj[u]) {
      Edge key = Edge(u, "", w, "");
      auto it = record_slots.lower_bound(key);
      // the stored Edge carries labels; locate by endpoints
      for (; it != record_slots.end() && it->first.u() == key.u() && it->first.v() == key.v();
           ++it) {
        if (emitted.insert(it->first).second) {
          for (const std::size_t slot : it->second) out.push_back(records[slot]);
        }
      }
    }
  };

  for (const VertexId root : roots) {
    if (visited.count(root)) continue;
    if (depth_first) {
      std::vector<VertexId> stack{root};
      while (!stack.empty()) {
        const VertexId u = stack.back();
        stack.pop_back();
        if (!visited.insert(u).second) continue;
        emit_incident(u);
        const auto& nbrs = adj[u];
        for (auto it = nbrs.rbegin(); it != nbrs.rend(); ++it) {
          if (!visited.count(*it)) stack.push_back(*it);
        }
      }
    } else {
      std::deque<VertexId> queue{root};
      visited.insert(root);
      while (!queue.empty()) {
        const VertexId u = queue.front();
        queue.pop_front();
        emit_incident(u);
        for (const VertexId w : adj[u]) {
          if (visited.insert(w).second) queue.push_back(w);
        }
      }
    }
  }
  return out;
}

}  // namespace detail

// Permutes an edge stream into the requested replay order. The output is a
// permutation of the input records (same multiset of lines).
inline std::vector<StreamRecord> order_stream(std::vector<StreamRecord> records, StreamOrder order,
                                              std::uint64_t seed,
                                              std::optional<VertexId> forced_root = std::nullopt) {
  switch (order) {
    case StreamOrder::as_is:
      return records;
    case StreamOrder::random: {
      Rng rng(seed);
      rng.shuffle(records);
      return records;
    }
    case StreamOrder::bfs:
      return detail::traversal_order(records, /*depth_first=*/false, seed, forced_root);
    case StreamOrder::dfs:
      return detail::traversal_order(records, /*depth_first=*/true, seed, forced_root);
  }
  throw error(errc::invalid_argument, "unknown ordering");
}

}  // namespace loom
