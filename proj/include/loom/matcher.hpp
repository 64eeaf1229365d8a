#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "loom/graph.hpp"
#include "loom/signature.hpp"
#include "loom/trie.hpp"

namespace loom {

// A motif-matching sub-graph of the window: a connected edge set whose
// signature equals the trie node's.
struct Match {
  std::uint64_t id = 0;  // creation sequence, used for deterministic ordering
  std::vector<Edge> edges;        // sorted
  std::vector<VertexId> vertices; // sorted, unique
  const TrieNode* node = nullptr;
  bool alive = true;

  bool contains(const Edge& e) const {
    return std::binary_search(edges.begin(), edges.end(), e);
  }
  bool touches(VertexId v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
  }
};

using MatchPtr = std::shared_ptr<Match>;

struct EvictionEvent {
  Edge edge;
  // Every live match containing the evicted edge, sorted by descending
  // support, then ascending edge count, then creation order. Always contains
  // the edge's own single-edge match first.
  std::vector<MatchPtr> match_set;
};

struct IngestOutcome {
  enum class Kind { ImmediateAssign, Buffered, BufferedWithEviction };
  Kind kind = Kind::Buffered;
  std::vector<MatchPtr> new_matches;
  std::optional<EvictionEvent> eviction;
};

struct MatcherStats {
  std::size_t window_fill = 0;
  std::size_t vertices_indexed = 0;
  std::size_t matches = 0;
  std::size_t max_match_edges = 0;
};

// Maintains the sliding window over the edge stream together with the
// vertex -> matches index, detecting every motif-matching sub-graph as it
// forms. Single-threaded; the frozen motif trie it reads is shared.
class StreamMatcher {
 public:
  StreamMatcher(const Trie& motifs, std::size_t window_capacity,
                std::size_t per_vertex_cap = 512)
      : motifs_(&motifs),
        cfg_(&motifs.prime_config()),
        capacity_(window_capacity),
        per_vertex_cap_(per_vertex_cap) {
    if (window_capacity == 0) throw error(errc::invalid_argument, "window capacity must be > 0");
  }

  IngestOutcome ingest(const StreamEdge& se) {
    const Edge& e = se.edge;
    if (window_edges_.count(e) != 0) {
      throw error(errc::invalid_argument, "edge is already buffered in the window");
    }
    const TrieNode* single = motifs_->single_edge_motif(e);
    IngestOutcome out;
    if (single == nullptr) {
      out.kind = IngestOutcome::Kind::ImmediateAssign;
      return out;
    }

    // snapshot of matches connected to e, before e's own match exists
    std::vector<MatchPtr> grow_candidates = collect(e.u(), e.v());

    buffer_.push_back(se);
    window_edges_.insert(e);
    bump_incidence(e, +1);

    if (MatchPtr m = record({e}, single)) out.new_matches.push_back(m);

    // grow: extend every existing match adjacent to e by the single edge e
    for (const MatchPtr& m : grow_candidates) {
      if (MatchPtr g = grow_match(m, e)) out.new_matches.push_back(g);
    }

    // join: merge pairs of matches that e just connected
    const std::vector<MatchPtr> ms1 = list_for(e.u());
    const std::vector<MatchPtr> ms2 = list_for(e.v());
    std::set<std::pair<std::uint64_t, std::uint64_t>> tried;
    for (const MatchPtr& a : ms1) {
      for (const MatchPtr& b : ms2) {
        if (a->id == b->id || !a->alive || !b->alive) continue;
        const bool a_has = a->contains(e);
        const bool b_has = b->contains(e);
        if (a_has == b_has) continue;  // exactly one side may hold the new edge
        if (!tried.emplace(std::min(a->id, b->id), std::max(a->id, b->id)).second) continue;
        if (MatchPtr j = join_matches(a, b)) out.new_matches.push_back(j);
      }
    }

    if (window_edges_.size() > capacity_) {
      out.kind = IngestOutcome::Kind::BufferedWithEviction;
      out.eviction = evict_oldest();
    } else {
      out.kind = IngestOutcome::Kind::Buffered;
    }
    return out;
  }

  // Pops the oldest buffered edge and gathers its support-ordered match set.
  // The caller must route the event through an allocator and then call
  // purge_assigned with whatever got placed.
  EvictionEvent evict_oldest() {
    while (!buffer_.empty() && window_edges_.count(buffer_.front().edge) == 0) {
      buffer_.pop_front();  // purged earlier
    }
    if (buffer_.empty()) throw error(errc::invalid_argument, "window is empty");
    EvictionEvent ev{buffer_.front().edge, {}};
    buffer_.pop_front();
    auto it = match_list_.find(ev.edge.u());
    if (it != match_list_.end()) {
      for (const MatchPtr& m : it->second) {
        if (m->alive && m->contains(ev.edge)) ev.match_set.push_back(m);
      }
    }
    std::sort(ev.match_set.begin(), ev.match_set.end(),
              [this](const MatchPtr& a, const MatchPtr& b) {
                const double sa = motifs_->support(*a->node);
                const double sb = motifs_->support(*b->node);
                if (sa != sb) return sa > sb;
                if (a->edges.size() != b->edges.size()) return a->edges.size() < b->edges.size();
                return a->id < b->id;
              });
    return ev;
  }

  // Removes assigned edges from the window and drops every match containing
  // any of them from all matchList entries.
  void purge_assigned(const std::vector<Edge>& assigned) {
    std::vector<MatchPtr> doomed;
    for (const Edge& e : assigned) {
      if (window_edges_.erase(e) != 0) bump_incidence(e, -1);
      for (const VertexId endpoint : {e.u(), e.v()}) {
        auto it = match_list_.find(endpoint);
        if (it == match_list_.end()) continue;
        for (const MatchPtr& m : it->second) {
          if (m->alive && m->contains(e)) {
            m->alive = false;
            doomed.push_back(m);
          }
        }
      }
    }
    for (const MatchPtr& m : doomed) {
      for (const VertexId v : m->vertices) {
        auto it = match_list_.find(v);
        if (it == match_list_.end()) continue;
        auto& vec = it->second;
        vec.erase(std::remove_if(vec.begin(), vec.end(),
                                 [&](const MatchPtr& x) { return x->id == m->id; }),
                  vec.end());
        if (vec.empty()) match_list_.erase(it);
      }
      --live_matches_;
    }
  }

  bool window_empty() const { return window_edges_.empty(); }
  std::size_t window_fill() const { return window_edges_.size(); }
  std::size_t window_vertex_count() const { return window_incidence_.size(); }
  std::uint64_t overflow_events() const { return overflow_events_; }
  const std::map<std::uint32_t, std::uint64_t>& matches_by_depth() const {
    return matches_by_depth_;
  }

  MatcherStats stats() const {
    MatcherStats s;
    s.window_fill = window_edges_.size();
    s.vertices_indexed = match_list_.size();
    s.matches = live_matches_;
    for (const auto& [v, vec] : match_list_) {
      for (const MatchPtr& m : vec) s.max_match_edges = std::max(s.max_match_edges, m->edges.size());
    }
    return s;
  }

  // All live matches indexed at v (empty if none).
  std::vector<MatchPtr> list_for(VertexId v) const {
    auto it = match_list_.find(v);
    if (it == match_list_.end()) return {};
    std::vector<MatchPtr> out;
    for (const MatchPtr& m : it->second) {
      if (m->alive) out.push_back(m);
    }
    return out;
  }

  // Extends m by the already-buffered edge e when the motif trie has a child
  // for the corresponding factor delta; records and returns the grown match.
  MatchPtr grow_match(const MatchPtr& m, const Edge& e) {
    if (!m->alive || m->contains(e)) return nullptr;
    if (!m->touches(e.u()) && !m->touches(e.v())) return nullptr;
    const FactorMultiset delta = delta_factors(*cfg_, e, std::span<const Edge>(m->edges));
    const TrieNode* child = Trie::find_child(*m->node, delta);
    if (child == nullptr) return nullptr;
    std::vector<Edge> grown = m->edges;
    grown.insert(std::upper_bound(grown.begin(), grown.end(), e), e);
    return record(grown, child);
  }

  // Absorbs the smaller of two vertex-sharing, edge-disjoint matches into the
  // larger, edge by edge along trie child links (ties absorb the lower-support
  // side, then the newer match). Returns the combined match iff every edge is
  // absorbed and each intermediate node exists; records it on success.
  MatchPtr join_matches(const MatchPtr& a, const MatchPtr& b) {
    if (!a->alive || !b->alive || edges_overlap(*a, *b)) return nullptr;
    const MatchPtr* host = &a;
    const MatchPtr* absorbed = &b;
    auto prefer_host = [&](const MatchPtr& x, const MatchPtr& y) {
      if (x->edges.size() != y->edges.size()) return x->edges.size() > y->edges.size();
      const double sx = motifs_->support(*x->node);
      const double sy = motifs_->support(*y->node);
      if (sx != sy) return sx > sy;
      return x->id < y->id;
    };
    if (!prefer_host(*host, *absorbed)) std::swap(host, absorbed);
    if (!share_vertex(**host, **absorbed)) return nullptr;

    std::vector<Edge> combined = (*host)->edges;
    std::vector<Edge> remaining = (*absorbed)->edges;
    const TrieNode* node = absorb((*host)->node, combined, remaining);
    if (node == nullptr) return nullptr;
    std::sort(combined.begin(), combined.end());
    return record(combined, node);
  }

 private:
  static bool edges_overlap(const Match& a, const Match& b) {
    const Match& small = a.edges.size() <= b.edges.size() ? a : b;
    const Match& big = a.edges.size() <= b.edges.size() ? b : a;
    for (const Edge& e : small.edges) {
      if (big.contains(e)) return true;
    }
    return false;
  }

  static bool share_vertex(const Match& a, const Match& b) {
    for (const VertexId v : a.vertices) {
      if (b.touches(v)) return true;
    }
    return false;
  }

  std::vector<MatchPtr> collect(VertexId a, VertexId b) const {
    std::vector<MatchPtr> out = list_for(a);
    for (const MatchPtr& m : list_for(b)) out.push_back(m);
    std::sort(out.begin(), out.end(),
              [](const MatchPtr& x, const MatchPtr& y) { return x->id < y->id; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const MatchPtr& x, const MatchPtr& y) { return x->id == y->id; }),
              out.end());
    return out;
  }

  const TrieNode* absorb(const TrieNode* node, std::vector<Edge>& grown,
                         std::vector<Edge>& remaining) {
    if (remaining.empty()) return node;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      const Edge e = remaining[i];
      bool incident = false;
      for (const Edge& have : grown) {
        if (have.touches(e.u()) || have.touches(e.v())) {
          incident = true;
          break;
        }
      }
      if (!incident) continue;
      const FactorMultiset delta = delta_factors(*cfg_, e, std::span<const Edge>(grown));
      const TrieNode* child = Trie::find_child(*node, delta);
      if (child == nullptr) continue;
      grown.push_back(e);
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
      if (const TrieNode* done = absorb(child, grown, remaining)) return done;
      remaining.insert(remaining.begin() + static_cast<std::ptrdiff_t>(i), e);
      grown.pop_back();
    }
    return nullptr;
  }

  // Records a match unless an identical (edge set, node) match already exists
  // or a touched vertex is at its match cap.
  MatchPtr record(std::vector<Edge> edges, const TrieNode* node) {
    std::vector<VertexId> vertices;
    for (const Edge& e : edges) {
      vertices.push_back(e.u());
      vertices.push_back(e.v());
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());

    auto it = match_list_.find(vertices.front());
    if (it != match_list_.end()) {
      for (const MatchPtr& m : it->second) {
        if (m->alive && m->node == node && m->edges == edges) return nullptr;  // duplicate
      }
    }
    for (const VertexId v : vertices) {
      auto entry = match_list_.find(v);
      if (entry != match_list_.end() && entry->second.size() >= per_vertex_cap_) {
        ++overflow_events_;
        return nullptr;
      }
    }

    auto m = std::make_shared<Match>();
    m->id = next_match_id_++;
    m->edges = std::move(edges);
    m->vertices = std::move(vertices);
    m->node = node;
    for (const VertexId v : m->vertices) match_list_[v].push_back(m);
    ++live_matches_;
    matches_by_depth_[node->depth] += 1;
    return m;
  }

  void bump_incidence(const Edge& e, int d) {
    for (const VertexId v : {e.u(), e.v()}) {
      auto it = window_incidence_.try_emplace(v, 0).first;
      it->second += d;
      if (it->second <= 0) window_incidence_.erase(it);
    }
  }

  const Trie* motifs_;
  const PrimeConfig* cfg_;
  std::size_t capacity_;
  std::size_t per_vertex_cap_;
  std::deque<StreamEdge> buffer_;
  std::set<Edge> window_edges_;
  std::map<VertexId, int> window_incidence_;
  std::map<VertexId, std::vector<MatchPtr>> match_list_;
  std::uint64_t next_match_id_ = 0;
  std::uint64_t overflow_events_ = 0;
  std::size_t live_matches_ = 0;
  std::map<std::uint32_t, std::uint64_t> matches_by_depth_;
};

}  // namespace loom
