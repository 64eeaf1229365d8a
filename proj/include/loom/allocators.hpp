#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "loom/graph.hpp"
#include "loom/matcher.hpp"
#include "loom/rng.hpp"
#include "loom/trie.hpp"

namespace loom {

struct AllocatorConfig {
  std::uint32_t k = 8;
  double capacity = 0.0;          // C, vertices per partition
  double alpha = 2.0 / 3.0;       // ration aggression, (0, 1]
  double balance_bound = 1.1;     // b
  double gamma = 1.5;             // Fennel exponent
  std::uint64_t seed = 0;

  void validate() const {
    if (k == 0) throw error(errc::invalid_argument, "k must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw error(errc::invalid_argument, "alpha must be in (0, 1]");
    if (balance_bound < 1.0) throw error(errc::invalid_argument, "balance bound must be >= 1");
    if (!(gamma > 1.0)) throw error(errc::invalid_argument, "gamma must be > 1");
  }
};

// Adjacency of the graph seen so far; the neighbour counts behind the LDG and
// Fennel scores.
class AdjacencyIndex {
 public:
  void add_edge(const Edge& e) {
    adj_[e.u()].push_back(e.v());
    adj_[e.v()].push_back(e.u());
  }

  std::span<const VertexId> neighbors(VertexId v) const {
    auto it = adj_.find(v);
    if (it == adj_.end()) return {};
    return it->second;
  }

 private:
  std::unordered_map<VertexId, std::vector<VertexId>> adj_;
};

// Running totals of the stream, used by Fennel's alpha.
struct StreamTotals {
  std::uint64_t edges = 0;
  std::uint64_t vertices = 0;
};

inline std::uint32_t hash_assign(VertexId v, const AllocatorConfig& cfg) {
  return static_cast<std::uint32_t>(hash64(v ^ cfg.seed) % cfg.k);
}

namespace detail {

// Number of e's incident edges whose far endpoint is assigned to each
// partition.
inline std::vector<double> neighbor_counts(const Edge& e, const AdjacencyIndex& adj,
                                           const Partitioning& part, std::uint32_t k) {
  std::vector<double> counts(k, 0.0);
  for (const VertexId w : adj.neighbors(e.u())) {
    if (w == e.v()) continue;
    if (auto p = part.partition_of(w)) counts[*p] += 1.0;
  }
  for (const VertexId w : adj.neighbors(e.v())) {
    if (w == e.u()) continue;
    if (auto p = part.partition_of(w)) counts[*p] += 1.0;
  }
  return counts;
}

inline std::uint32_t argmax_with_ties(const std::vector<double>& scores,
                                      const std::vector<char>& eligible,
                                      const Partitioning& part) {
  std::int64_t best = -1;
  for (std::uint32_t i = 0; i < scores.size(); ++i) {
    if (!eligible[i]) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const auto b = static_cast<std::uint32_t>(best);
    if (scores[i] > scores[b] ||
        (scores[i] == scores[b] && part.size_of(i) < part.size_of(b))) {
      best = i;
    }
  }
  if (best < 0) throw error(errc::capacity_exhausted, "no partition can accept new vertices");
  return static_cast<std::uint32_t>(best);
}

inline std::size_t pending_vertices(const Edge& e, const Partitioning& part) {
  std::size_t n = 0;
  if (!part.partition_of(e.u())) ++n;
  if (!part.partition_of(e.v())) ++n;
  return n;
}

}  // namespace detail

// LDG: neighbour count weighted by residual capacity,
// max over S_i of N(S_i, e) * (1 - |V(S_i)| / C). Assigns the unassigned
// endpoints of e to the winner. Ties: lowest current size, then lowest index.
inline std::uint32_t ldg_assign(const Edge& e, const AdjacencyIndex& adj, Partitioning& part,
                                const AllocatorConfig& cfg) {
  const double C = part.capacity();
  const std::vector<double> counts = detail::neighbor_counts(e, adj, part, cfg.k);
  std::vector<double> scores(cfg.k, 0.0);
  std::vector<char> eligible(cfg.k, 0);
  const std::size_t pending = detail::pending_vertices(e, part);
  bool any = false;
  for (std::uint32_t i = 0; i < cfg.k; ++i) {
    const auto size = static_cast<double>(part.size_of(i));
    if (pending > 0 && size >= C) continue;
    eligible[i] = 1;
    any = true;
    scores[i] = counts[i] * (1.0 - size / C);
  }
  if (!any) throw error(errc::capacity_exhausted, "all partitions at capacity");
  const std::uint32_t winner = detail::argmax_with_ties(scores, eligible, part);
  if (!part.partition_of(e.u())) part.assign(e.u(), winner);
  if (!part.partition_of(e.v())) part.assign(e.v(), winner);
  return winner;
}

// Fennel: N(S_i, e) - alpha_f * gamma * |V(S_i)|^(gamma-1), with alpha_f
// maintained from the running edge/vertex totals. Partitions above
// b * assigned / k are hard-rejected.
inline std::uint32_t fennel_assign(const Edge& e, const AdjacencyIndex& adj, Partitioning& part,
                                   const AllocatorConfig& cfg, const StreamTotals& totals) {
  const std::vector<double> counts = detail::neighbor_counts(e, adj, part, cfg.k);
  const double n = std::max<double>(1.0, static_cast<double>(totals.vertices));
  const double m = static_cast<double>(totals.edges);
  const double alpha_f =
      m * std::pow(static_cast<double>(cfg.k), cfg.gamma - 1.0) / std::pow(n, cfg.gamma);
  const double load_bound = cfg.balance_bound *
                            static_cast<double>(part.total_assigned()) /
                            static_cast<double>(cfg.k);
  const std::size_t pending = detail::pending_vertices(e, part);
  std::vector<double> scores(cfg.k, 0.0);
  std::vector<char> eligible(cfg.k, 0);
  bool any = false;
  for (std::uint32_t i = 0; i < cfg.k; ++i) {
    const auto size = static_cast<double>(part.size_of(i));
    if (pending > 0 && size > load_bound) continue;
    eligible[i] = 1;
    any = true;
    scores[i] = counts[i] - alpha_f * cfg.gamma * std::pow(size, cfg.gamma - 1.0);
  }
  if (!any) throw error(errc::capacity_exhausted, "all partitions above the load bound");
  const std::uint32_t winner = detail::argmax_with_ties(scores, eligible, part);
  if (!part.partition_of(e.u())) part.assign(e.u(), winner);
  if (!part.partition_of(e.v())) part.assign(e.v(), winner);
  return winner;
}

// Rationing function l: 1 for the smallest partition, 0 beyond b * S_min,
// otherwise alpha * S_min / |V(S_i)|. With no assigned vertices yet every
// partition rations to 1.
inline double ration(std::uint32_t i, const Partitioning& part, const AllocatorConfig& cfg) {
  const std::uint64_t s_min = part.min_size();
  if (s_min == 0) return 1.0;
  const std::uint64_t s_i = part.size_of(i);
  if (s_i == s_min) return 1.0;
  if (static_cast<double>(s_i) > static_cast<double>(s_min) * cfg.balance_bound) return 0.0;
  return cfg.alpha * static_cast<double>(s_min) / static_cast<double>(s_i);
}

// Support-weighted bid of partition i for one motif match:
// N(S_i, E_k) * (1 - |V(S_i)| / C) * supp(m_k). Zero whenever the partition
// holds no vertex of the match.
inline double bid(std::uint32_t i, const Match& match, const Trie& motifs,
                  const Partitioning& part, const AllocatorConfig& /*cfg*/) {
  double n = 0.0;
  for (const VertexId v : match.vertices) {
    if (auto p = part.partition_of(v); p && *p == i) n += 1.0;
  }
  if (n == 0.0) return 0.0;
  const double residual =
      std::max(0.0, 1.0 - static_cast<double>(part.size_of(i)) / part.capacity());
  return n * residual * motifs.support(*match.node);
}

struct EqualOpportunismResult {
  std::uint32_t winner = 0;
  std::vector<Edge> assigned_edges;  // union of the winning prefix's edge sets
  std::size_t prefix_len = 0;
};

// Equal opportunism: every partition bids on a rationed prefix of the
// support-ordered match set of the evicted edge; the winner receives the
// union of the first ceil(l * n) of its n matches (at least one, so the edge
// placed). Remaining matches are left to the caller's purge.
inline EqualOpportunismResult equal_opportunism(const Edge& e,
                                                const std::vector<MatchPtr>& matches,
                                                const Trie& motifs, Partitioning& part,
                                                const AllocatorConfig& cfg,
                                                const AdjacencyIndex& adj) {
  if (matches.empty()) throw error(errc::invalid_argument, "match set must not be empty");
  const auto total = matches.size();
  std::vector<double> totals(cfg.k, 0.0);
  std::vector<std::size_t> prefix(cfg.k, 0);
  std::vector<char> eligible(cfg.k, 1);
  bool any_ration = false;
  for (std::uint32_t i = 0; i < cfg.k; ++i) {
    const double l = ration(i, part, cfg);
    if (l == 0.0) continue;
    any_ration = true;
    prefix[i] = std::min<std::size_t>(
        total, std::max<std::size_t>(1, static_cast<std::size_t>(
                                            std::ceil(l * static_cast<double>(total)))));
    for (std::size_t j = 0; j < prefix[i]; ++j) {
      totals[i] += bid(i, *matches[j], motifs, part, cfg);
    }
  }
  EqualOpportunismResult res;
  if (!any_ration) {
    // balance-forced fallback: place the evicted edge alone via LDG
    res.winner = ldg_assign(e, adj, part, cfg);
    res.assigned_edges = {e};
    res.prefix_len = 1;
    return res;
  }
  std::vector<char> biddable(cfg.k, 0);
  for (std::uint32_t i = 0; i < cfg.k; ++i) biddable[i] = prefix[i] > 0 ? 1 : 0;
  res.winner = detail::argmax_with_ties(totals, biddable, part);
  res.prefix_len = prefix[res.winner];

  std::set<Edge> edge_union;
  std::vector<VertexId> to_place;
  for (std::size_t j = 0; j < res.prefix_len; ++j) {
    for (const Edge& me : matches[j]->edges) edge_union.insert(me);
    for (const VertexId v : matches[j]->vertices) to_place.push_back(v);
  }
  std::sort(to_place.begin(), to_place.end());
  to_place.erase(std::unique(to_place.begin(), to_place.end()), to_place.end());
  for (const VertexId v : to_place) {
    if (!part.partition_of(v)) part.assign(v, res.winner);
  }
  res.assigned_edges.assign(edge_union.begin(), edge_union.end());
  return res;
}

}  // namespace loom
