#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "loom/allocators.hpp"
#include "loom/generator.hpp"
#include "loom/graph.hpp"
#include "loom/matcher.hpp"
#include "loom/ordering.hpp"
#include "loom/signature.hpp"
#include "loom/stream_io.hpp"
#include "loom/trie.hpp"
#include "loom/workload.hpp"

namespace loom {

enum class Algorithm { hash, ldg, fennel, loom };

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "hash") return Algorithm::hash;
  if (s == "ldg") return Algorithm::ldg;
  if (s == "fennel") return Algorithm::fennel;
  if (s == "loom") return Algorithm::loom;
  throw error(errc::invalid_argument, "unknown algorithm '" + s + "'");
}

inline std::string to_string(Algorithm a) {
  switch (a) {
    case Algorithm::hash: return "hash";
    case Algorithm::ldg: return "ldg";
    case Algorithm::fennel: return "fennel";
    case Algorithm::loom: return "loom";
  }
  return "?";
}

struct RunConfig {
  std::filesystem::path graph_path;
  std::filesystem::path workload_path;
  StreamOrder ordering = StreamOrder::as_is;
  std::uint32_t k = 8;
  Algorithm algorithm = Algorithm::loom;
  std::size_t window = 10000;
  double support_threshold = 0.40;
  std::uint32_t prime = 251;
  double alpha = 2.0 / 3.0;
  double balance_bound = 1.1;
  double gamma = 1.5;
  double capacity = 0.0;  // 0: default to b * |V| / k
  bool adaptive_capacity = false;
  std::size_t per_vertex_match_cap = 512;
  std::uint64_t seed = 0;
  std::size_t stats_every = 0;        // emit matcher stats every N ingests
  std::ostream* stats_out = nullptr;  // destination for stats JSON lines

  void validate() const {
    if (k == 0) throw error(errc::invalid_argument, "k must be positive");
    if (window == 0) throw error(errc::invalid_argument, "window must be positive");
    if (!(support_threshold > 0.0 && support_threshold <= 1.0)) {
      throw error(errc::invalid_argument, "support threshold must be in (0, 1]");
    }
    AllocatorConfig ac{k, capacity, alpha, balance_bound, gamma, seed};
    ac.validate();
  }
};

struct RunMetrics {
  std::uint64_t edges_processed = 0;
  std::uint64_t duplicate_edges = 0;
  std::uint64_t immediate_assigned = 0;
  std::uint64_t evicted = 0;  // edges leaving the window during the stream
  std::uint64_t flushed = 0;  // edges leaving during the end-of-stream flush
  std::uint64_t eviction_events = 0;
  std::uint64_t overflow_events = 0;
  std::map<std::uint32_t, std::uint64_t> matches_by_depth;
  double elapsed_ms = 0.0;
  double ms_per_10k_edges = 0.0;
  std::vector<std::uint64_t> partition_sizes;
  double imbalance = 0.0;
  std::uint64_t vertices_assigned = 0;
  bool residue_collision = false;
};

struct RunResult {
  Partitioning partitioning;
  RunMetrics metrics;
};

namespace detail {

inline std::set<Label> record_labels(const std::vector<StreamRecord>& records) {
  std::set<Label> labels;
  for (const StreamRecord& r : records) {
    labels.insert(r.edge.label_u());
    labels.insert(r.edge.label_v());
  }
  return labels;
}

inline std::uint64_t distinct_vertices(const std::vector<StreamRecord>& records) {
  std::set<VertexId> seen;
  for (const StreamRecord& r : records) {
    seen.insert(r.edge.u());
    seen.insert(r.edge.v());
  }
  return seen.size();
}

}  // namespace detail

// Runs the full partition pipeline over in-memory inputs: build the trie from
// the workload, filter motifs, replay the stream in the configured order, and
// route edges to the configured allocator. Loom sends immediate edges through
// LDG and evictions through equal opportunism, then flushes the residual
// window oldest-first.
inline RunResult run_partition_on(const std::vector<StreamRecord>& base_records,
                                  const Workload& workload, const RunConfig& cfg) {
  cfg.validate();
  const std::vector<StreamRecord> records =
      order_stream(base_records, cfg.ordering, substream_seed(cfg.seed, "ordering"));

  std::set<Label> labels = detail::record_labels(records);
  for (const Label& l : workload_labels(workload)) labels.insert(l);
  const PrimeConfig pcfg =
      make_prime_config(labels, cfg.prime, substream_seed(cfg.seed, "residues"));

  const std::uint64_t total_vertices = detail::distinct_vertices(records);
  const double capacity =
      cfg.capacity > 0.0
          ? cfg.capacity
          : cfg.balance_bound * static_cast<double>(total_vertices) / static_cast<double>(cfg.k);

  RunResult result{Partitioning(cfg.k, capacity, cfg.balance_bound), RunMetrics{}};
  Partitioning& part = result.partitioning;
  RunMetrics& metrics = result.metrics;
  metrics.residue_collision = pcfg.residue_collision;

  AllocatorConfig acfg{cfg.k, capacity, cfg.alpha, cfg.balance_bound, cfg.gamma,
                       substream_seed(cfg.seed, "hash")};

  std::optional<Trie> motifs;
  std::optional<StreamMatcher> matcher;
  if (cfg.algorithm == Algorithm::loom) {
    Trie trie(pcfg);
    for (const auto& [q, freq] : workload.queries) trie.add_query(q.graph, freq);
    motifs.emplace(trie.motif_filter(cfg.support_threshold));
    matcher.emplace(*motifs, cfg.window, cfg.per_vertex_match_cap);
  }

  AdjacencyIndex adj;
  StreamTotals totals;
  std::set<Edge> seen_edges;
  std::set<VertexId> seen_vertices;

  const auto t0 = std::chrono::steady_clock::now();

  auto handle_eviction = [&](const EvictionEvent& ev, bool flushing) {
    if (cfg.adaptive_capacity) {
      const double c = cfg.balance_bound *
                       static_cast<double>(part.total_assigned() + matcher->window_vertex_count()) /
                       static_cast<double>(cfg.k);
      part.set_capacity(std::max(c, 1.0));
      acfg.capacity = part.capacity();
    }
    const EqualOpportunismResult eo =
        equal_opportunism(ev.edge, ev.match_set, *motifs, part, acfg, adj);
    matcher->purge_assigned(eo.assigned_edges);
    (flushing ? metrics.flushed : metrics.evicted) += eo.assigned_edges.size();
    ++metrics.eviction_events;
  };

  std::uint64_t arrival = 0;
  for (const StreamRecord& rec : records) {
    const Edge& e = rec.edge;
    if (!seen_edges.insert(e).second) {
      ++metrics.duplicate_edges;
      continue;
    }
    ++metrics.edges_processed;
    ++totals.edges;
    for (const VertexId v : {e.u(), e.v()}) {
      if (seen_vertices.insert(v).second) ++totals.vertices;
    }
    adj.add_edge(e);

    switch (cfg.algorithm) {
      case Algorithm::hash:
        for (const VertexId v : {e.u(), e.v()}) {
          if (!part.partition_of(v)) part.assign(v, hash_assign(v, acfg));
        }
        ++metrics.immediate_assigned;
        break;
      case Algorithm::ldg:
        ldg_assign(e, adj, part, acfg);
        ++metrics.immediate_assigned;
        break;
      case Algorithm::fennel:
        fennel_assign(e, adj, part, acfg, totals);
        ++metrics.immediate_assigned;
        break;
      case Algorithm::loom: {
        const IngestOutcome outcome = matcher->ingest(StreamEdge{e, arrival});
        if (outcome.kind == IngestOutcome::Kind::ImmediateAssign) {
          ldg_assign(e, adj, part, acfg);
          ++metrics.immediate_assigned;
        } else if (outcome.kind == IngestOutcome::Kind::BufferedWithEviction) {
          handle_eviction(*outcome.eviction, /*flushing=*/false);
        }
        if (cfg.stats_every != 0 && cfg.stats_out != nullptr &&
            (arrival + 1) % cfg.stats_every == 0) {
          const MatcherStats s = matcher->stats();
          *cfg.stats_out << "{\"window_fill\":" << s.window_fill
                         << ",\"vertices_indexed\":" << s.vertices_indexed
                         << ",\"matches\":" << s.matches
                         << ",\"max_match_edges\":" << s.max_match_edges << "}\n";
        }
        break;
      }
    }
    ++arrival;
  }

  if (cfg.algorithm == Algorithm::loom) {
    while (!matcher->window_empty()) {
      handle_eviction(matcher->evict_oldest(), /*flushing=*/true);
    }
    metrics.overflow_events = matcher->overflow_events();
    metrics.matches_by_depth = matcher->matches_by_depth();
  }

  const auto t1 = std::chrono::steady_clock::now();
  metrics.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  if (metrics.edges_processed > 0) {
    metrics.ms_per_10k_edges =
        metrics.elapsed_ms * 10000.0 / static_cast<double>(metrics.edges_processed);
  }
  metrics.partition_sizes = part.sizes();
  metrics.imbalance = part.imbalance();
  metrics.vertices_assigned = part.total_assigned();
  return result;
}

inline RunResult run_partition(const RunConfig& cfg) {
  const std::vector<StreamRecord> records = read_stream_records(cfg.graph_path);
  const Workload workload = parse_workload(cfg.workload_path);
  return run_partition_on(records, workload, cfg);
}

}  // namespace loom
