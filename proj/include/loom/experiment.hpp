#pragma once

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "loom/pipeline.hpp"

namespace loom {

// Formats doubles compactly and reproducibly for CSV output.
inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

struct ExperimentSpec {
  std::string dataset = "dataset";
  std::vector<StreamRecord> records;
  Workload workload;
  std::vector<StreamOrder> orderings = {StreamOrder::bfs};
  std::vector<std::uint32_t> ks = {8};
  std::vector<Algorithm> algorithms = {Algorithm::hash, Algorithm::ldg, Algorithm::fennel,
                                       Algorithm::loom};
  std::vector<std::size_t> windows = {10000};  // applies to loom only
  double support_threshold = 0.40;
  std::uint32_t prime = 251;
  double alpha = 2.0 / 3.0;
  double balance_bound = 1.1;
  double gamma = 1.5;
  double capacity = 0.0;
  std::uint64_t seed = 0;
  bool count_automorphisms = false;
  // Timing figures vary between runs; they are emitted only on request so
  // that identical configs produce byte-identical CSVs by default.
  bool timing = false;
};

struct ExperimentRow {
  std::string dataset;
  StreamOrder ordering;
  std::uint32_t k = 0;
  Algorithm algorithm = Algorithm::hash;
  std::size_t window = 0;  // 0 for window-less baselines
  double ipt = 0.0;
  double relative_vs_hash = 0.0;  // percent
  double imbalance = 0.0;
  double ms_per_10k_edges = 0.0;
  RunMetrics metrics;
};

// Runs the full comparison matrix: per (ordering, k) group every requested
// algorithm (and window size, for loom) is run on the same stream, evaluated
// against the workload, and reported relative to the Hash baseline of the
// same group. Embeddings are computed once per dataset and reused.
inline std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  const LabelledGraph graph = graph_from_records(spec.records);
  const EmbeddingIndex embeddings =
      build_embedding_index(graph, spec.workload, spec.count_automorphisms);

  auto base_config = [&](StreamOrder ordering, std::uint32_t k, Algorithm alg,
                         std::size_t window) {
    RunConfig cfg;
    cfg.ordering = ordering;
    cfg.k = k;
    cfg.algorithm = alg;
    cfg.window = window;
    cfg.support_threshold = spec.support_threshold;
    cfg.prime = spec.prime;
    cfg.alpha = spec.alpha;
    cfg.balance_bound = spec.balance_bound;
    cfg.gamma = spec.gamma;
    cfg.capacity = spec.capacity;
    cfg.seed = spec.seed;
    return cfg;
  };

  std::vector<ExperimentRow> rows;
  for (const StreamOrder ordering : spec.orderings) {
    for (const std::uint32_t k : spec.ks) {
      const std::size_t default_window = spec.windows.empty() ? 10000 : spec.windows.front();
      const RunResult hash_run = run_partition_on(
          spec.records, spec.workload, base_config(ordering, k, Algorithm::hash, default_window));
      const double hash_ipt = ipt_from_index(embeddings, hash_run.partitioning).total_weighted;

      for (const Algorithm alg : spec.algorithms) {
        const std::vector<std::size_t> windows =
            alg == Algorithm::loom ? spec.windows : std::vector<std::size_t>{default_window};
        for (const std::size_t window : windows) {
          const RunResult run =
              alg == Algorithm::hash
                  ? hash_run
                  : run_partition_on(spec.records, spec.workload,
                                     base_config(ordering, k, alg, window));
          ExperimentRow row;
          row.dataset = spec.dataset;
          row.ordering = ordering;
          row.k = k;
          row.algorithm = alg;
          row.window = alg == Algorithm::loom ? window : 0;
          row.ipt = ipt_from_index(embeddings, run.partitioning).total_weighted;
          row.relative_vs_hash = hash_ipt > 0.0 ? 100.0 * row.ipt / hash_ipt : 0.0;
          row.imbalance = run.metrics.imbalance;
          row.ms_per_10k_edges = run.metrics.ms_per_10k_edges;
          row.metrics = run.metrics;
          rows.push_back(std::move(row));
          if (alg == Algorithm::hash) break;  // one hash row per group
        }
      }
    }
  }
  return rows;
}

inline void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows,
                                 bool timing) {
  out << "dataset,ordering,k,algorithm,window,ipt,relative_ipt_vs_hash,imbalance,"
         "ms_per_10k_edges\n";
  for (const ExperimentRow& r : rows) {
    out << r.dataset << ',' << to_string(r.ordering) << ',' << r.k << ',' << to_string(r.algorithm)
        << ',';
    if (r.window != 0) out << r.window;
    out << ',' << format_double(r.ipt) << ',' << format_double(r.relative_vs_hash) << ','
        << format_double(r.imbalance) << ',';
    if (timing) out << format_double(r.ms_per_10k_edges);
    out << '\n';
  }
}

}  // namespace loom
