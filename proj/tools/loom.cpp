// loom: workload-aware streaming graph partitioner and evaluation harness.
//
// Subcommands: order, partition, evaluate, trie, collision-sim, generate,
// experiment. See README.md for the file formats.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "loom/loom.hpp"

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw loom::error(loom::errc::io, "cannot write " + path.string());
  return out;
}

void warn_residue_collision(const loom::PrimeConfig& cfg) {
  if (cfg.residue_collision) {
    std::cerr << "warning: two labels drew the same residue under p=" << cfg.p
              << "; factor collisions are more likely\n";
  }
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

nlohmann::json metrics_to_json(const loom::RunMetrics& m) {
  nlohmann::json j;
  j["edges_processed"] = m.edges_processed;
  j["duplicate_edges"] = m.duplicate_edges;
  j["immediate_assigned"] = m.immediate_assigned;
  j["evicted"] = m.evicted;
  j["flushed"] = m.flushed;
  j["eviction_events"] = m.eviction_events;
  j["overflow_events"] = m.overflow_events;
  j["ms_per_10k_edges"] = m.ms_per_10k_edges;
  j["elapsed_ms"] = m.elapsed_ms;
  j["partition_sizes"] = m.partition_sizes;
  j["imbalance"] = m.imbalance;
  j["vertices_assigned"] = m.vertices_assigned;
  nlohmann::json depths = nlohmann::json::object();
  for (const auto& [depth, count] : m.matches_by_depth) {
    depths[std::to_string(depth)] = count;
  }
  j["matches_by_depth"] = depths;
  return j;
}

int run(int argc, char** argv) {
  CLI::App app{"workload-aware streaming graph partitioner"};
  app.require_subcommand(1);
  app.set_config("--config", "", "read options from an INI file (sections per subcommand)");

  // ---- order ----
  auto* order_cmd = app.add_subcommand("order", "permute an edge stream into a replay order");
  std::string order_input, order_output, order_mode = "random";
  std::uint64_t order_seed = 0;
  order_cmd->add_option("--input", order_input, "edge stream file")->required();
  order_cmd->add_option("--output", order_output, "output file")->required();
  order_cmd->add_option("--ordering", order_mode, "bfs|dfs|random|as-is");
  order_cmd->add_option("--seed", order_seed, "root seed")->required();
  order_cmd->callback([&] {
    auto records = loom::read_stream_records(order_input);
    records = loom::order_stream(std::move(records), loom::parse_stream_order(order_mode),
                                 loom::substream_seed(order_seed, "ordering"));
    loom::write_stream_records(order_output, records);
    std::cerr << "wrote " << records.size() << " edges to " << order_output << "\n";
  });

  // ---- partition ----
  auto* part_cmd = app.add_subcommand("partition", "stream a graph into k partitions");
  loom::RunConfig run_cfg;
  std::string part_graph, part_workload, part_ordering = "as-is", part_algorithm = "loom";
  std::string part_assignment = "assignment.tsv", part_metrics;
  std::size_t stats_every = 0;
  part_cmd->add_option("--graph", part_graph, "edge stream file")->required();
  part_cmd->add_option("--workload", part_workload, "workload JSON")->required();
  part_cmd->add_option("--ordering", part_ordering, "bfs|dfs|random|as-is");
  part_cmd->add_option("--algorithm", part_algorithm, "hash|ldg|fennel|loom");
  part_cmd->add_option("--k", run_cfg.k, "partition count");
  part_cmd->add_option("--window", run_cfg.window, "window size t in edges");
  part_cmd->add_option("--threshold", run_cfg.support_threshold, "motif support threshold");
  part_cmd->add_option("--p", run_cfg.prime, "signature prime");
  part_cmd->add_option("--alpha", run_cfg.alpha, "ration aggression");
  part_cmd->add_option("--balance-bound", run_cfg.balance_bound, "max imbalance b");
  part_cmd->add_option("--gamma", run_cfg.gamma, "Fennel exponent");
  part_cmd->add_option("--capacity", run_cfg.capacity, "partition capacity C (0 = b*|V|/k)");
  part_cmd->add_flag("--adaptive-capacity", run_cfg.adaptive_capacity,
                     "recompute C per eviction from assigned+window vertices");
  part_cmd->add_option("--match-cap", run_cfg.per_vertex_match_cap, "matches per vertex cap");
  part_cmd->add_option("--seed", run_cfg.seed, "root seed")->required();
  part_cmd->add_option("--assignment-out", part_assignment, "assignment file to write");
  part_cmd->add_option("--metrics-out", part_metrics, "metrics JSON file (default: stdout)");
  part_cmd->add_option("--stats-every", stats_every, "emit matchlist-stats every N edges");
  part_cmd->callback([&] {
    run_cfg.graph_path = part_graph;
    run_cfg.workload_path = part_workload;
    run_cfg.ordering = loom::parse_stream_order(part_ordering);
    run_cfg.algorithm = loom::parse_algorithm(part_algorithm);
    run_cfg.stats_every = stats_every;
    run_cfg.stats_out = stats_every != 0 ? &std::cerr : nullptr;
    const loom::RunResult result = loom::run_partition(run_cfg);
    loom::write_assignment(std::filesystem::path(part_assignment), result.partitioning);
    if (result.metrics.residue_collision) {
      std::cerr << "warning: residue collision in label mapping (p=" << run_cfg.prime << ")\n";
    }
    const nlohmann::json metrics = metrics_to_json(result.metrics);
    if (part_metrics.empty()) {
      std::cout << metrics.dump(2) << "\n";
    } else {
      open_out(part_metrics) << metrics.dump(2) << "\n";
    }
  });

  // ---- evaluate ----
  auto* eval_cmd = app.add_subcommand("evaluate", "count inter-partition traversals of a workload");
  std::string eval_graph, eval_assignment, eval_workload, eval_baseline, eval_out;
  bool eval_autos = false;
  eval_cmd->add_option("--graph", eval_graph, "edge stream file")->required();
  eval_cmd->add_option("--assignment", eval_assignment, "vertex<TAB>partition file")->required();
  eval_cmd->add_option("--workload", eval_workload, "workload JSON")->required();
  eval_cmd->add_option("--baseline", eval_baseline, "baseline assignment for relative ipt");
  eval_cmd->add_option("--out", eval_out, "CSV output (default: stdout)");
  eval_cmd->add_flag("--count-automorphisms", eval_autos, "count automorphic embeddings");
  eval_cmd->callback([&] {
    const loom::LabelledGraph graph = loom::load_graph(eval_graph);
    const loom::Workload workload = loom::parse_workload(eval_workload);
    const auto assignment = loom::read_assignment(eval_assignment);
    const loom::Partitioning part = loom::partitioning_from_assignment(assignment);
    const loom::EmbeddingIndex index = loom::build_embedding_index(graph, workload, eval_autos);
    for (const auto& [v, label] : graph.vertices()) {
      if (!part.partition_of(v)) {
        throw loom::error(loom::errc::unassigned_vertex,
                          "vertex " + std::to_string(v) + " has no partition");
      }
    }
    loom::IptReport report = loom::ipt_from_index(index, part);
    if (!eval_baseline.empty()) {
      const loom::Partitioning base =
          loom::partitioning_from_assignment(loom::read_assignment(eval_baseline));
      report.relative_to_baseline =
          loom::relative_ipt(report, loom::ipt_from_index(index, base));
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!eval_out.empty()) {
      file = open_out(eval_out);
      out = &file;
    }
    loom::write_ipt_csv(*out, report);
  });

  // ---- trie ----
  auto* trie_cmd = app.add_subcommand("trie", "dump the workload's pattern trie as JSON lines");
  std::string trie_workload, trie_out;
  double trie_threshold = 0.0;
  std::uint32_t trie_p = 251;
  std::uint64_t trie_seed = 0;
  trie_cmd->add_option("--workload", trie_workload, "workload JSON")->required();
  trie_cmd->add_option("--threshold", trie_threshold, "filter to motifs at this support");
  trie_cmd->add_option("--p", trie_p, "signature prime");
  trie_cmd->add_option("--seed", trie_seed, "root seed");
  trie_cmd->add_option("--out", trie_out, "output file (default: stdout)");
  trie_cmd->callback([&] {
    const loom::Workload workload = loom::parse_workload(trie_workload);
    const loom::PrimeConfig pcfg = loom::make_prime_config(
        loom::workload_labels(workload), trie_p, loom::substream_seed(trie_seed, "residues"));
    warn_residue_collision(pcfg);
    loom::Trie trie(pcfg);
    for (const auto& [q, freq] : workload.queries) trie.add_query(q.graph, freq);
    std::optional<loom::Trie> filtered;
    const loom::Trie* dump = &trie;
    if (trie_threshold > 0.0) {
      filtered.emplace(trie.motif_filter(trie_threshold));
      dump = &*filtered;
    }
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!trie_out.empty()) {
      file = open_out(trie_out);
      out = &file;
    }
    for (const auto& node : dump->nodes()) {
      nlohmann::json j;
      j["depth"] = node->depth;
      j["support"] = dump->support(*node);
      j["factor_multiset"] = node->signature.expanded();
      j["child_count"] = node->children.size();
      j["parent_count"] = node->parents.size();
      *out << j.dump() << '\n';
    }
  });

  // ---- collision-sim ----
  auto* coll_cmd =
      app.add_subcommand("collision-sim", "collision probability sweep over p choices");
  std::string coll_edges = "8,12,16", coll_out;
  std::uint64_t coll_pmin = 2, coll_pmax = 317;
  double coll_cmax = 0.05;
  bool coll_all_p = false;
  coll_cmd->add_option("--edges", coll_edges, "comma-separated edge counts");
  coll_cmd->add_option("--p-min", coll_pmin, "lowest p");
  coll_cmd->add_option("--p-max", coll_pmax, "highest p");
  coll_cmd->add_option("--c-max", coll_cmax, "acceptable collision fraction");
  coll_cmd->add_flag("--all-p", coll_all_p, "sweep every integer p, not just primes");
  coll_cmd->add_option("--out", coll_out, "CSV output (default: stdout)");
  coll_cmd->callback([&] {
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!coll_out.empty()) {
      file = open_out(coll_out);
      out = &file;
    }
    *out << "edges,p,c_max,probability\n";
    for (const std::string& tok : split_csv(coll_edges)) {
      const auto edges = static_cast<std::uint64_t>(std::stoull(tok));
      for (std::uint64_t p = coll_pmin; p <= coll_pmax; ++p) {
        if (!coll_all_p && !loom::is_prime(p)) continue;
        *out << edges << ',' << p << ',' << loom::format_double(coll_cmax) << ','
             << loom::format_double(loom::collision_probability(edges, p, coll_cmax)) << '\n';
      }
    }
  });

  // ---- generate ----
  auto* gen_cmd = app.add_subcommand("generate", "synthesise a labelled graph plus workload");
  loom::SyntheticSpec gen_spec;
  std::string gen_graph = "graph.txt", gen_workload = "workload.json",
              gen_manifest = "manifest.json";
  gen_cmd->add_option("--labels", gen_spec.label_count, "label alphabet size (>= 2)");
  gen_cmd->add_option("--vertices", gen_spec.background_vertices, "background vertex count");
  gen_cmd->add_option("--avg-degree", gen_spec.background_avg_degree, "background average degree");
  gen_cmd->add_option("--skew", gen_spec.workload_skew, "workload frequency skew");
  gen_cmd->add_option("--plant", gen_spec.planted_dominant, "instances of the dominant query");
  gen_cmd->add_option("--bridges", gen_spec.bridges_per_instance, "bridge edges per instance");
  gen_cmd->add_option("--seed", gen_spec.seed, "root seed")->required();
  gen_cmd->add_option("--graph-out", gen_graph, "graph file to write");
  gen_cmd->add_option("--workload-out", gen_workload, "workload JSON to write");
  gen_cmd->add_option("--manifest-out", gen_manifest, "manifest JSON to write");
  gen_cmd->callback([&] {
    const loom::Synthetic s = loom::generate_synthetic(gen_spec);
    loom::write_stream_records(gen_graph, s.records);
    loom::write_workload(gen_workload, s.workload);
    open_out(gen_manifest) << loom::synthetic_manifest_json(gen_spec, s) << "\n";
    std::cerr << "generated " << s.vertex_count << " vertices, " << s.edge_count << " edges\n";
  });

  // ---- experiment ----
  auto* exp_cmd = app.add_subcommand("experiment", "run a comparison matrix and emit CSV");
  std::string exp_graph, exp_workload, exp_dataset = "dataset", exp_out;
  std::string exp_orderings = "bfs", exp_algorithms = "hash,ldg,fennel,loom";
  std::string exp_ks = "8", exp_windows = "10000";
  loom::ExperimentSpec exp_spec;
  bool exp_timing = false;
  exp_cmd->add_option("--graph", exp_graph, "edge stream file")->required();
  exp_cmd->add_option("--workload", exp_workload, "workload JSON")->required();
  exp_cmd->add_option("--dataset", exp_dataset, "dataset name for the CSV");
  exp_cmd->add_option("--orderings", exp_orderings, "comma-separated orderings");
  exp_cmd->add_option("--algorithms", exp_algorithms, "comma-separated algorithms");
  exp_cmd->add_option("--k", exp_ks, "comma-separated partition counts");
  exp_cmd->add_option("--windows", exp_windows, "comma-separated window sizes (loom)");
  exp_cmd->add_option("--threshold", exp_spec.support_threshold, "motif support threshold");
  exp_cmd->add_option("--p", exp_spec.prime, "signature prime");
  exp_cmd->add_option("--alpha", exp_spec.alpha, "ration aggression");
  exp_cmd->add_option("--balance-bound", exp_spec.balance_bound, "max imbalance b");
  exp_cmd->add_option("--gamma", exp_spec.gamma, "Fennel exponent");
  exp_cmd->add_option("--capacity", exp_spec.capacity, "partition capacity C");
  exp_cmd->add_option("--seed", exp_spec.seed, "root seed")->required();
  exp_cmd->add_flag("--timing", exp_timing, "include ms_per_10k_edges (non-reproducible)");
  exp_cmd->add_option("--out", exp_out, "CSV output (default: stdout)");
  exp_cmd->callback([&] {
    exp_spec.dataset = exp_dataset;
    exp_spec.records = loom::read_stream_records(exp_graph);
    exp_spec.workload = loom::parse_workload(exp_workload);
    exp_spec.orderings.clear();
    for (const auto& s : split_csv(exp_orderings)) {
      exp_spec.orderings.push_back(loom::parse_stream_order(s));
    }
    exp_spec.algorithms.clear();
    for (const auto& s : split_csv(exp_algorithms)) {
      exp_spec.algorithms.push_back(loom::parse_algorithm(s));
    }
    exp_spec.ks.clear();
    for (const auto& s : split_csv(exp_ks)) {
      exp_spec.ks.push_back(static_cast<std::uint32_t>(std::stoul(s)));
    }
    exp_spec.windows.clear();
    for (const auto& s : split_csv(exp_windows)) {
      exp_spec.windows.push_back(static_cast<std::size_t>(std::stoull(s)));
    }
    exp_spec.timing = exp_timing;
    const auto rows = loom::run_experiment(exp_spec);
    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!exp_out.empty()) {
      file = open_out(exp_out);
      out = &file;
    }
    loom::write_experiment_csv(*out, rows, exp_timing);
  });

  CLI11_PARSE(app, argc, argv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const loom::error& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
