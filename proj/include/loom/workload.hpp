#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "loom/graph.hpp"
#include "loom/isomorphism.hpp"

namespace loom {

struct QueryPattern {
  std::string name;
  LabelledGraph graph;  // small, connected
};

// A pattern-matching query workload: patterns with positive relative
// frequencies, fixed and known for the whole run.
struct Workload {
  std::vector<std::pair<QueryPattern, double>> queries;
};

inline constexpr std::size_t kDefaultMaxQueryEdges = 10;

inline void validate_pattern(const QueryPattern& q, std::size_t max_edges) {
  if (q.graph.edge_count() == 0) {
    throw error(errc::invalid_argument, "query '" + q.name + "' has no edges");
  }
  if (q.graph.edge_count() > max_edges) {
    throw error(errc::invalid_argument,
                "query '" + q.name + "' exceeds the " + std::to_string(max_edges) +
                    "-edge bound");
  }
  if (!is_connected(q.graph)) {
    throw error(errc::disconnected_input, "query '" + q.name + "' is not connected");
  }
}

// Workload file format:
//   {"queries":[{"name":"q0","freq":2,"edges":[[0,"a",1,"b"], ...]}, ...]}
inline Workload parse_workload_json(const std::string& text,
                                    std::size_t max_edges = kDefaultMaxQueryEdges) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& ex) {
    throw error(errc::parse, std::string("workload parse error: ") + ex.what());
  }
  Workload wl;
  if (!doc.contains("queries") || !doc["queries"].is_array()) {
    throw error(errc::parse, "workload parse error: missing 'queries' array");
  }
  std::size_t index = 0;
  for (const auto& jq : doc["queries"]) {
    ++index;
    try {
      QueryPattern q;
      q.name = jq.value("name", "q" + std::to_string(index - 1));
      const double freq = jq.at("freq").get<double>();
      if (!(freq > 0)) {
        throw error(errc::parse, "frequency must be positive");
      }
      for (const auto& je : jq.at("edges")) {
        if (!je.is_array() || je.size() != 4) {
          throw error(errc::parse, "edge entries must be [u, label_u, v, label_v]");
        }
        q.graph.add_edge(Edge(je[0].get<VertexId>(), je[1].get<std::string>(),
                              je[2].get<VertexId>(), je[3].get<std::string>()));
      }
      validate_pattern(q, max_edges);
      wl.queries.emplace_back(std::move(q), freq);
    } catch (const error&) {
      throw;
    } catch (const std::exception& ex) {
      throw error(errc::parse,
                  "workload parse error in query #" + std::to_string(index) + ": " + ex.what());
    }
  }
  if (wl.queries.empty()) throw error(errc::parse, "workload has no queries");
  return wl;
}

inline Workload parse_workload(const std::filesystem::path& path,
                               std::size_t max_edges = kDefaultMaxQueryEdges) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open workload file " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return parse_workload_json(text, max_edges);
  } catch (const error& ex) {
    throw error(ex.code(), path.string() + ": " + ex.what());
  }
}

inline std::string workload_to_json(const Workload& wl) {
  nlohmann::json doc;
  doc["queries"] = nlohmann::json::array();
  for (const auto& [q, freq] : wl.queries) {
    nlohmann::json jq;
    jq["name"] = q.name;
    jq["freq"] = freq;
    jq["edges"] = nlohmann::json::array();
    for (const Edge& e : q.graph.edges()) {
      jq["edges"].push_back({e.u(), e.label_u(), e.v(), e.label_v()});
    }
    doc["queries"].push_back(std::move(jq));
  }
  return doc.dump(2);
}

inline void write_workload(const std::filesystem::path& path, const Workload& wl) {
  std::ofstream out(path);
  if (!out) throw error(errc::io, "cannot write workload file " + path.string());
  out << workload_to_json(wl) << '\n';
}

inline std::set<Label> workload_labels(const Workload& wl) {
  std::set<Label> labels;
  for (const auto& [q, freq] : wl.queries) {
    for (const auto& [v, l] : q.graph.vertices()) labels.insert(l);
  }
  return labels;
}

struct QueryIpt {
  std::string name;
  std::uint64_t embeddings = 0;
  std::uint64_t ipt = 0;        // cut-edge traversals over all embeddings
  double weighted_ipt = 0.0;    // frequency * ipt
};

struct IptReport {
  std::vector<QueryIpt> per_query;
  double total_weighted = 0.0;
  std::optional<double> relative_to_baseline;  // percent, set by relative_ipt
};

// Embeddings materialised as edge-image lists, reusable across partitionings
// of the same graph (embeddings do not depend on the assignment).
struct EmbeddingIndex {
  struct PerQuery {
    std::string name;
    double frequency = 0.0;
    std::vector<std::vector<std::pair<VertexId, VertexId>>> images;
  };
  std::vector<PerQuery> queries;
};

inline EmbeddingIndex build_embedding_index(const LabelledGraph& G, const Workload& wl,
                                            bool count_automorphisms = false) {
  EmbeddingIndex idx;
  for (const auto& [q, freq] : wl.queries) {
    EmbeddingIndex::PerQuery pq;
    pq.name = q.name;
    pq.frequency = freq;
    for (const Embedding& emb : enumerate_embeddings(G, q.graph, count_automorphisms)) {
      pq.images.push_back(detail::edge_image(q.graph, emb.mapping));
    }
    idx.queries.push_back(std::move(pq));
  }
  return idx;
}

inline IptReport ipt_from_index(const EmbeddingIndex& idx, const Partitioning& part) {
  IptReport report;
  for (const auto& pq : idx.queries) {
    QueryIpt row;
    row.name = pq.name;
    row.embeddings = pq.images.size();
    for (const auto& image : pq.images) {
      for (const auto& [u, v] : image) {
        const auto pu = part.partition_of(u);
        const auto pv = part.partition_of(v);
        if (!pu || !pv) {
          throw error(errc::unassigned_vertex,
                      "vertex " + std::to_string(pu ? v : u) + " has no partition");
        }
        if (*pu != *pv) ++row.ipt;
      }
    }
    row.weighted_ipt = pq.frequency * static_cast<double>(row.ipt);
    report.total_weighted += row.weighted_ipt;
    report.per_query.push_back(std::move(row));
  }
  return report;
}

// Counts inter-partition traversals: one per cut edge per embedding per unit
// frequency. Every data-graph vertex must be assigned.
inline IptReport count_ipt(const LabelledGraph& G, const Partitioning& part, const Workload& wl,
                           bool count_automorphisms = false) {
  for (const auto& [v, label] : G.vertices()) {
    if (!part.partition_of(v)) {
      throw error(errc::unassigned_vertex, "vertex " + std::to_string(v) + " has no partition");
    }
  }
  return ipt_from_index(build_embedding_index(G, wl, count_automorphisms), part);
}

inline double relative_ipt(const IptReport& report, const IptReport& baseline) {
  if (baseline.total_weighted <= 0.0) {
    throw error(errc::zero_baseline, "baseline ipt total is zero");
  }
  return 100.0 * report.total_weighted / baseline.total_weighted;
}

namespace detail {
inline std::string format_double_csv(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}
}  // namespace detail

inline void write_ipt_csv(std::ostream& out, const IptReport& report) {
  out << "query,embeddings,ipt,weighted_ipt\n";
  std::uint64_t emb_total = 0, ipt_total = 0;
  for (const QueryIpt& q : report.per_query) {
    out << q.name << ',' << q.embeddings << ',' << q.ipt << ','
        << detail::format_double_csv(q.weighted_ipt) << '\n';
    emb_total += q.embeddings;
    ipt_total += q.ipt;
  }
  out << "total," << emb_total << ',' << ipt_total << ','
      << detail::format_double_csv(report.total_weighted) << '\n';
  if (report.relative_to_baseline) {
    out << "relative_to_baseline_pct,,,"
        << detail::format_double_csv(*report.relative_to_baseline) << '\n';
  }
}

}  // namespace loom
