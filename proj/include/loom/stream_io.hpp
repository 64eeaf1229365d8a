#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "loom/graph.hpp"

namespace loom {

// One non-comment line of an edge-stream file together with its parsed edge.
// The original line text is kept so ordering tools can permute files
// bit-exactly.
struct StreamRecord {
  std::string line;
  Edge edge;
};

// Edge-stream file: one edge per line, whitespace-separated
// `src_id src_label dst_id dst_label`; lines beginning '#' are ignored.
inline std::vector<StreamRecord> parse_stream_text(std::istream& in,
                                                   const std::string& origin = "<stream>") {
  std::vector<StreamRecord> records;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view sv(line);
    const auto first = sv.find_first_not_of(" \t\r");
    if (first == std::string_view::npos || sv[first] == '#') continue;
    std::istringstream ls(line);
    VertexId u, v;
    std::string lu, lv, extra;
    if (!(ls >> u >> lu >> v >> lv)) {
      throw error(errc::parse, origin + ":" + std::to_string(lineno) + ": malformed edge line");
    }
    if (ls >> extra) {
      throw error(errc::parse,
                  origin + ":" + std::to_string(lineno) + ": trailing tokens on edge line");
    }
    try {
      records.push_back({line, Edge(u, lu, v, lv)});
    } catch (const error& ex) {
      throw error(ex.code(), origin + ":" + std::to_string(lineno) + ": " + ex.what());
    }
  }
  return records;
}

inline std::vector<StreamRecord> read_stream_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open graph file " + path.string());
  return parse_stream_text(in, path.string());
}

inline void write_stream_records(const std::filesystem::path& path,
                                 const std::vector<StreamRecord>& records) {
  std::ofstream out(path);
  if (!out) throw error(errc::io, "cannot write stream file " + path.string());
  for (const StreamRecord& r : records) out << r.line << '\n';
}

inline std::string format_edge_line(const Edge& e) {
  return std::to_string(e.u()) + ' ' + e.label_u() + ' ' + std::to_string(e.v()) + ' ' +
         e.label_v();
}

inline LabelledGraph graph_from_records(const std::vector<StreamRecord>& records) {
  LabelledGraph g;
  for (const StreamRecord& r : records) g.add_edge(r.edge);
  return g;
}

inline LabelledGraph load_graph(const std::filesystem::path& path) {
  return graph_from_records(read_stream_records(path));
}

// Assignment file: `vertex_id<TAB>partition_index`, sorted by vertex id.
inline void write_assignment(std::ostream& out, const Partitioning& part) {
  std::map<VertexId, std::uint32_t> sorted(part.assignment().begin(), part.assignment().end());
  for (const auto& [v, p] : sorted) out << v << '\t' << p << '\n';
}

inline void write_assignment(const std::filesystem::path& path, const Partitioning& part) {
  std::ofstream out(path);
  if (!out) throw error(errc::io, "cannot write assignment file " + path.string());
  write_assignment(out, part);
}

inline std::map<VertexId, std::uint32_t> read_assignment(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error(errc::io, "cannot open assignment file " + path.string());
  std::map<VertexId, std::uint32_t> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    VertexId v;
    std::uint32_t p;
    if (!(ls >> v >> p)) {
      throw error(errc::parse,
                  path.string() + ":" + std::to_string(lineno) + ": malformed assignment line");
    }
    out[v] = p;
  }
  return out;
}

// Rebuilds a Partitioning from an assignment file (k inferred when 0).
inline Partitioning partitioning_from_assignment(const std::map<VertexId, std::uint32_t>& assign,
                                                 std::uint32_t k = 0, double balance_bound = 1.1) {
  std::uint32_t maxp = 0;
  for (const auto& [v, p] : assign) maxp = std::max(maxp, p);
  if (k == 0) k = maxp + 1;
  if (maxp >= k) throw error(errc::parse, "assignment references partition out of range");
  Partitioning part(k, static_cast<double>(assign.size()), balance_bound);
  for (const auto& [v, p] : assign) part.assign(v, p);
  return part;
}

}  // namespace loom
