#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <vector>

#include "loom/graph.hpp"
#include "loom/signature.hpp"

namespace loom {

// One node of the traversal-pattern summary trie: a signature-distinct
// connected sub-graph of the workload's query graphs. Children are keyed by
// the factor delta that grows the parent's signature into the child's.
struct TrieNode {
  std::uint32_t id = 0;
  std::uint32_t depth = 0;  // edge count of the represented graph
  LabelledGraph exemplar;   // first graph encountered; diagnostics/oracles only
  FactorMultiset signature;
  double hit_weight = 0.0;  // sum of frequencies of queries containing this sub-graph
  std::map<FactorMultiset, TrieNode*> children;
  std::vector<TrieNode*> parents;  // insertion order, duplicate-free

  bool has_parent(const TrieNode* p) const {
    return std::find(parents.begin(), parents.end(), p) != parents.end();
  }
};

// DAG of all connected sub-graphs (up to signature equality) of the query
// graphs in a workload, each carrying a support value. Built once per run,
// then filtered down to motifs and frozen.
class Trie {
 public:
  explicit Trie(PrimeConfig cfg) : cfg_(std::move(cfg)) {
    nodes_.push_back(std::make_unique<TrieNode>());  // root: the empty graph
  }

  const PrimeConfig& prime_config() const { return cfg_; }
  const TrieNode* root() const { return nodes_.front().get(); }
  double total_weight() const { return total_weight_; }
  std::size_t node_count() const { return nodes_.size(); }
  const std::vector<std::unique_ptr<TrieNode>>& nodes() const { return nodes_; }

  double support(const TrieNode& n) const {
    return total_weight_ > 0 ? n.hit_weight / total_weight_ : 0.0;
  }

  // Recursively adds every connected sub-graph of q. Support is credited at
  // most once per query per signature class; expansion is memoised per edge
  // set so each connected subset of q is expanded exactly once regardless of
  // the order its edges were discovered in.
  void add_query(const LabelledGraph& q, double frequency) {
    if (frequency <= 0) throw error(errc::invalid_argument, "query frequency must be positive");
    if (q.edge_count() == 0) throw error(errc::invalid_argument, "query graph has no edges");
    if (!is_connected(q)) throw error(errc::disconnected_input, "query graph is not connected");
    total_weight_ += frequency;
    nodes_.front()->hit_weight += frequency;

    std::set<std::vector<Edge>> expanded;
    std::set<const TrieNode*> credited;
    const std::vector<Edge> qedges(q.edges().begin(), q.edges().end());
    std::vector<Edge> empty;
    for (const Edge& e : qedges) {
      grow_into(nodes_.front().get(), e, empty, FactorMultiset{}, qedges, frequency, expanded,
                credited);
    }
  }

  // Sub-DAG of nodes with support >= threshold. Anti-monotonicity of support
  // makes the result downward-closed from the root.
  Trie motif_filter(double threshold) const {
    if (!(threshold > 0.0 && threshold <= 1.0)) {
      throw error(errc::invalid_argument, "support threshold must be in (0, 1]");
    }
    Trie out(cfg_);
    out.total_weight_ = total_weight_;
    out.nodes_.front()->hit_weight = nodes_.front()->hit_weight;
    std::map<const TrieNode*, TrieNode*> remap;
    remap.emplace(nodes_.front().get(), out.nodes_.front().get());
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      const TrieNode* n = nodes_[i].get();
      if (support(*n) < threshold) continue;
      auto copy = std::make_unique<TrieNode>();
      copy->id = static_cast<std::uint32_t>(out.nodes_.size());
      copy->depth = n->depth;
      copy->exemplar = n->exemplar;
      copy->signature = n->signature;
      copy->hit_weight = n->hit_weight;
      remap.emplace(n, copy.get());
      out.index_.emplace(copy->signature, copy.get());
      out.nodes_.push_back(std::move(copy));
    }
    for (const auto& owned : nodes_) {
      auto self = remap.find(owned.get());
      if (self == remap.end()) continue;
      TrieNode* new_node = self->second;
      for (const auto& [delta, child] : owned->children) {
        auto it = remap.find(child);
        if (it == remap.end()) continue;
        new_node->children.emplace(delta, it->second);
        if (!it->second->has_parent(new_node)) it->second->parents.push_back(new_node);
      }
    }
    return out;
  }

  const TrieNode* find(const FactorMultiset& signature) const {
    auto it = index_.find(signature);
    return it == index_.end() ? nullptr : it->second;
  }

  static const TrieNode* find_child(const TrieNode& node, const FactorMultiset& delta) {
    auto it = node.children.find(delta);
    return it == node.children.end() ? nullptr : it->second;
  }

  // Depth-1 node matching the signature of the single-edge graph {e}, if any.
  // On a motif-filtered trie this decides whether e can ever participate in a
  // motif match.
  const TrieNode* single_edge_motif(const Edge& e) const {
    FactorMultiset sig;
    sig.add_edge_factor(edge_factor(cfg_, e.label_u(), e.label_v()));
    sig.add_degree_factor(degree_increment_factor(cfg_, e.label_u(), 1));
    sig.add_degree_factor(degree_increment_factor(cfg_, e.label_v(), 1));
    const TrieNode* n = find(sig);
    return (n != nullptr && n->depth == 1) ? n : nullptr;
  }

  Trie(Trie&&) = default;
  Trie& operator=(Trie&&) = default;
  Trie(const Trie&) = delete;
  Trie& operator=(const Trie&) = delete;

 private:
  void grow_into(TrieNode* parent, const Edge& e, const std::vector<Edge>& g,
                 const FactorMultiset& sig_g, const std::vector<Edge>& qedges, double frequency,
                 std::set<std::vector<Edge>>& expanded, std::set<const TrieNode*>& credited) {
    const FactorMultiset delta = delta_factors(cfg_, e, std::span<const Edge>(g));
    const FactorMultiset sig = sig_g.united(delta);

    std::vector<Edge> g2 = g;
    g2.insert(std::upper_bound(g2.begin(), g2.end(), e), e);

    TrieNode* node;
    auto it = index_.find(sig);
    if (it != index_.end()) {
      node = it->second;
    } else {
      auto fresh = std::make_unique<TrieNode>();
      fresh->id = static_cast<std::uint32_t>(nodes_.size());
      fresh->depth = static_cast<std::uint32_t>(g2.size());
      fresh->exemplar = graph_from_edges(g2);
      fresh->signature = sig;
      node = fresh.get();
      index_.emplace(sig, node);
      nodes_.push_back(std::move(fresh));
    }
    parent->children.emplace(delta, node);
    if (!node->has_parent(parent)) node->parents.push_back(parent);
    if (credited.insert(node).second) node->hit_weight += frequency;

    if (!expanded.insert(g2).second) return;
    for (const Edge& next : qedges) {
      if (std::binary_search(g2.begin(), g2.end(), next)) continue;
      bool incident = false;
      for (const Edge& have : g2) {
        if (have.touches(next.u()) || have.touches(next.v())) {
          incident = true;
          break;
        }
      }
      if (incident) grow_into(node, next, g2, sig, qedges, frequency, expanded, credited);
    }
  }

  PrimeConfig cfg_;
  std::vector<std::unique_ptr<TrieNode>> nodes_;
  std::map<FactorMultiset, TrieNode*> index_;
  double total_weight_ = 0.0;
};

}  // namespace loom
