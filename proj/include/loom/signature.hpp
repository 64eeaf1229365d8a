#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <vector>

#include "loom/graph.hpp"
#include "loom/rng.hpp"

namespace loom {

// A residue factor in [1, p]; zero residues are replaced by p, so 0 is never
// a valid factor value.
using Factor = std::uint32_t;

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Per-run residue mapping: every label gets a fixed random value in [1, p).
struct PrimeConfig {
  std::uint32_t p = 251;
  std::uint64_t seed = 0;
  std::map<Label, std::uint32_t> residues;
  // Two distinct labels drew the same residue. Kept as-is (the collision
  // model already prices this); callers may surface a warning.
  bool residue_collision = false;

  std::uint32_t residue_of(const Label& l) const {
    auto it = residues.find(l);
    if (it == residues.end()) throw error(errc::unknown_label, "unknown label '" + l + "'");
    return it->second;
  }
};

inline PrimeConfig make_prime_config(const std::set<Label>& labels, std::uint32_t p,
                                     std::uint64_t seed) {
  if (!is_prime(p)) throw error(errc::non_prime, std::to_string(p) + " is not prime");
  if (labels.empty()) throw error(errc::invalid_argument, "label alphabet is empty");
  PrimeConfig cfg;
  cfg.p = p;
  cfg.seed = seed;
  Rng rng(seed);
  std::set<std::uint32_t> drawn;
  for (const Label& l : labels) {
    const auto r = static_cast<std::uint32_t>(rng.in_range(1, p));
    if (!drawn.insert(r).second) cfg.residue_collision = true;
    cfg.residues.emplace(l, r);
  }
  return cfg;
}

inline Factor edge_factor(const PrimeConfig& cfg, const Label& la, const Label& lb) {
  const std::uint32_t a = cfg.residue_of(la);
  const std::uint32_t b = cfg.residue_of(lb);
  const std::uint32_t d = (a > b ? a - b : b - a) % cfg.p;
  return d == 0 ? cfg.p : d;
}

// Factor for the n-th degree increment of an l-labelled vertex:
// (r(l) + n) mod p, zero mapped to p. degFac of a degree-d vertex is the
// combination of increments n = 1..d.
inline Factor degree_increment_factor(const PrimeConfig& cfg, const Label& l, std::uint64_t n) {
  if (n == 0) throw error(errc::invalid_argument, "degree increment must be >= 1");
  const std::uint64_t v = (cfg.residue_of(l) + n) % cfg.p;
  return v == 0 ? cfg.p : static_cast<Factor>(v);
}

// A signature stored as a multiset of factors. Edge and degree factors are
// kept apart in storage, but equality and ordering compare values only: an
// edge/degree factor collision is a single 2/p event in the collision model.
class FactorMultiset {
 public:
  using Entry = std::pair<Factor, std::uint32_t>;  // value, multiplicity

  void add_edge_factor(Factor f, std::uint32_t count = 1) {
    bump(edge_, f, count);
    bump(merged_, f, count);
  }

  void add_degree_factor(Factor f, std::uint32_t count = 1) {
    bump(degree_, f, count);
    bump(merged_, f, count);
  }

  const std::vector<Entry>& edge_factors() const { return edge_; }
  const std::vector<Entry>& degree_factors() const { return degree_; }
  // Kind-blind (value, multiplicity) view, sorted by value.
  const std::vector<Entry>& values() const { return merged_; }

  std::uint64_t total_count() const {
    std::uint64_t n = 0;
    for (const auto& [v, c] : merged_) n += c;
    return n;
  }

  bool empty() const { return merged_.empty(); }

  // Multiset union (adds multiplicities, kind-aware).
  FactorMultiset united(const FactorMultiset& o) const {
    FactorMultiset r = *this;
    for (const auto& [v, c] : o.edge_) r.add_edge_factor(v, c);
    for (const auto& [v, c] : o.degree_) r.add_degree_factor(v, c);
    return r;
  }

  // Integer-product view of the signature. Only meaningful for small graphs;
  // used by golden tests against worked examples.
  unsigned long long product() const {
    unsigned long long prod = 1;
    for (const auto& [v, c] : merged_) {
      for (std::uint32_t i = 0; i < c; ++i) {
        if (prod > std::numeric_limits<unsigned long long>::max() / v) {
          throw error(errc::invalid_argument, "signature product overflows 64 bits");
        }
        prod *= v;
      }
    }
    return prod;
  }

  std::vector<Factor> expanded() const {
    std::vector<Factor> out;
    for (const auto& [v, c] : merged_) out.insert(out.end(), c, v);
    return out;
  }

  friend bool operator==(const FactorMultiset& a, const FactorMultiset& b) {
    return a.merged_ == b.merged_;
  }
  friend bool operator<(const FactorMultiset& a, const FactorMultiset& b) {
    return a.merged_ < b.merged_;
  }

 private:
  static void bump(std::vector<Entry>& entries, Factor f, std::uint32_t count) {
    auto it = std::lower_bound(entries.begin(), entries.end(), f,
                               [](const Entry& e, Factor x) { return e.first < x; });
    if (it != entries.end() && it->first == f) {
      it->second += count;
    } else {
      entries.insert(it, {f, count});
    }
  }

  std::vector<Entry> edge_, degree_, merged_;
};

// Signature of a whole graph: one edge factor per edge plus degree increment
// factors n = 1..deg(v) per vertex; cardinality is always 3|E|.
inline FactorMultiset graph_signature(const PrimeConfig& cfg, const LabelledGraph& g) {
  FactorMultiset sig;
  for (const Edge& e : g.edges()) {
    sig.add_edge_factor(edge_factor(cfg, e.label_u(), e.label_v()));
  }
  for (const auto& [v, label] : g.vertices()) {
    const std::size_t d = g.degree(v);
    for (std::size_t n = 1; n <= d; ++n) {
      sig.add_degree_factor(degree_increment_factor(cfg, label, n));
    }
  }
  return sig;
}

// Factors contributed by adding edge e to the graph formed by g_edges (which
// must not already contain e): one edge factor plus one degree increment per
// endpoint at its new degree.
inline FactorMultiset delta_factors(const PrimeConfig& cfg, const Edge& e,
                                    std::span<const Edge> g_edges) {
  std::size_t deg_u = 0, deg_v = 0;
  for (const Edge& f : g_edges) {
    if (f == e) throw error(errc::invalid_argument, "edge already present in graph");
    if (f.touches(e.u())) ++deg_u;
    if (f.touches(e.v())) ++deg_v;
  }
  FactorMultiset delta;
  delta.add_edge_factor(edge_factor(cfg, e.label_u(), e.label_v()));
  delta.add_degree_factor(degree_increment_factor(cfg, e.label_u(), deg_u + 1));
  delta.add_degree_factor(degree_increment_factor(cfg, e.label_v(), deg_v + 1));
  return delta;
}

inline FactorMultiset delta_factors(const PrimeConfig& cfg, const Edge& e,
                                    const LabelledGraph& g) {
  if (g.has_edge(e)) throw error(errc::invalid_argument, "edge already present in graph");
  const std::size_t deg_u = g.has_vertex(e.u()) ? g.degree(e.u()) : 0;
  const std::size_t deg_v = g.has_vertex(e.v()) ? g.degree(e.v()) : 0;
  FactorMultiset delta;
  delta.add_edge_factor(edge_factor(cfg, e.label_u(), e.label_v()));
  delta.add_degree_factor(degree_increment_factor(cfg, e.label_u(), deg_u + 1));
  delta.add_degree_factor(degree_increment_factor(cfg, e.label_v(), deg_v + 1));
  return delta;
}

// Probability that at most a c_max fraction of a signature's 3|E| factors
// collide, under X ~ Binomial(3|E|, 2/p): the exact CDF at
// Cmax = floor(c_max * 3|E|).
inline double collision_probability(std::uint64_t edge_count, std::uint64_t p,
                                    double c_max_fraction) {
  if (edge_count < 1) throw error(errc::invalid_argument, "edge count must be >= 1");
  if (p < 2) throw error(errc::invalid_argument, "p must be >= 2");
  if (!(c_max_fraction > 0.0 && c_max_fraction <= 1.0)) {
    throw error(errc::invalid_argument, "c_max must be in (0, 1]");
  }
  const std::uint64_t n = 3 * edge_count;
  const auto cmax =
      static_cast<std::uint64_t>(std::floor(c_max_fraction * static_cast<double>(n)));
  if (cmax >= n) return 1.0;
  const long double q = 2.0L / static_cast<long double>(p);
  if (q >= 1.0L) return 0.0;  // p == 2: every factor collides
  long double pmf = std::pow(1.0L - q, static_cast<long double>(n));
  long double cdf = pmf;
  for (std::uint64_t x = 0; x < cmax; ++x) {
    pmf *= (static_cast<long double>(n - x) / static_cast<long double>(x + 1)) * (q / (1.0L - q));
    cdf += pmf;
  }
  return static_cast<double>(std::min(cdf, 1.0L));
}

}  // namespace loom
