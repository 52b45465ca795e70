#pragma once

// Shared helpers for the test binaries: graph builders, random DAGs, and
// brute-force reference implementations used as oracles.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bnhard/distribution.hpp"
#include "bnhard/graph.hpp"

namespace bnhard::testing {

inline std::vector<NodeInfo> make_nodes(const std::vector<std::string>& labels, const std::vector<int>& cards = {}) {
  std::vector<NodeInfo> nodes;
  for (std::size_t i = 0; i < labels.size(); ++i) nodes.push_back({labels[i], cards.empty() ? 2 : cards[i]});
  return nodes;
}

// make_dag({"X","W","Y"}, {{0,1},{1,2}})
inline Dag make_dag(const std::vector<std::string>& labels, const std::vector<Edge>& edges,
                    const std::vector<int>& cards = {}) {
  return Dag(make_nodes(labels, cards), edges);
}

inline std::vector<std::string> default_labels(std::size_t n) {
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < n; ++i) labels.push_back("N" + std::to_string(i));
  return labels;
}

// Random DAG: a random permutation fixes the topological order and each
// forward pair gets an edge with probability p.
inline Dag random_dag(std::size_t n, double p, std::mt19937_64& rng, const std::vector<int>& cards = {}) {
  std::vector<NodeId> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<NodeId>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (coin(rng)) edges.push_back({perm[i], perm[j]});
    }
  }
  return make_dag(default_labels(n), edges, cards);
}

inline std::size_t max_in_degree(const Dag& g) {
  std::size_t m = 0;
  for (std::size_t v = 0; v < g.size(); ++v) m = std::max(m, g.parents(static_cast<NodeId>(v)).size());
  return m;
}

// Every DAG on n labelled nodes (n <= 4 keeps this small: 543 graphs).
inline std::vector<Dag> all_dags(std::size_t n, const std::vector<int>& cards = {}) {
  std::vector<Edge> pairs;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) pairs.push_back({static_cast<NodeId>(a), static_cast<NodeId>(b)});
  }
  std::vector<Dag> out;
  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < pairs.size(); ++i) combos *= 3;
  for (std::uint64_t code = 0; code < combos; ++code) {
    std::vector<Edge> edges;
    std::uint64_t c = code;
    for (const Edge& e : pairs) {
      const auto digit = c % 3;
      c /= 3;
      if (digit == 1) edges.push_back(e);
      if (digit == 2) edges.push_back({e.child, e.parent});
    }
    if (is_acyclic(n, edges)) out.push_back(make_dag(default_labels(n), edges, cards));
  }
  return out;
}

// Reference d-separation: enumerate every simple path in the skeleton and
// test each one for activity directly.
inline bool d_separated_by_paths(const Dag& g, NodeId x, NodeId y, const NodeSet& z) {
  const auto n = g.size();
  std::vector<char> in_z(n, 0);
  for (NodeId v : z) in_z[static_cast<std::size_t>(v)] = 1;
  auto has_observed_descendant = [&](NodeId v) {
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{v};
    while (!stack.empty()) {
      NodeId u = stack.back();
      stack.pop_back();
      if (seen[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = 1;
      if (in_z[static_cast<std::size_t>(u)]) return true;
      for (NodeId c : g.children(u)) stack.push_back(c);
    }
    return false;
  };
  auto active = [&](const std::vector<NodeId>& path) {
    for (std::size_t i = 1; i + 1 < path.size(); ++i) {
      const NodeId prev = path[i - 1];
      const NodeId mid = path[i];
      const NodeId next = path[i + 1];
      const bool collider = g.has_edge(prev, mid) && g.has_edge(next, mid);
      if (collider) {
        if (!has_observed_descendant(mid)) return false;
      } else if (in_z[static_cast<std::size_t>(mid)]) {
        return false;
      }
    }
    return true;
  };
  std::vector<NodeId> path{x};
  std::vector<char> on_path(n, 0);
  on_path[static_cast<std::size_t>(x)] = 1;
  bool found = false;
  auto dfs = [&](auto&& self, NodeId v) -> void {
    if (found) return;
    if (v == y) {
      if (active(path)) found = true;
      return;
    }
    for (NodeId u = 0; u < static_cast<NodeId>(n); ++u) {
      if (on_path[static_cast<std::size_t>(u)] || !g.adjacent(v, u)) continue;
      on_path[static_cast<std::size_t>(u)] = 1;
      path.push_back(u);
      self(self, u);
      path.pop_back();
      on_path[static_cast<std::size_t>(u)] = 0;
    }
  };
  dfs(dfs, x);
  return !found;
}

// Random tree skeleton with random edge directions.
inline Dag random_polytree(std::size_t n, std::mt19937_64& rng, const std::vector<int>& cards = {}) {
  std::vector<Edge> edges;
  for (std::size_t v = 1; v < n; ++v) {
    const auto u = static_cast<NodeId>(std::uniform_int_distribution<std::size_t>(0, v - 1)(rng));
    const auto w = static_cast<NodeId>(v);
    if (rng() & 1u) {
      edges.push_back({u, w});
    } else {
      edges.push_back({w, u});
    }
  }
  return make_dag(default_labels(n), edges, cards);
}

// Tables with random dyadic entries (denominator 2^bits, zeros allowed when
// allow_zero).
inline ParametricBn random_network(const Dag& g, std::mt19937_64& rng, unsigned bits = 6, bool allow_zero = false) {
  std::vector<Cpt<DyadicRational>> cpts;
  const long total = 1L << bits;
  for (std::size_t v = 0; v < g.size(); ++v) {
    Cpt<DyadicRational> cpt;
    cpt.node = static_cast<NodeId>(v);
    cpt.cardinality = g.cardinality(cpt.node);
    cpt.parents = g.parents(cpt.node);
    for (NodeId p : cpt.parents) cpt.parent_cards.push_back(g.cardinality(p));
    for (std::size_t r = 0; r < cpt.row_count(); ++r) {
      const long floor = allow_zero ? 0 : 1;
      long left = total - floor * cpt.cardinality;
      std::vector<DyadicRational> row;
      for (int x = 0; x + 1 < cpt.cardinality; ++x) {
        const long take = std::uniform_int_distribution<long>(0, left)(rng);
        left -= take;
        row.emplace_back(BigInt(take + floor), bits);
      }
      row.emplace_back(BigInt(left + floor), bits);
      std::shuffle(row.begin(), row.end(), rng);
      cpt.rows.push_back(std::move(row));
    }
    cpts.push_back(std::move(cpt));
  }
  return ParametricBn(g, std::move(cpts));
}

}  // namespace bnhard::testing
