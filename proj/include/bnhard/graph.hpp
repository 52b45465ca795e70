#pragma once

// Directed acyclic graphs over discrete variables and the structural
// operations on DAG models: parameter counting, covered edges, d-separation,
// inclusion, equivalence, and add/reverse transformation sequences.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bnhard/error.hpp"

namespace bnhard {

using NodeId = int;
using NodeSet = std::vector<NodeId>;  // kept sorted ascending

struct Edge {
  NodeId parent = 0;
  NodeId child = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct NodeInfo {
  std::string label;
  int cardinality = 2;
  friend bool operator==(const NodeInfo&, const NodeInfo&) = default;
};

// Size limits for operations whose cost is exponential in the input.
struct DeskScale {
  // independence_map, includes_dag, exhaustive equivalence, transformation search.
  std::size_t exhaustive_nodes = 8;
  // Explicit joint / marginal tables.
  std::size_t table_entries = std::size_t{1} << 22;
  // States expanded by transformation_sequence before giving up.
  std::size_t search_states = 200000;
};

// True iff the directed graph on nodes 0..n-1 has no directed cycle.
bool is_acyclic(std::size_t node_count, std::span<const Edge> edges);

// Immutable DAG with per-node labels and cardinalities.
class Dag {
 public:
  Dag() = default;
  // Throws InvalidArgument on self-loops, duplicate edges, out-of-range ids,
  // duplicate labels, cardinality < 2, or a directed cycle.
  Dag(std::vector<NodeInfo> nodes, std::vector<Edge> edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<NodeInfo>& nodes() const { return nodes_; }
  const NodeInfo& node(NodeId id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  const std::string& label(NodeId id) const { return node(id).label; }
  int cardinality(NodeId id) const { return node(id).cardinality; }

  const NodeSet& parents(NodeId id) const { return parents_.at(static_cast<std::size_t>(id)); }
  const NodeSet& children(NodeId id) const { return children_.at(static_cast<std::size_t>(id)); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(NodeId parent, NodeId child) const;
  bool adjacent(NodeId a, NodeId b) const { return has_edge(a, b) || has_edge(b, a); }

  std::optional<NodeId> find(const std::string& label) const;
  NodeId require(const std::string& label) const;

  // Same nodes, edge set altered. The results are validated like the constructor.
  Dag with_edge(Edge e) const;
  Dag without_edge(Edge e) const;
  Dag with_edges(std::vector<Edge> edges) const { return Dag(nodes_, std::move(edges)); }

  // Nodes in an order where every parent precedes its children.
  std::vector<NodeId> topological_order() const;

  friend bool operator==(const Dag& a, const Dag& b) { return a.nodes_ == b.nodes_ && a.edges_ == b.edges_; }

 private:
  std::vector<NodeInfo> nodes_;
  std::vector<Edge> edges_;  // sorted
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
};

// (r - 1) * q for one node, q the product of its parents' cardinalities.
std::uint64_t node_parameter_count(const Dag& g, NodeId node);
std::uint64_t parameter_count(const Dag& g);
std::uint64_t parameter_count(const Dag& g, std::span<const NodeId> subset);

// Pa(child) \ {parent} == Pa(parent). Throws InvalidArgument when the edge is absent.
bool is_covered(const Dag& g, Edge e);

// Reverses a covered edge. Throws InvalidArgument when the edge is not covered.
Dag reverse_covered(const Dag& g, Edge e);

struct IndependenceTriple {
  NodeId x = 0;
  NodeId y = 0;
  NodeSet z;
  friend bool operator==(const IndependenceTriple&, const IndependenceTriple&) = default;
};

// Active-path reachability (Bayes-ball style) from x; true iff y is unreachable.
bool d_separated(const Dag& g, NodeId x, NodeId y, std::span<const NodeId> z);
inline bool d_separated(const Dag& g, const IndependenceTriple& t) { return d_separated(g, t.x, t.y, t.z); }

// Calls visit(x, y, z) for every x < y and every z over the remaining nodes,
// ordered by (x, y, subset bitmask). Throws DeskScaleExceeded above the bound.
template <class Visitor>
void for_each_triple(std::size_t node_count, const DeskScale& scale, Visitor&& visit);

// Every triple with x < y that g d-separates, in for_each_triple order.
std::vector<IndependenceTriple> independence_map(const Dag& g, const DeskScale& scale = {});

// Every constraint implied by h is implied by g. Throws InvalidArgument on
// mismatched node sets.
bool includes_dag(const Dag& h, const Dag& g, const DeskScale& scale = {});

enum class EquivalenceMethod { Structural, Exhaustive };

// Same skeleton and v-structures (Structural), or identical independence maps
// (Exhaustive).
bool equivalent(const Dag& a, const Dag& b, EquivalenceMethod method = EquivalenceMethod::Structural,
                const DeskScale& scale = {});

void require_same_nodes(const Dag& a, const Dag& b);

struct Move {
  enum class Kind { AddEdge, ReverseCoveredEdge };
  Kind kind = Kind::AddEdge;
  Edge edge;
  friend bool operator==(const Move&, const Move&) = default;
};

std::string to_string(const Move& move, const Dag& g);

// Applies one move, validating it (the addition must keep the graph acyclic;
// the reversal must be of a covered edge).
Dag apply_move(const Dag& g, const Move& move);

// Shortest sequence of edge additions and covered reversals turning f into g
// with g including every intermediate graph. Throws InvalidArgument when g
// does not include f, SearchExhausted when the state budget runs out.
std::vector<Move> transformation_sequence(const Dag& f, const Dag& g, const DeskScale& scale = {});

// Breadth-first search for such a sequence. With prune_by_inclusion false the
// only restriction is that each intermediate graph is a DAG and that added
// edges are adjacencies of g. Returns nullopt when no sequence exists.
std::optional<std::vector<Move>> search_transformation(const Dag& f, const Dag& g, bool prune_by_inclusion,
                                                       const DeskScale& scale = {});

// Undirected skeleton has no cycle.
bool is_polytree(const Dag& g);

// ---------------------------------------------------------------------------

template <class Visitor>
void for_each_triple(std::size_t node_count, const DeskScale& scale, Visitor&& visit) {
  if (node_count > scale.exhaustive_nodes) {
    throw DeskScaleExceeded("exhaustive triple enumeration over " + std::to_string(node_count) +
                            " nodes exceeds the bound of " + std::to_string(scale.exhaustive_nodes) +
                            "; query pairs individually instead");
  }
  const auto n = static_cast<NodeId>(node_count);
  NodeSet rest;
  NodeSet z;
  for (NodeId x = 0; x < n; ++x) {
    for (NodeId y = x + 1; y < n; ++y) {
      rest.clear();
      for (NodeId v = 0; v < n; ++v) {
        if (v != x && v != y) rest.push_back(v);
      }
      const std::uint64_t subsets = std::uint64_t{1} << rest.size();
      for (std::uint64_t mask = 0; mask < subsets; ++mask) {
        z.clear();
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (mask >> i & 1u) z.push_back(rest[i]);
        }
        visit(x, y, static_cast<const NodeSet&>(z));
      }
    }
  }
}

}  // namespace bnhard
