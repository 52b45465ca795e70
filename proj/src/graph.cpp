#include "bnhard/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>
#include <unordered_map>
#include <unordered_set>

namespace bnhard {

namespace {

// Kahn's algorithm; returns the order, or fewer than n nodes when cyclic.
std::vector<NodeId> kahn_order(std::size_t n, std::span<const Edge> edges) {
  std::vector<int> indegree(n, 0);
  std::vector<std::vector<NodeId>> out(n);
  for (const Edge& e : edges) {
    out[static_cast<std::size_t>(e.parent)].push_back(e.child);
    ++indegree[static_cast<std::size_t>(e.child)];
  }
  std::vector<NodeId> order;
  order.reserve(n);
  // Smallest-index-first for a deterministic order.
  std::set<NodeId> ready;
  for (std::size_t v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready.insert(static_cast<NodeId>(v));
  }
  while (!ready.empty()) {
    NodeId v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (NodeId c : out[static_cast<std::size_t>(v)]) {
      if (--indegree[static_cast<std::size_t>(c)] == 0) ready.insert(c);
    }
  }
  return order;
}

bool reaches(const Dag& g, NodeId from, NodeId to) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    for (NodeId c : g.children(v)) stack.push_back(c);
  }
  return false;
}

}  // namespace

bool is_acyclic(std::size_t node_count, std::span<const Edge> edges) {
  for (const Edge& e : edges) {
    if (e.parent == e.child) return false;
  }
  return kahn_order(node_count, edges).size() == node_count;
}

Dag::Dag(std::vector<NodeInfo> nodes, std::vector<Edge> edges) : nodes_(std::move(nodes)), edges_(std::move(edges)) {
  const auto n = nodes_.size();
  std::unordered_set<std::string> labels;
  for (const auto& info : nodes_) {
    if (info.cardinality < 2) throw InvalidArgument("node '" + info.label + "' has cardinality below 2");
    if (!labels.insert(info.label).second) throw InvalidArgument("duplicate node label '" + info.label + "'");
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) throw InvalidArgument("duplicate edge");
  parents_.assign(n, {});
  children_.assign(n, {});
  for (const Edge& e : edges_) {
    if (e.parent < 0 || e.child < 0 || static_cast<std::size_t>(e.parent) >= n ||
        static_cast<std::size_t>(e.child) >= n) {
      throw InvalidArgument("edge endpoint out of range");
    }
    if (e.parent == e.child) throw InvalidArgument("self-loop on '" + nodes_[static_cast<std::size_t>(e.parent)].label + "'");
    parents_[static_cast<std::size_t>(e.child)].push_back(e.parent);
    children_[static_cast<std::size_t>(e.parent)].push_back(e.child);
  }
  for (auto& p : parents_) std::sort(p.begin(), p.end());
  for (auto& c : children_) std::sort(c.begin(), c.end());
  if (!is_acyclic(n, edges_)) throw InvalidArgument("graph contains a directed cycle");
}

bool Dag::has_edge(NodeId parent, NodeId child) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{parent, child});
}

std::optional<NodeId> Dag::find(const std::string& label) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].label == label) return static_cast<NodeId>(i);
  }
  return std::nullopt;
}

NodeId Dag::require(const std::string& label) const {
  auto id = find(label);
  if (!id) throw InvalidArgument("unknown node label '" + label + "'");
  return *id;
}

Dag Dag::with_edge(Edge e) const {
  auto edges = edges_;
  edges.push_back(e);
  return Dag(nodes_, std::move(edges));
}

Dag Dag::without_edge(Edge e) const {
  auto edges = edges_;
  auto it = std::find(edges.begin(), edges.end(), e);
  if (it == edges.end()) throw InvalidArgument("edge not present");
  edges.erase(it);
  return Dag(nodes_, std::move(edges));
}

std::vector<NodeId> Dag::topological_order() const { return kahn_order(size(), edges_); }

std::uint64_t node_parameter_count(const Dag& g, NodeId node) {
  std::uint64_t q = 1;
  for (NodeId p : g.parents(node)) q *= static_cast<std::uint64_t>(g.cardinality(p));
  return static_cast<std::uint64_t>(g.cardinality(node) - 1) * q;
}

std::uint64_t parameter_count(const Dag& g) {
  std::uint64_t total = 0;
  for (std::size_t v = 0; v < g.size(); ++v) total += node_parameter_count(g, static_cast<NodeId>(v));
  return total;
}

std::uint64_t parameter_count(const Dag& g, std::span<const NodeId> subset) {
  std::uint64_t total = 0;
  for (NodeId v : subset) total += node_parameter_count(g, v);
  return total;
}

bool is_covered(const Dag& g, Edge e) {
  if (!g.has_edge(e.parent, e.child)) throw InvalidArgument("is_covered: edge is not in the graph");
  NodeSet others;
  for (NodeId p : g.parents(e.child)) {
    if (p != e.parent) others.push_back(p);
  }
  return others == g.parents(e.parent);
}

Dag reverse_covered(const Dag& g, Edge e) {
  if (!is_covered(g, e)) {
    throw InvalidArgument("edge " + g.label(e.parent) + " -> " + g.label(e.child) +
                          " is not covered; reversing it would change the model");
  }
  auto edges = g.edges();
  *std::find(edges.begin(), edges.end(), e) = Edge{e.child, e.parent};
  return g.with_edges(std::move(edges));
}

bool d_separated(const Dag& g, NodeId x, NodeId y, std::span<const NodeId> z) {
  const auto n = g.size();
  std::vector<char> in_z(n, 0);
  for (NodeId v : z) in_z[static_cast<std::size_t>(v)] = 1;
  if (x == y) throw InvalidArgument("d_separated: x and y must differ");
  if (in_z[static_cast<std::size_t>(x)] || in_z[static_cast<std::size_t>(y)]) {
    throw InvalidArgument("d_separated: x and y must not be in the conditioning set");
  }

  // Ancestors of z, including z itself: a collider is open iff it is in this set.
  std::vector<char> anc(n, 0);
  std::vector<NodeId> stack(z.begin(), z.end());
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (anc[static_cast<std::size_t>(v)]) continue;
    anc[static_cast<std::size_t>(v)] = 1;
    for (NodeId p : g.parents(v)) stack.push_back(p);
  }

  // State (v, arrived_from_child). Leaving upward to parents or downward to children.
  std::vector<char> seen_up(n, 0);
  std::vector<char> seen_down(n, 0);
  std::vector<std::pair<NodeId, bool>> frontier{{x, true}};
  while (!frontier.empty()) {
    auto [v, from_child] = frontier.back();
    frontier.pop_back();
    auto& seen = from_child ? seen_up : seen_down;
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    const bool observed = in_z[static_cast<std::size_t>(v)] != 0;
    if (v == y && !observed) return false;
    if (from_child) {
      if (observed) continue;
      for (NodeId p : g.parents(v)) frontier.emplace_back(p, true);
      for (NodeId c : g.children(v)) frontier.emplace_back(c, false);
    } else {
      if (!observed) {
        for (NodeId c : g.children(v)) frontier.emplace_back(c, false);
      }
      if (anc[static_cast<std::size_t>(v)]) {
        for (NodeId p : g.parents(v)) frontier.emplace_back(p, true);
      }
    }
  }
  return true;
}

std::vector<IndependenceTriple> independence_map(const Dag& g, const DeskScale& scale) {
  std::vector<IndependenceTriple> out;
  for_each_triple(g.size(), scale, [&](NodeId x, NodeId y, const NodeSet& z) {
    if (d_separated(g, x, y, z)) out.push_back({x, y, z});
  });
  return out;
}

void require_same_nodes(const Dag& a, const Dag& b) {
  if (a.nodes() != b.nodes()) throw InvalidArgument("graphs are defined over different node sets");
}

bool includes_dag(const Dag& h, const Dag& g, const DeskScale& scale) {
  require_same_nodes(h, g);
  bool ok = true;
  for_each_triple(h.size(), scale, [&](NodeId x, NodeId y, const NodeSet& z) {
    if (ok && d_separated(h, x, y, z) && !d_separated(g, x, y, z)) ok = false;
  });
  return ok;
}

namespace {

std::set<std::tuple<NodeId, NodeId, NodeId>> v_structures(const Dag& g) {
  std::set<std::tuple<NodeId, NodeId, NodeId>> out;
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto& pa = g.parents(static_cast<NodeId>(c));
    for (std::size_t i = 0; i < pa.size(); ++i) {
      for (std::size_t j = i + 1; j < pa.size(); ++j) {
        if (!g.adjacent(pa[i], pa[j])) out.emplace(pa[i], static_cast<NodeId>(c), pa[j]);
      }
    }
  }
  return out;
}

std::set<std::pair<NodeId, NodeId>> skeleton(const Dag& g) {
  std::set<std::pair<NodeId, NodeId>> out;
  for (const Edge& e : g.edges()) out.emplace(std::min(e.parent, e.child), std::max(e.parent, e.child));
  return out;
}

}  // namespace

bool equivalent(const Dag& a, const Dag& b, EquivalenceMethod method, const DeskScale& scale) {
  require_same_nodes(a, b);
  if (method == EquivalenceMethod::Structural) {
    return skeleton(a) == skeleton(b) && v_structures(a) == v_structures(b);
  }
  return includes_dag(a, b, scale) && includes_dag(b, a, scale);
}

std::string to_string(const Move& move, const Dag& g) {
  std::string kind = move.kind == Move::Kind::AddEdge ? "add " : "reverse ";
  return kind + g.label(move.edge.parent) + " -> " + g.label(move.edge.child);
}

Dag apply_move(const Dag& g, const Move& move) {
  if (move.kind == Move::Kind::AddEdge) {
    if (g.adjacent(move.edge.parent, move.edge.child)) throw InvalidArgument("add: nodes already adjacent");
    return g.with_edge(move.edge);
  }
  return reverse_covered(g, move.edge);
}

namespace {

std::string state_key(const Dag& g) {
  std::string key;
  key.reserve(g.edges().size() * 2);
  for (const Edge& e : g.edges()) {
    key.push_back(static_cast<char>(e.parent));
    key.push_back(static_cast<char>(e.child));
  }
  return key;
}

}  // namespace

std::optional<std::vector<Move>> search_transformation(const Dag& f, const Dag& g, bool prune_by_inclusion,
                                                       const DeskScale& scale) {
  require_same_nodes(f, g);
  if (f.size() > 255) throw DeskScaleExceeded("transformation search supports at most 255 nodes");
  if (f == g) return std::vector<Move>{};

  std::vector<IndependenceTriple> g_constraints;
  if (prune_by_inclusion) g_constraints = independence_map(g, scale);
  auto included_by_g = [&](const Dag& state) {
    return std::all_of(g_constraints.begin(), g_constraints.end(),
                       [&](const IndependenceTriple& t) { return d_separated(state, t); });
  };

  struct Visit {
    std::size_t from;
    Move move;
  };
  std::vector<Dag> states{f};
  std::vector<Visit> visits{{0, {}}};
  std::unordered_map<std::string, std::size_t> index{{state_key(f), 0}};
  std::deque<std::size_t> queue{0};
  const auto n = static_cast<NodeId>(f.size());

  auto unwind = [&](std::size_t at) {
    std::vector<Move> moves;
    while (at != 0) {
      moves.push_back(visits[at].move);
      at = visits[at].from;
    }
    std::reverse(moves.begin(), moves.end());
    return moves;
  };

  while (!queue.empty()) {
    const std::size_t current = queue.front();
    queue.pop_front();
    for (NodeId p = 0; p < n; ++p) {
      for (NodeId c = 0; c < n; ++c) {
        if (p == c) continue;
        const Dag& state = states[current];
        std::optional<Move> move;
        if (state.has_edge(p, c)) {
          if (is_covered(state, {p, c})) move = Move{Move::Kind::ReverseCoveredEdge, {p, c}};
        } else if (!state.has_edge(c, p) && g.adjacent(p, c) && !reaches(state, c, p)) {
          move = Move{Move::Kind::AddEdge, {p, c}};
        }
        if (!move) continue;
        Dag next = apply_move(state, *move);
        std::string key = state_key(next);
        if (index.contains(key)) continue;
        if (prune_by_inclusion && !included_by_g(next)) continue;
        if (states.size() >= scale.search_states) {
          throw SearchExhausted("transformation search exceeded " + std::to_string(scale.search_states) + " states");
        }
        const bool done = next == g;
        index.emplace(std::move(key), states.size());
        states.push_back(std::move(next));
        visits.push_back({current, *move});
        if (done) return unwind(states.size() - 1);
        queue.push_back(states.size() - 1);
      }
    }
  }
  return std::nullopt;
}

std::vector<Move> transformation_sequence(const Dag& f, const Dag& g, const DeskScale& scale) {
  if (!includes_dag(g, f, scale)) {
    throw InvalidArgument("transformation_sequence: the target graph does not include the source graph");
  }
  auto moves = search_transformation(f, g, /*prune_by_inclusion=*/true, scale);
  if (!moves) throw SearchExhausted("transformation search finished without reaching the target graph");
  return *moves;
}

bool is_polytree(const Dag& g) {
  std::vector<NodeId> root(g.size());
  std::iota(root.begin(), root.end(), 0);
  auto find = [&](NodeId v) {
    while (root[static_cast<std::size_t>(v)] != v) {
      root[static_cast<std::size_t>(v)] = root[static_cast<std::size_t>(root[static_cast<std::size_t>(v)])];
      v = root[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (const Edge& e : g.edges()) {
    NodeId a = find(e.parent);
    NodeId b = find(e.child);
    if (a == b) return false;
    root[static_cast<std::size_t>(a)] = b;
  }
  return true;
}

}  // namespace bnhard
