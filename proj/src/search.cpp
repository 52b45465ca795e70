#include "bnhard/search.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace bnhard {

FasResult brute_force_fas(const DbfasInstance& d, std::size_t max_arcs) {
  d.validate();
  const std::size_t m = d.arcs.size();
  if (m > max_arcs) {
    throw DeskScaleExceeded("brute-force feedback arc set search is limited to " + std::to_string(max_arcs) +
                            " arcs, the instance has " + std::to_string(m));
  }
  const auto n = static_cast<std::size_t>(d.vertex_count);
  std::vector<Edge> kept;
  // Combinations of each size in lexicographic order of arc positions; arcs are
  // sorted, so the first hit is the lexicographically smallest arc set.
  for (std::size_t size = 0; size <= m; ++size) {
    std::vector<std::size_t> pick(size);
    std::iota(pick.begin(), pick.end(), 0);
    while (true) {
      kept.clear();
      std::size_t next = 0;
      for (std::size_t i = 0; i < m; ++i) {
        if (next < size && pick[next] == i) {
          ++next;
          continue;
        }
        kept.push_back({d.arcs[i].from, d.arcs[i].to});
      }
      if (is_acyclic(n, kept)) {
        FasResult result;
        for (std::size_t i : pick) result.arcs.push_back(d.arcs[i]);
        result.size = size;
        return result;
      }
      // Advance to the next combination.
      std::size_t i = size;
      while (i > 0 && pick[i - 1] == m - size + i - 1) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (std::size_t j = i; j < size; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  throw Error("no feedback arc set found");  // unreachable: removing every arc is acyclic
}

namespace {

std::vector<NodeInfo> nodes_of(const DiscreteDistribution& d) {
  std::vector<NodeInfo> nodes;
  for (const auto& v : d.variables()) nodes.push_back({v.label, v.cardinality});
  return nodes;
}

// Independence facts of d, indexed by pair and conditioning-set bitmask.
class IndependenceTable {
 public:
  explicit IndependenceTable(const DiscreteDistribution& d) : n_(d.variable_count()) {
    facts_.assign(n_ * n_ << n_, 0);
    for (std::size_t x = 0; x < n_; ++x) {
      for (std::size_t y = x + 1; y < n_; ++y) {
        for (std::uint32_t mask = 0; mask < (1u << n_); ++mask) {
          if (mask >> x & 1u || mask >> y & 1u) continue;
          NodeSet z;
          for (std::size_t v = 0; v < n_; ++v) {
            if (mask >> v & 1u) z.push_back(static_cast<NodeId>(v));
          }
          facts_[slot(x, y, mask)] =
              is_independent(d, IndependenceTriple{static_cast<NodeId>(x), static_cast<NodeId>(y), z}) ? 1 : 0;
        }
      }
    }
  }

  bool independent(std::size_t x, std::size_t y, std::uint32_t mask) const {
    return facts_[slot(std::min(x, y), std::max(x, y), mask)] != 0;
  }

 private:
  std::size_t slot(std::size_t x, std::size_t y, std::uint32_t mask) const { return ((x * n_ + y) << n_) | mask; }

  std::size_t n_;
  std::vector<char> facts_;
};

// Global Markov condition of g against the table.
bool includes(const Dag& g, const IndependenceTable& facts) {
  const std::size_t n = g.size();
  NodeSet z;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = x + 1; y < n; ++y) {
      if (g.adjacent(static_cast<NodeId>(x), static_cast<NodeId>(y))) continue;
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (mask >> x & 1u || mask >> y & 1u) continue;
        z.clear();
        for (std::size_t v = 0; v < n; ++v) {
          if (mask >> v & 1u) z.push_back(static_cast<NodeId>(v));
        }
        if (!facts.independent(x, y, mask) && d_separated(g, static_cast<NodeId>(x), static_cast<NodeId>(y), z)) {
          return false;
        }
      }
    }
  }
  return true;
}

}  // namespace

LearnResult brute_force_minimal_model(const DiscreteDistribution& d, std::optional<std::size_t> parent_bound) {
  const std::size_t n = d.variable_count();
  if (n > kMaxLearnVariables) {
    throw DeskScaleExceeded("exhaustive structure search is limited to " + std::to_string(kMaxLearnVariables) +
                            " variables, the distribution has " + std::to_string(n));
  }
  const auto nodes = nodes_of(d);
  std::vector<Edge> pairs;  // ascending in i*n + j
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) pairs.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }

  struct Candidate {
    std::uint64_t params;
    std::uint32_t mask;
  };
  std::vector<Candidate> candidates;
  std::vector<Edge> edges;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    edges.clear();
    std::vector<std::size_t> in_degree(n, 0);
    bool over = false;
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (mask >> b & 1u) {
        edges.push_back(pairs[b]);
        if (parent_bound && ++in_degree[static_cast<std::size_t>(pairs[b].child)] > *parent_bound) over = true;
      }
    }
    if (over || !is_acyclic(n, edges)) continue;
    std::uint64_t params = 0;
    for (std::size_t v = 0; v < n; ++v) {
      std::uint64_t rows = 1;
      for (const Edge& e : edges) {
        if (static_cast<std::size_t>(e.child) == v) rows *= static_cast<std::uint64_t>(nodes[static_cast<std::size_t>(e.parent)].cardinality);
      }
      params += rows * static_cast<std::uint64_t>(nodes[v].cardinality - 1);
    }
    candidates.push_back({params, mask});
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) { return a.params < b.params; });

  const IndependenceTable facts(d);
  for (const Candidate& c : candidates) {
    edges.clear();
    for (std::size_t b = 0; b < pairs.size(); ++b) {
      if (c.mask >> b & 1u) edges.push_back(pairs[b]);
    }
    Dag g(nodes, edges);
    if (includes(g, facts)) return {std::move(g), c.params};
  }
  throw SearchExhausted("no DAG within the parent bound includes the distribution");
}

bool decide_learn(const DiscreteDistribution& d, std::uint64_t bound, std::optional<std::size_t> parent_bound) {
  try {
    return brute_force_minimal_model(d, parent_bound).params <= bound;
  } catch (const SearchExhausted&) {
    return false;
  }
}

bool IndependenceOracle::independent_of_all(NodeId x, const NodeSet& ys, const NodeSet& z) const {
  NodeSet given = z;
  for (NodeId y : ys) {
    if (!independent(x, y, given)) return false;
    given.insert(std::lower_bound(given.begin(), given.end(), y), y);
  }
  return true;
}

DistributionOracle::DistributionOracle(DiscreteDistribution d) : d_(std::move(d)), nodes_(nodes_of(d_)) {}

bool DistributionOracle::independent(NodeId x, NodeId y, const NodeSet& z) const {
  return is_independent(d_, IndependenceTriple{x, y, z});
}

SeparationOracle::SeparationOracle(Dag g, std::size_t observable_count) : g_(std::move(g)) {
  if (observable_count > g_.size()) throw InvalidArgument("more observables than nodes");
  nodes_.assign(g_.nodes().begin(), g_.nodes().begin() + static_cast<std::ptrdiff_t>(observable_count));
}

bool SeparationOracle::independent(NodeId x, NodeId y, const NodeSet& z) const {
  const auto n = static_cast<NodeId>(nodes_.size());
  auto observable = [&](NodeId v) { return v >= 0 && v < n; };
  if (!observable(x) || !observable(y) || !std::all_of(z.begin(), z.end(), observable)) {
    throw InvalidArgument("query touches a node outside the observables");
  }
  return d_separated(g_, x, y, z);
}

Dag ordered_greedy_learn(const IndependenceOracle& oracle, const std::vector<NodeId>& ordering) {
  const auto& nodes = oracle.nodes();
  const std::size_t n = nodes.size();
  {
    std::vector<NodeId> sorted = ordering;
    std::sort(sorted.begin(), sorted.end());
    std::vector<NodeId> expected(n);
    std::iota(expected.begin(), expected.end(), 0);
    if (sorted != expected) throw InvalidArgument("ordering must list every node exactly once");
  }
  auto sorted_set = [](NodeSet s) {
    std::sort(s.begin(), s.end());
    return s;
  };
  auto minus = [](const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };

  std::vector<Edge> edges;
  for (std::size_t pos = 0; pos < n; ++pos) {
    const NodeId v = ordering[pos];
    const NodeSet preds = sorted_set(NodeSet(ordering.begin(), ordering.begin() + static_cast<std::ptrdiff_t>(pos)));
    NodeSet parents;
    // Add phase.
    while (!oracle.independent_of_all(v, minus(preds, parents), parents)) {
      NodeId best = -1;
      std::size_t best_dependent = n + 1;
      for (NodeId u : ordering) {
        if (u == v) break;
        if (std::binary_search(parents.begin(), parents.end(), u)) continue;
        const NodeSet with = sorted_set([&] {
          NodeSet s = parents;
          s.push_back(u);
          return s;
        }());
        std::size_t dependent = 0;
        for (NodeId w : minus(preds, with)) {
          if (!oracle.independent(v, w, with)) ++dependent;
        }
        const bool better = dependent < best_dependent ||
                            (dependent == best_dependent &&
                             nodes[static_cast<std::size_t>(u)].cardinality < nodes[static_cast<std::size_t>(best)].cardinality);
        if (best < 0 || better) {
          best = u;
          best_dependent = dependent;
        }
      }
      parents.insert(std::lower_bound(parents.begin(), parents.end(), best), best);
    }
    // Delete phase.
    for (bool changed = true; changed;) {
      changed = false;
      for (NodeId u : parents) {
        NodeSet fewer = minus(parents, {u});
        if (oracle.independent_of_all(v, minus(preds, fewer), fewer)) {
          parents = fewer;
          changed = true;
          break;
        }
      }
    }
    for (NodeId u : parents) edges.push_back({u, v});
  }
  return Dag(nodes, edges);
}

}  // namespace bnhard
