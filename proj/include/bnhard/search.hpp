#pragma once

// Exhaustive reference solvers for desk-scale instances, and a greedy learner
// that works from independence queries under a fixed node ordering.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "bnhard/distribution.hpp"
#include "bnhard/graph.hpp"
#include "bnhard/reduction.hpp"

namespace bnhard {

struct FasResult {
  std::vector<Arc> arcs;  // sorted
  std::size_t size = 0;
};

// Smallest arc set whose removal leaves the graph acyclic; among those of
// minimum size, the lexicographically smallest. Throws DeskScaleExceeded
// above max_arcs arcs.
FasResult brute_force_fas(const DbfasInstance& d, std::size_t max_arcs = 20);

struct LearnResult {
  Dag dag;
  std::uint64_t params = 0;
};

inline constexpr std::size_t kMaxLearnVariables = 5;

// Fewest-parameter DAG that includes d, over every DAG on d's variables with
// at most parent_bound parents per node. Ties go to the smallest edge-set
// bitmask (bit i*n + j is the edge i -> j). Throws DeskScaleExceeded above five
// variables and SearchExhausted when no DAG within the bound includes d.
LearnResult brute_force_minimal_model(const DiscreteDistribution& d, std::optional<std::size_t> parent_bound = {});

// Some DAG with at most `bound` parameters (and the parent bound) includes d.
bool decide_learn(const DiscreteDistribution& d, std::uint64_t bound, std::optional<std::size_t> parent_bound = {});

class IndependenceOracle {
 public:
  virtual ~IndependenceOracle() = default;
  // Node labels and cardinalities; queries use positions in this list.
  virtual const std::vector<NodeInfo>& nodes() const = 0;
  virtual bool independent(NodeId x, NodeId y, const NodeSet& z) const = 0;

  // x _||_ ys | z, asked one member of ys at a time: x _||_ y1 | z, then
  // x _||_ y2 | z + y1, and so on.
  bool independent_of_all(NodeId x, const NodeSet& ys, const NodeSet& z) const;
};

// Exact tests on an explicit table.
class DistributionOracle : public IndependenceOracle {
 public:
  explicit DistributionOracle(DiscreteDistribution d);
  const std::vector<NodeInfo>& nodes() const override { return nodes_; }
  bool independent(NodeId x, NodeId y, const NodeSet& z) const override;

 private:
  DiscreteDistribution d_;
  std::vector<NodeInfo> nodes_;
};

// d-separation in a structure whose first nodes are the queried variables
// (the reduction's networks put the observables first).
class SeparationOracle : public IndependenceOracle {
 public:
  SeparationOracle(Dag g, std::size_t observable_count);
  const std::vector<NodeInfo>& nodes() const override { return nodes_; }
  bool independent(NodeId x, NodeId y, const NodeSet& z) const override;

 private:
  Dag g_;
  std::vector<NodeInfo> nodes_;
};

// For each node in `ordering`, with P its predecessors: add parents from P
// until the node is independent of the rest of P given them, each time taking
// the candidate that leaves the fewest predecessors still dependent (then the
// smaller cardinality, then the earlier position); afterwards drop any parent
// whose removal keeps that independence. Throws InvalidArgument when ordering
// is not a permutation of the oracle's nodes.
Dag ordered_greedy_learn(const IndependenceOracle& oracle, const std::vector<NodeId>& ordering);

}  // namespace bnhard
