#pragma once

// Exact marginals of parametric networks: brute-force enumeration, variable
// elimination on polytrees, and cut-set conditioning on reduction-shaped
// networks. The three query oracles of the learning problem sit on top.

#include <cstddef>
#include <map>
#include <vector>

#include "bnhard/distribution.hpp"
#include "bnhard/graph.hpp"

namespace bnhard {

// Z = z as node -> value.
struct Query {
  std::map<NodeId, int> targets;
};

// Throws InvalidArgument on unknown nodes or out-of-range values.
void validate_query(const ParametricBn& bn, const Query& q);

// Sum of joint_probability over every completion of the targets. Only the
// ancestors of the targets are enumerated. Throws DeskScaleExceeded (with the
// state count) when those completions exceed scale.table_entries.
DyadicRational enumerate_marginal(const ParametricBn& bn, const Query& q, const DeskScale& scale = {});

// Marginal table over `nodes` (ascending), from the explicit joint of their
// ancestral sub-network.
DiscreteDistribution enumerate_marginal_table(const ParametricBn& bn, const NodeSet& nodes,
                                              const DeskScale& scale = {});

// Variable elimination in leaf-to-root order over the skeleton. Throws
// InvalidArgument when the structure is not a polytree.
DyadicRational polytree_marginal(const ParametricBn& bn, const Query& q);

struct CutsetComponent {
  NodeSet nodes;     // a tree of the network with every C node removed
  NodeSet attached;  // C nodes in Z whose hidden parent lies in `nodes`
};

struct CutsetPlan {
  NodeSet cutset;                          // the B nodes conditioned on
  std::vector<CutsetComponent> components; // only those touching Z, the cutset or an attached C
};

// Cutset: every B_ij with C_ij in Z and B_ij not in Z. Components are the trees
// left after deleting all C nodes. A C node outside Z is barren and dropped; a
// C node in Z becomes a leaf under its H once B is fixed. Throws
// InvalidArgument for networks that are not reduction-shaped (use
// enumerate_marginal there) or for hidden nodes in Z.
CutsetPlan build_cutset_plan(const ParametricBn& h, const Query& q);

// Sum over cutset values b of the product over components of
// p(T_i = t_i(z, b)), each by polytree_marginal.
DyadicRational cutset_marginal(const ParametricBn& h, const Query& q);

// Nodes with role H in a reduction-shaped network.
NodeSet hidden_nodes(const ParametricBn& h);

struct OracleConfig {
  std::size_t k = 3;  // largest conditioning / query set
};

// x _||_ y | z for the observable marginal, by d-separation in the network.
// Throws InvalidArgument when a query node is hidden or |z| exceeds k.
bool independence_oracle(const ParametricBn& h, const IndependenceTriple& t, const OracleConfig& config = {});

// Conditional mutual information in bits,
//   sum p(x,y,z) log2( p(x,y,z) p(z) / (p(x,z) p(y,z)) ),
// with every probability from cutset_marginal. Exactly 0 whenever
// independence_oracle says independent.
double information_oracle(const ParametricBn& h, NodeId x, NodeId y, const NodeSet& z,
                          const OracleConfig& config = {});

// The same sum evaluated from an explicit table (positions into d).
double conditional_mutual_information(const DiscreteDistribution& d, std::size_t x, std::size_t y,
                                      const std::vector<std::size_t>& z);

}  // namespace bnhard
