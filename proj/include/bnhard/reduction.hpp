#pragma once

// Compiler from degree-bounded feedback arc set instances to minimal-model
// learning instances, and the translators between their solutions.
//
// Every arc V_i -> V_j becomes an edge component: seven observable variables
// A..G plus one hidden binary H, wired by ComponentTemplate. The learning
// instance is the marginal over the observables of a network parameterized
// with the zero-biased family at alpha = 1/16.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "bnhard/distribution.hpp"
#include "bnhard/graph.hpp"

namespace bnhard {

struct Arc {
  int from = 0;
  int to = 0;
  friend auto operator<=>(const Arc&, const Arc&) = default;
};

struct DbfasInstance {
  int vertex_count = 0;
  std::vector<Arc> arcs;  // sorted, no duplicates
  int k = 0;
  // Vertex ids of the instance this one was derived from (identity unless
  // produced by preprocess_dbfas).
  std::vector<int> original_ids;

  // Throws InvalidArgument on self-loops, duplicate or out-of-range arcs,
  // k outside [0, |arcs|], or a vertex with in-degree + out-degree above 3.
  void validate() const;

  int in_degree(int v) const;
  int out_degree(int v) const;
  // Vertices with exactly one / exactly two incoming arcs.
  int one_parent_count() const;
  int two_parent_count() const;
  // Position of an arc in `arcs`, or nullopt.
  std::optional<std::size_t> arc_index(Arc a) const;

  friend bool operator==(const DbfasInstance&, const DbfasInstance&) = default;
};

// Sorts and validates.
DbfasInstance make_dbfas(int vertex_count, std::vector<Arc> arcs, int k);

// Repeatedly deletes vertices with no incoming or no outgoing arc (and their
// arcs), then renumbers the survivors densely. k is capped at the remaining
// arc count.
DbfasInstance preprocess_dbfas(const DbfasInstance& raw);

// Random degree-bounded digraph on at most max_vertices vertices, already
// preprocessed and with at least one cycle; k is uniform in [0, |arcs|].
DbfasInstance random_dbfas(int max_vertices, std::mt19937_64& rng);

// Nodes of one edge component, in template order.
enum class Role { Vi, A, B, C, D, E, F, G, Vj, H };
inline constexpr std::size_t kRoleCount = 10;
const char* role_name(Role r);

struct RoleEdge {
  Role parent;
  Role child;
};

// Data description of the per-arc gadget; checked by validate().
struct ComponentTemplate {
  std::array<int, kRoleCount> cardinality{};
  std::vector<RoleEdge> network_edges;   // the generating structure, including H
  std::vector<RoleEdge> config_a_extra;  // added to the H-free base: arc removed from the cycle structure
  std::vector<RoleEdge> config_b_extra;  // added to the H-free base: arc kept

  static const ComponentTemplate& standard();

  int card(Role r) const { return cardinality[static_cast<std::size_t>(r)]; }
  // network_edges minus the edges touching H.
  std::vector<RoleEdge> base_edges() const;

  // Structural identities: A, B, D, E, G carry 186 parameters in both shapes;
  // C and F carry 18 (shape A) or 16 (shape B); a directed V_i -> V_j path
  // exists in shape B and not in shape A; C's parents in the network are
  // {B, H} and C has no children; F's parents include {E, H}; V_j's parent is
  // F; no network node has more than two parents. Throws Error on violation.
  void validate() const;
};

// Which of the two legal shapes an edge component has in a DAG over the
// observables.
enum class ArcConfig { ConfigA, ConfigB, Other };
const char* to_string(ArcConfig c);

struct ArcNodes {
  std::array<NodeId, kRoleCount> id{};
  NodeId operator[](Role r) const { return id[static_cast<std::size_t>(r)]; }
};

struct LearnInstance {
  DbfasInstance dbfas;
  ParametricBn network;        // over observables then hidden nodes
  NodeSet observables;         // 0 .. |X_L| - 1
  NodeSet hidden;              // |X_L| .. end
  std::uint64_t bound = 0;     // d_L
  std::vector<ArcNodes> arc_nodes;  // parallel to dbfas.arcs

  // The empty DAG over the observables (labels and cardinalities only).
  Dag observable_skeleton() const;
  const ArcNodes& nodes_of(Arc a) const;  // throws InvalidArgument for unknown arcs
};

struct BuildOptions {
  DyadicRational alpha = DyadicRational(BigInt(1), 4);
  // Allow vertices with no incoming or no outgoing arc (single-arc fragments).
  bool allow_open_vertices = false;
};

// Gadget node labels: "V3", "C_1_2", "H_1_2" (1-based vertex numbers).
std::string vertex_label(int v);
std::string gadget_label(Role r, Arc a);

struct GadgetLabel {
  Role role;
  Arc arc;
};
// Inverses of the above; nullopt for anything else. Vi and Vj never appear in
// gadget labels.
std::optional<int> parse_vertex_label(std::string_view label);
std::optional<GadgetLabel> parse_gadget_label(std::string_view label);

LearnInstance build_learn_instance(const DbfasInstance& d, const BuildOptions& options = {});

// Parameter bound 186|A| + 18k + 16(|A| - k) + sum over vertices of
// 8 * 2^indegree (= 16 o + 32 t once every vertex has one or two parents).
std::uint64_t learn_bound(const DbfasInstance& d);
std::uint64_t vertex_parameter_total(const DbfasInstance& d);
// 186|A| + 18|A'| + 16(|A| - |A'|) + vertex_parameter_total.
std::uint64_t solution_parameter_formula(const DbfasInstance& d, std::size_t feedback_size);

// Rebuilds the instance described by a network, its observables and bound
// (labels carry the arcs, the root A tables carry alpha), and checks that it
// matches exactly.
LearnInstance recover_learn_instance(const ParametricBn& network, const NodeSet& observables, std::uint64_t bound);

ArcConfig classify_component(const LearnInstance& inst, const Dag& f, Arc a);

// Shape A for arcs in feedback_arcs, shape B elsewhere, nothing else. Throws
// InvalidArgument when an arc is unknown or the result is cyclic (the set
// misses a cycle).
Dag forward_solution(const LearnInstance& inst, const std::vector<Arc>& feedback_arcs);

// Where backward_solution looks for a V_i -> V_j path.
enum class PathScope {
  Component,  // only through the arc's own edge component
  Global,     // anywhere in f
};

// Arcs whose component gets shape A when f is normalized: those with no
// directed V_i -> V_j path in f. Sorted.
std::vector<Arc> backward_solution(const LearnInstance& inst, const Dag& f, PathScope scope = PathScope::Component);

// forward_solution(backward_solution(f)).
Dag normalize_solution(const LearnInstance& inst, const Dag& f, PathScope scope = PathScope::Component);

struct HPrime {
  Dag graph;                // over observables and hidden nodes
  std::vector<Move> moves;  // from the generating structure, two per arc
};

// Shape A: add E -> H, then reverse H -> F. Shape B: add B -> H, then reverse
// H -> C. configs is parallel to inst.dbfas.arcs; Other is rejected.
HPrime build_h_prime(const LearnInstance& inst, const std::vector<ArcConfig>& configs);

enum class InclusionVerdict { ByConstruction, Verified, Refuted, Undetermined };
const char* to_string(InclusionVerdict v);

struct VerificationReport {
  std::uint64_t parameter_count = 0;
  std::uint64_t max_params = 0;
  std::vector<ArcConfig> configs;  // parallel to arcs
  InclusionVerdict inclusion = InclusionVerdict::Undetermined;
  bool within_bound = false;
  bool passed() const {
    return within_bound && (inclusion == InclusionVerdict::ByConstruction || inclusion == InclusionVerdict::Verified);
  }
};

// Inclusion is by construction when every component has one of the two
// shapes and f has no other edges; otherwise the marginal is enumerated when
// the scale allows it, and left undetermined when it does not.
VerificationReport verify_learn_solution(const LearnInstance& inst, const Dag& f, std::uint64_t max_params,
                                         const DeskScale& scale = {});

// Exact marginal over the observables (explicit table; desk scale only).
DiscreteDistribution observable_distribution(const LearnInstance& inst, const DeskScale& scale = {});

}  // namespace bnhard
