#include "bnhard/reduction.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

namespace bnhard {

// ---------------------------------------------------------------------------
// Instances

void DbfasInstance::validate() const {
  if (vertex_count < 0) throw InvalidArgument("negative vertex count");
  std::vector<int> degree(static_cast<std::size_t>(vertex_count), 0);
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const Arc& a = arcs[i];
    if (a.from < 0 || a.to < 0 || a.from >= vertex_count || a.to >= vertex_count) {
      throw InvalidArgument("arc " + std::to_string(a.from) + " -> " + std::to_string(a.to) + " is out of range");
    }
    if (a.from == a.to) throw InvalidArgument("self-loop arc on vertex " + std::to_string(a.from));
    if (i > 0 && !(arcs[i - 1] < a)) throw InvalidArgument("arcs must be sorted and distinct");
    ++degree[static_cast<std::size_t>(a.from)];
    ++degree[static_cast<std::size_t>(a.to)];
  }
  for (int v = 0; v < vertex_count; ++v) {
    if (degree[static_cast<std::size_t>(v)] > 3) {
      throw InvalidArgument("vertex " + std::to_string(v) + " has total degree " +
                            std::to_string(degree[static_cast<std::size_t>(v)]) + " (at most 3 allowed)");
    }
  }
  if (k < 0 || static_cast<std::size_t>(k) > arcs.size()) {
    throw InvalidArgument("k = " + std::to_string(k) + " must lie in [0, " + std::to_string(arcs.size()) + "]");
  }
  if (!original_ids.empty() && original_ids.size() != static_cast<std::size_t>(vertex_count)) {
    throw InvalidArgument("original vertex id list has the wrong length");
  }
}

int DbfasInstance::in_degree(int v) const {
  return static_cast<int>(std::count_if(arcs.begin(), arcs.end(), [v](const Arc& a) { return a.to == v; }));
}

int DbfasInstance::out_degree(int v) const {
  return static_cast<int>(std::count_if(arcs.begin(), arcs.end(), [v](const Arc& a) { return a.from == v; }));
}

int DbfasInstance::one_parent_count() const {
  int n = 0;
  for (int v = 0; v < vertex_count; ++v) n += in_degree(v) == 1;
  return n;
}

int DbfasInstance::two_parent_count() const {
  int n = 0;
  for (int v = 0; v < vertex_count; ++v) n += in_degree(v) == 2;
  return n;
}

std::optional<std::size_t> DbfasInstance::arc_index(Arc a) const {
  auto it = std::lower_bound(arcs.begin(), arcs.end(), a);
  if (it == arcs.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - arcs.begin());
}

DbfasInstance make_dbfas(int vertex_count, std::vector<Arc> arcs, int k) {
  std::sort(arcs.begin(), arcs.end());
  DbfasInstance d{vertex_count, std::move(arcs), k, {}};
  d.original_ids.resize(static_cast<std::size_t>(std::max(vertex_count, 0)));
  for (int v = 0; v < vertex_count; ++v) d.original_ids[static_cast<std::size_t>(v)] = v;
  d.validate();
  return d;
}

DbfasInstance preprocess_dbfas(const DbfasInstance& raw) {
  raw.validate();
  const auto n = static_cast<std::size_t>(raw.vertex_count);
  std::vector<char> alive(n, 1);
  std::vector<Arc> arcs = raw.arcs;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> in(n, 0);
    std::vector<int> out(n, 0);
    for (const Arc& a : arcs) {
      ++out[static_cast<std::size_t>(a.from)];
      ++in[static_cast<std::size_t>(a.to)];
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (alive[v] && (in[v] == 0 || out[v] == 0)) {
        alive[v] = 0;
        changed = true;
      }
    }
    std::erase_if(arcs, [&](const Arc& a) {
      return !alive[static_cast<std::size_t>(a.from)] || !alive[static_cast<std::size_t>(a.to)];
    });
  }
  std::vector<int> new_id(n, -1);
  DbfasInstance out;
  for (std::size_t v = 0; v < n; ++v) {
    if (!alive[v]) continue;
    new_id[v] = out.vertex_count++;
    out.original_ids.push_back(raw.original_ids.empty() ? static_cast<int>(v) : raw.original_ids[v]);
  }
  for (const Arc& a : arcs) {
    out.arcs.push_back({new_id[static_cast<std::size_t>(a.from)], new_id[static_cast<std::size_t>(a.to)]});
  }
  std::sort(out.arcs.begin(), out.arcs.end());
  out.k = std::min(raw.k, static_cast<int>(out.arcs.size()));
  out.validate();
  return out;
}

DbfasInstance random_dbfas(int max_vertices, std::mt19937_64& rng) {
  if (max_vertices < 2) throw InvalidArgument("a cycle needs at least two vertices");
  while (true) {
    const int n = std::uniform_int_distribution<int>(2, max_vertices)(rng);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::vector<int> degree(static_cast<std::size_t>(n), 0);
    std::vector<Arc> arcs;
    for (int attempt = 0; attempt < 3 * n; ++attempt) {
      const Arc a{pick(rng), pick(rng)};
      if (a.from == a.to || degree[static_cast<std::size_t>(a.from)] == 3 || degree[static_cast<std::size_t>(a.to)] == 3 ||
          std::find(arcs.begin(), arcs.end(), a) != arcs.end()) {
        continue;
      }
      arcs.push_back(a);
      ++degree[static_cast<std::size_t>(a.from)];
      ++degree[static_cast<std::size_t>(a.to)];
    }
    DbfasInstance d = preprocess_dbfas(make_dbfas(n, std::move(arcs), 0));
    if (d.arcs.empty()) continue;
    d.k = std::uniform_int_distribution<int>(0, static_cast<int>(d.arcs.size()))(rng);
    return d;
  }
}

// ---------------------------------------------------------------------------
// Component template

const char* role_name(Role r) {
  static constexpr const char* kNames[kRoleCount] = {"Vi", "A", "B", "C", "D", "E", "F", "G", "Vj", "H"};
  return kNames[static_cast<std::size_t>(r)];
}

const char* to_string(ArcConfig c) {
  switch (c) {
    case ArcConfig::ConfigA:
      return "config-a";
    case ArcConfig::ConfigB:
      return "config-b";
    case ArcConfig::Other:
      return "other";
  }
  return "?";
}

std::vector<RoleEdge> ComponentTemplate::base_edges() const {
  std::vector<RoleEdge> out;
  for (const RoleEdge& e : network_edges) {
    if (e.parent != Role::H && e.child != Role::H) out.push_back(e);
  }
  return out;
}

namespace {

using enum Role;

ComponentTemplate make_standard_template() {
  ComponentTemplate t;
  t.cardinality = {9, 9, 2, 3, 9, 2, 2, 9, 9, 2};
  t.network_edges = {{Vi, B}, {A, B}, {B, C}, {H, C}, {H, F}, {E, F}, {D, E}, {G, E}, {F, Vj}};
  t.config_a_extra = {{E, C}, {F, C}};
  t.config_b_extra = {{B, F}, {C, F}};
  t.validate();
  return t;
}

// One component on its own: node ids equal role indices (H included only when asked).
Dag component_dag(const ComponentTemplate& t, const std::vector<RoleEdge>& role_edges, bool with_hidden) {
  std::vector<NodeInfo> nodes;
  const std::size_t count = with_hidden ? kRoleCount : kRoleCount - 1;
  for (std::size_t r = 0; r < count; ++r) nodes.push_back({role_name(static_cast<Role>(r)), t.cardinality[r]});
  std::vector<Edge> edges;
  for (const RoleEdge& e : role_edges) edges.push_back({static_cast<NodeId>(e.parent), static_cast<NodeId>(e.child)});
  return Dag(std::move(nodes), std::move(edges));
}

bool directed_path(const Dag& g, NodeId from, NodeId to, const std::vector<char>* allowed = nullptr) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack{from};
  while (!stack.empty()) {
    NodeId v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    if (seen[static_cast<std::size_t>(v)]) continue;
    seen[static_cast<std::size_t>(v)] = 1;
    for (NodeId c : g.children(v)) {
      if (allowed == nullptr || (*allowed)[static_cast<std::size_t>(c)]) stack.push_back(c);
    }
  }
  return false;
}

NodeSet role_set(std::initializer_list<Role> roles) {
  NodeSet s;
  for (Role r : roles) s.push_back(static_cast<NodeId>(r));
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

void ComponentTemplate::validate() const {
  auto fail = [](const std::string& what) { throw Error("component template: " + what); };
  const Dag network = component_dag(*this, network_edges, true);
  for (std::size_t v = 0; v < network.size(); ++v) {
    if (network.parents(static_cast<NodeId>(v)).size() > 2) {
      fail(std::string(role_name(static_cast<Role>(v))) + " has more than two parents");
    }
  }
  if (network.parents(static_cast<NodeId>(C)) != role_set({B, H})) fail("C's parents must be {B, H}");
  if (!network.children(static_cast<NodeId>(C)).empty()) fail("C must have no children");
  const NodeSet& f_parents = network.parents(static_cast<NodeId>(F));
  for (Role r : {E, H}) {
    if (!std::binary_search(f_parents.begin(), f_parents.end(), static_cast<NodeId>(r))) fail("F's parents must include E and H");
  }
  if (network.parents(static_cast<NodeId>(Vj)) != role_set({F})) fail("V_j's parent must be F");

  const auto base = base_edges();
  auto shape = [&](const std::vector<RoleEdge>& extra) {
    auto edges = base;
    edges.insert(edges.end(), extra.begin(), extra.end());
    return component_dag(*this, edges, false);
  };
  const Dag shape_a = shape(config_a_extra);
  const Dag shape_b = shape(config_b_extra);
  const std::vector<NodeId> fixed{static_cast<NodeId>(A), static_cast<NodeId>(B), static_cast<NodeId>(D),
                                  static_cast<NodeId>(E), static_cast<NodeId>(G)};
  const std::vector<NodeId> cf{static_cast<NodeId>(C), static_cast<NodeId>(F)};
  if (parameter_count(shape_a, fixed) != 186 || parameter_count(shape_b, fixed) != 186) {
    fail("A, B, D, E, G must carry 186 parameters in both shapes");
  }
  if (parameter_count(shape_a, cf) != 18) fail("C and F must carry 18 parameters in shape A");
  if (parameter_count(shape_b, cf) != 16) fail("C and F must carry 16 parameters in shape B");
  const auto vi = static_cast<NodeId>(Vi);
  const auto vj = static_cast<NodeId>(Vj);
  if (!directed_path(shape_b, vi, vj)) fail("shape B must contain a directed V_i -> V_j path");
  if (directed_path(shape_a, vi, vj) || directed_path(shape_a, vj, vi)) {
    fail("shape A must contain no directed path between V_i and V_j");
  }
}

const ComponentTemplate& ComponentTemplate::standard() {
  static const ComponentTemplate t = make_standard_template();
  return t;
}

// ---------------------------------------------------------------------------
// Construction

std::string vertex_label(int v) { return "V" + std::to_string(v + 1); }

std::string gadget_label(Role r, Arc a) {
  return std::string(role_name(r)) + "_" + std::to_string(a.from + 1) + "_" + std::to_string(a.to + 1);
}

namespace {

std::optional<int> parse_positive(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v <= 0) return std::nullopt;
  return v;
}

}  // namespace

std::optional<int> parse_vertex_label(std::string_view label) {
  if (label.size() < 2 || label[0] != 'V') return std::nullopt;
  auto v = parse_positive(label.substr(1));
  if (!v) return std::nullopt;
  return *v - 1;
}

std::optional<GadgetLabel> parse_gadget_label(std::string_view label) {
  const auto first = label.find('_');
  if (first == std::string_view::npos) return std::nullopt;
  const auto name = label.substr(0, first);
  std::optional<Role> role;
  for (Role r : {A, B, C, D, E, F, G, H}) {
    if (name == role_name(r)) role = r;
  }
  if (!role) return std::nullopt;
  const auto rest = label.substr(first + 1);
  const auto sep = rest.find('_');
  if (sep == std::string_view::npos) return std::nullopt;
  auto from = parse_positive(rest.substr(0, sep));
  auto to = parse_positive(rest.substr(sep + 1));
  if (!from || !to || *from == *to) return std::nullopt;
  return GadgetLabel{*role, {*from - 1, *to - 1}};
}

std::uint64_t vertex_parameter_total(const DbfasInstance& d) {
  std::uint64_t total = 0;
  for (int v = 0; v < d.vertex_count; ++v) total += std::uint64_t{8} << d.in_degree(v);
  return total;
}

std::uint64_t solution_parameter_formula(const DbfasInstance& d, std::size_t feedback_size) {
  const std::uint64_t arcs = d.arcs.size();
  return 186 * arcs + 18 * feedback_size + 16 * (arcs - feedback_size) + vertex_parameter_total(d);
}

std::uint64_t learn_bound(const DbfasInstance& d) {
  return solution_parameter_formula(d, static_cast<std::size_t>(d.k));
}

Dag LearnInstance::observable_skeleton() const {
  std::vector<NodeInfo> nodes;
  for (NodeId v : observables) nodes.push_back(network.structure().node(v));
  return Dag(std::move(nodes), {});
}

const ArcNodes& LearnInstance::nodes_of(Arc a) const {
  auto idx = dbfas.arc_index(a);
  if (!idx) throw InvalidArgument("arc " + vertex_label(a.from) + " -> " + vertex_label(a.to) + " is not in the instance");
  return arc_nodes[*idx];
}

LearnInstance build_learn_instance(const DbfasInstance& d, const BuildOptions& options) {
  d.validate();
  if (!options.allow_open_vertices) {
    for (int v = 0; v < d.vertex_count; ++v) {
      if (d.in_degree(v) == 0 || d.out_degree(v) == 0) {
        throw InvalidArgument("vertex " + vertex_label(v) +
                              " has no incoming or no outgoing arc; preprocess the instance first");
      }
    }
  }
  const ComponentTemplate& t = ComponentTemplate::standard();
  LearnInstance inst;
  inst.dbfas = d;

  std::vector<NodeInfo> nodes;
  for (int v = 0; v < d.vertex_count; ++v) nodes.push_back({vertex_label(v), t.card(Vi)});
  const std::array<Role, 7> inner{A, B, C, D, E, F, G};
  for (const Arc& a : d.arcs) {
    ArcNodes an;
    an.id[static_cast<std::size_t>(Vi)] = a.from;
    an.id[static_cast<std::size_t>(Vj)] = a.to;
    for (Role r : inner) {
      an.id[static_cast<std::size_t>(r)] = static_cast<NodeId>(nodes.size());
      nodes.push_back({gadget_label(r, a), t.card(r)});
    }
    inst.arc_nodes.push_back(an);
  }
  for (std::size_t i = 0; i < d.arcs.size(); ++i) {
    inst.arc_nodes[i].id[static_cast<std::size_t>(H)] = static_cast<NodeId>(nodes.size());
    nodes.push_back({gadget_label(H, d.arcs[i]), t.card(H)});
  }
  const std::size_t observable_count = static_cast<std::size_t>(d.vertex_count) + 7 * d.arcs.size();
  for (std::size_t v = 0; v < nodes.size(); ++v) {
    (v < observable_count ? inst.observables : inst.hidden).push_back(static_cast<NodeId>(v));
  }

  std::vector<Edge> edges;
  for (const ArcNodes& an : inst.arc_nodes) {
    for (const RoleEdge& e : t.network_edges) edges.push_back({an[e.parent], an[e.child]});
  }
  Dag structure(std::move(nodes), std::move(edges));
  inst.network = perfect_network<DyadicRational>(structure, options.alpha);
  inst.bound = learn_bound(d);
  return inst;
}

LearnInstance recover_learn_instance(const ParametricBn& network, const NodeSet& observables, std::uint64_t bound) {
  const Dag& g = network.structure();
  int vertex_count = 0;
  std::vector<Arc> arcs;
  for (const auto& info : g.nodes()) {
    if (auto v = parse_vertex_label(info.label)) {
      vertex_count = std::max(vertex_count, *v + 1);
    } else if (auto gl = parse_gadget_label(info.label)) {
      if (gl->role == C) arcs.push_back(gl->arc);
    } else {
      throw InvalidArgument("label '" + info.label + "' is not a reduction label");
    }
  }
  std::sort(arcs.begin(), arcs.end());
  DbfasInstance d{vertex_count, arcs, 0, {}};
  for (int v = 0; v < vertex_count; ++v) d.original_ids.push_back(v);
  const std::uint64_t fixed = 202 * arcs.size() + vertex_parameter_total(d);
  if (bound < fixed || (bound - fixed) % 2 != 0 || (bound - fixed) / 2 > arcs.size()) {
    throw InvalidArgument("bound " + std::to_string(bound) + " does not correspond to any k for this network");
  }
  d.k = static_cast<int>((bound - fixed) / 2);
  d.validate();

  bool open = false;
  for (int v = 0; v < vertex_count; ++v) open = open || d.in_degree(v) == 0 || d.out_degree(v) == 0;
  BuildOptions options;
  options.allow_open_vertices = open;
  if (!arcs.empty()) {
    // A nodes are roots, so p(A = 0) is alpha itself.
    const auto a_node = g.find(gadget_label(A, arcs.front()));
    if (!a_node) throw InvalidArgument("network lacks " + gadget_label(A, arcs.front()));
    options.alpha = network.cpt(*a_node).rows.front().front();
  }
  LearnInstance inst = build_learn_instance(d, options);
  if (!(inst.network == network)) {
    throw InvalidArgument("network is not the one the reduction builds for its arcs");
  }
  if (inst.observables != observables) throw InvalidArgument("observable set does not match the reduction");
  return inst;
}

// ---------------------------------------------------------------------------
// Solutions

namespace {

void require_observable_nodes(const LearnInstance& inst, const Dag& f) {
  const auto skeleton = inst.observable_skeleton();
  if (f.nodes() != skeleton.nodes()) {
    throw InvalidArgument("DAG is not defined over the instance's observable variables");
  }
}

NodeSet sorted_ids(const ArcNodes& an, std::initializer_list<Role> roles) {
  NodeSet s;
  for (Role r : roles) s.push_back(an[r]);
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

ArcConfig classify_component(const LearnInstance& inst, const Dag& f, Arc a) {
  require_observable_nodes(inst, f);
  const ArcNodes& an = inst.nodes_of(a);
  const NodeSet& pc = f.parents(an[C]);
  const NodeSet& pf = f.parents(an[F]);
  if (pc == sorted_ids(an, {B, E, F}) && pf == sorted_ids(an, {E})) return ArcConfig::ConfigA;
  if (pc == sorted_ids(an, {B}) && pf == sorted_ids(an, {B, C, E})) return ArcConfig::ConfigB;
  return ArcConfig::Other;
}

Dag forward_solution(const LearnInstance& inst, const std::vector<Arc>& feedback_arcs) {
  const ComponentTemplate& t = ComponentTemplate::standard();
  std::vector<char> in_set(inst.dbfas.arcs.size(), 0);
  for (const Arc& a : feedback_arcs) {
    auto idx = inst.dbfas.arc_index(a);
    if (!idx) throw InvalidArgument("arc " + vertex_label(a.from) + " -> " + vertex_label(a.to) + " is not in the instance");
    in_set[*idx] = 1;
  }
  const auto base = t.base_edges();
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < inst.arc_nodes.size(); ++i) {
    const ArcNodes& an = inst.arc_nodes[i];
    for (const RoleEdge& e : base) edges.push_back({an[e.parent], an[e.child]});
    for (const RoleEdge& e : in_set[i] ? t.config_a_extra : t.config_b_extra) edges.push_back({an[e.parent], an[e.child]});
  }
  if (!is_acyclic(inst.observables.size(), edges)) {
    throw InvalidArgument("arc set misses a directed cycle: the solution DAG would be cyclic");
  }
  return inst.observable_skeleton().with_edges(std::move(edges));
}

std::vector<Arc> backward_solution(const LearnInstance& inst, const Dag& f, PathScope scope) {
  require_observable_nodes(inst, f);
  std::vector<Arc> out;
  std::vector<char> allowed(f.size(), 0);
  for (std::size_t i = 0; i < inst.arc_nodes.size(); ++i) {
    const ArcNodes& an = inst.arc_nodes[i];
    bool path = false;
    if (scope == PathScope::Global) {
      path = directed_path(f, an[Vi], an[Vj]);
    } else {
      for (std::size_t r = 0; r + 1 < kRoleCount; ++r) allowed[static_cast<std::size_t>(an.id[r])] = 1;
      path = directed_path(f, an[Vi], an[Vj], &allowed);
      for (std::size_t r = 0; r + 1 < kRoleCount; ++r) allowed[static_cast<std::size_t>(an.id[r])] = 0;
    }
    if (!path) out.push_back(inst.dbfas.arcs[i]);
  }
  return out;
}

Dag normalize_solution(const LearnInstance& inst, const Dag& f, PathScope scope) {
  return forward_solution(inst, backward_solution(inst, f, scope));
}

HPrime build_h_prime(const LearnInstance& inst, const std::vector<ArcConfig>& configs) {
  if (configs.size() != inst.arc_nodes.size()) throw InvalidArgument("need one shape per arc");
  HPrime out{inst.network.structure(), {}};
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const ArcNodes& an = inst.arc_nodes[i];
    std::array<Move, 2> moves;
    if (configs[i] == ArcConfig::ConfigA) {
      moves = {Move{Move::Kind::AddEdge, {an[E], an[H]}}, Move{Move::Kind::ReverseCoveredEdge, {an[H], an[F]}}};
    } else if (configs[i] == ArcConfig::ConfigB) {
      moves = {Move{Move::Kind::AddEdge, {an[B], an[H]}}, Move{Move::Kind::ReverseCoveredEdge, {an[H], an[C]}}};
    } else {
      throw InvalidArgument("arc " + vertex_label(inst.dbfas.arcs[i].from) + " -> " +
                            vertex_label(inst.dbfas.arcs[i].to) + " has no legal shape");
    }
    for (const Move& m : moves) {
      out.graph = apply_move(out.graph, m);
      out.moves.push_back(m);
    }
  }
  return out;
}

const char* to_string(InclusionVerdict v) {
  switch (v) {
    case InclusionVerdict::ByConstruction:
      return "by-construction";
    case InclusionVerdict::Verified:
      return "verified";
    case InclusionVerdict::Refuted:
      return "refuted";
    case InclusionVerdict::Undetermined:
      return "undetermined";
  }
  return "?";
}

DiscreteDistribution observable_distribution(const LearnInstance& inst, const DeskScale& scale) {
  return marginalize(inst.network, inst.hidden, scale);
}

VerificationReport verify_learn_solution(const LearnInstance& inst, const Dag& f, std::uint64_t max_params,
                                         const DeskScale& scale) {
  require_observable_nodes(inst, f);
  VerificationReport report;
  report.parameter_count = parameter_count(f);
  report.max_params = max_params;
  report.within_bound = report.parameter_count <= max_params;
  std::vector<Arc> shape_a;
  bool all_legal = true;
  for (const Arc& a : inst.dbfas.arcs) {
    const ArcConfig c = classify_component(inst, f, a);
    report.configs.push_back(c);
    if (c == ArcConfig::ConfigA) shape_a.push_back(a);
    all_legal = all_legal && c != ArcConfig::Other;
  }
  if (all_legal) {
    // f's components are legal shapes; it is a constructed solution when it has no other edges.
    std::vector<Edge> expected;
    try {
      expected = forward_solution(inst, shape_a).edges();
    } catch (const InvalidArgument&) {
      expected.clear();
    }
    if (expected == f.edges()) {
      report.inclusion = InclusionVerdict::ByConstruction;
      return report;
    }
  }
  try {
    if (inst.observables.size() > scale.exhaustive_nodes) throw DeskScaleExceeded("too many observables");
    const auto d = observable_distribution(inst, scale);
    report.inclusion = includes_distribution(f, d, scale) ? InclusionVerdict::Verified : InclusionVerdict::Refuted;
  } catch (const DeskScaleExceeded&) {
    report.inclusion = InclusionVerdict::Undetermined;
  }
  return report;
}

}  // namespace bnhard
