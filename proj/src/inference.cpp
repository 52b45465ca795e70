#include "bnhard/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>

#include "bnhard/reduction.hpp"

namespace bnhard {

namespace {

std::size_t index(NodeId v) { return static_cast<std::size_t>(v); }

bool contains(const NodeSet& s, NodeId v) { return std::binary_search(s.begin(), s.end(), v); }

// Query nodes plus all their ancestors, ascending.
NodeSet ancestral_set(const Dag& g, const NodeSet& seeds) {
  std::vector<char> seen(g.size(), 0);
  std::vector<NodeId> stack(seeds.begin(), seeds.end());
  for (NodeId v : seeds) seen[index(v)] = 1;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (NodeId p : g.parents(v)) {
      if (!seen[index(p)]) {
        seen[index(p)] = 1;
        stack.push_back(p);
      }
    }
  }
  NodeSet out;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (seen[v]) out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

NodeSet target_nodes(const Query& q) {
  NodeSet out;
  for (const auto& [v, value] : q.targets) out.push_back(v);
  return out;
}

// Sub-network on `nodes` (ascending, closed under parents except for
// overridden nodes). overrides replace a node's table wholesale; their
// parents must lie in `nodes`.
ParametricBn induced_network(const ParametricBn& bn, const NodeSet& nodes,
                             const std::map<NodeId, Cpt<DyadicRational>>& overrides = {}) {
  const Dag& g = bn.structure();
  std::vector<NodeId> local(g.size(), -1);
  std::vector<NodeInfo> infos;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    local[index(nodes[i])] = static_cast<NodeId>(i);
    infos.push_back(g.node(nodes[i]));
  }
  std::vector<Edge> edges;
  std::vector<Cpt<DyadicRational>> cpts;
  for (NodeId v : nodes) {
    auto it = overrides.find(v);
    Cpt<DyadicRational> cpt = it != overrides.end() ? it->second : bn.cpt(v);
    cpt.node = local[index(v)];
    for (NodeId& p : cpt.parents) {
      if (local[index(p)] < 0) throw InvalidArgument("sub-network is not closed under parents");
      edges.push_back({local[index(p)], cpt.node});
      p = local[index(p)];
    }
    cpts.push_back(std::move(cpt));
  }
  return ParametricBn(Dag(std::move(infos), std::move(edges)), std::move(cpts));
}

// Dense factor over non-evidence variables; the last variable varies fastest.
struct Factor {
  NodeSet vars;
  std::vector<int> cards;
  std::vector<DyadicRational> values;
};

std::size_t table_size(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) n *= static_cast<std::size_t>(c);
  return n;
}

// Calls visit(flat index, assignment) in table order.
template <class Visit>
void odometer(const std::vector<int>& cards, Visit&& visit) {
  std::vector<int> a(cards.size(), 0);
  const std::size_t n = table_size(cards);
  for (std::size_t i = 0; i < n; ++i) {
    visit(i, a);
    for (std::size_t j = a.size(); j-- > 0;) {
      if (++a[j] < cards[j]) break;
      a[j] = 0;
    }
  }
}

Factor cpt_factor(const ParametricBn& bn, NodeId v, const std::vector<std::optional<int>>& evidence) {
  const Dag& g = bn.structure();
  const auto& cpt = bn.cpt(v);
  NodeSet family = cpt.parents;
  family.insert(std::lower_bound(family.begin(), family.end(), v), v);
  Factor f;
  for (NodeId u : family) {
    if (!evidence[index(u)]) {
      f.vars.push_back(u);
      f.cards.push_back(g.cardinality(u));
    }
  }
  f.values.reserve(table_size(f.cards));
  std::vector<int> pv(cpt.parents.size());
  odometer(f.cards, [&](std::size_t, const std::vector<int>& a) {
    auto value_of = [&](NodeId u) {
      if (evidence[index(u)]) return *evidence[index(u)];
      return a[static_cast<std::size_t>(std::lower_bound(f.vars.begin(), f.vars.end(), u) - f.vars.begin())];
    };
    for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = value_of(cpt.parents[i]);
    f.values.push_back(cpt.rows[cpt.row_index(pv)][static_cast<std::size_t>(value_of(v))]);
  });
  return f;
}

// Product of `factors`, with `var` summed out.
Factor eliminate(const std::vector<const Factor*>& factors, NodeId var, int var_card) {
  NodeSet scope;
  for (const Factor* f : factors) scope.insert(scope.end(), f->vars.begin(), f->vars.end());
  std::sort(scope.begin(), scope.end());
  scope.erase(std::unique(scope.begin(), scope.end()), scope.end());
  scope.erase(std::remove(scope.begin(), scope.end(), var), scope.end());

  Factor out;
  out.vars = scope;
  for (NodeId u : scope) {
    for (const Factor* f : factors) {
      auto it = std::lower_bound(f->vars.begin(), f->vars.end(), u);
      if (it != f->vars.end() && *it == u) {
        out.cards.push_back(f->cards[static_cast<std::size_t>(it - f->vars.begin())]);
        break;
      }
    }
  }
  // The summed variable varies fastest.
  std::vector<int> full_cards = out.cards;
  full_cards.push_back(var_card);

  // Position of each factor variable within (scope..., var).
  std::vector<std::vector<std::size_t>> where(factors.size());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    for (NodeId u : factors[k]->vars) {
      where[k].push_back(u == var ? scope.size()
                                  : static_cast<std::size_t>(std::lower_bound(scope.begin(), scope.end(), u) -
                                                             scope.begin()));
    }
  }
  out.values.assign(table_size(out.cards), DyadicRational(0));
  odometer(full_cards, [&](std::size_t i, const std::vector<int>& a) {
    DyadicRational term(1);
    for (std::size_t k = 0; k < factors.size(); ++k) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < where[k].size(); ++j) {
        idx = idx * static_cast<std::size_t>(factors[k]->cards[j]) + static_cast<std::size_t>(a[where[k][j]]);
      }
      term = term * factors[k]->values[idx];
      if (term.is_zero()) break;
    }
    out.values[i / static_cast<std::size_t>(var_card)] = out.values[i / static_cast<std::size_t>(var_card)] + term;
  });
  return out;
}

// Skeleton leaf-peeling order of a forest.
std::vector<NodeId> leaf_order(const Dag& g) {
  std::vector<std::size_t> degree(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    degree[v] = g.parents(static_cast<NodeId>(v)).size() + g.children(static_cast<NodeId>(v)).size();
  }
  std::vector<char> done(g.size(), 0);
  std::vector<NodeId> queue;
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (degree[v] <= 1) queue.push_back(static_cast<NodeId>(v));
  }
  std::vector<NodeId> order;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId v = queue[head];
    if (done[index(v)]) continue;
    done[index(v)] = 1;
    order.push_back(v);
    auto release = [&](NodeId u) {
      if (!done[index(u)] && --degree[index(u)] <= 1) queue.push_back(u);
    };
    for (NodeId u : g.parents(v)) release(u);
    for (NodeId u : g.children(v)) release(u);
  }
  return order;
}

// Reduction layout read off the labels.
struct GadgetView {
  std::vector<std::optional<GadgetLabel>> label;  // per node; nullopt for V nodes
  std::map<std::pair<Role, Arc>, NodeId> by_role;

  NodeId at(Role r, Arc a) const { return by_role.at({r, a}); }
};

std::optional<GadgetView> read_gadget_view(const Dag& g) {
  GadgetView view;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const std::string& label = g.label(static_cast<NodeId>(v));
    if (parse_vertex_label(label)) {
      view.label.push_back(std::nullopt);
      continue;
    }
    auto gl = parse_gadget_label(label);
    if (!gl) return std::nullopt;
    view.label.push_back(gl);
    view.by_role[{gl->role, gl->arc}] = static_cast<NodeId>(v);
  }
  return view;
}

bool is_role(const GadgetView& view, NodeId v, Role r) {
  const auto& gl = view.label[index(v)];
  return gl && gl->role == r;
}

[[noreturn]] void not_gadget_shaped(const std::string& why) {
  throw InvalidArgument("network is not reduction-shaped (" + why +
                        "); cut-set conditioning only applies to reduction networks, use enumerate_marginal");
}

// Checks the structure cut-set conditioning relies on and returns the tree id
// of every non-C node.
std::vector<int> check_gadget_shape(const Dag& g, const GadgetView& view) {
  std::vector<int> parent(g.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[static_cast<std::size_t>(v)] != v) {
      parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
      v = parent[static_cast<std::size_t>(v)];
    }
    return v;
  };
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    if (!is_role(view, id, Role::C)) continue;
    const Arc a = view.label[v]->arc;
    auto b = view.by_role.find({Role::B, a});
    auto h = view.by_role.find({Role::H, a});
    if (b == view.by_role.end() || h == view.by_role.end()) not_gadget_shaped(g.label(id) + " lacks its B or H node");
    NodeSet expected{b->second, h->second};
    std::sort(expected.begin(), expected.end());
    if (g.parents(id) != expected || !g.children(id).empty()) {
      not_gadget_shaped(g.label(id) + " must have parents {B, H} of its arc and no children");
    }
  }
  for (const Edge& e : g.edges()) {
    if (is_role(view, e.parent, Role::C) || is_role(view, e.child, Role::C)) continue;
    const int a = find(e.parent);
    const int b = find(e.child);
    if (a == b) not_gadget_shaped("removing the C nodes leaves an undirected cycle");
    parent[static_cast<std::size_t>(a)] = b;
  }
  std::vector<int> tree(g.size(), -1);
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (!is_role(view, static_cast<NodeId>(v), Role::C)) tree[v] = find(static_cast<int>(v));
  }
  return tree;
}

}  // namespace

void validate_query(const ParametricBn& bn, const Query& q) {
  for (const auto& [v, value] : q.targets) {
    if (v < 0 || index(v) >= bn.size()) throw InvalidArgument("query node " + std::to_string(v) + " is out of range");
    if (value < 0 || value >= bn.structure().cardinality(v)) {
      throw InvalidArgument("value " + std::to_string(value) + " is out of range for " + bn.structure().label(v));
    }
  }
}

DyadicRational enumerate_marginal(const ParametricBn& bn, const Query& q, const DeskScale& scale) {
  validate_query(bn, q);
  const Dag& g = bn.structure();
  const NodeSet relevant = ancestral_set(g, target_nodes(q));
  std::vector<NodeId> order;
  for (NodeId v : g.topological_order()) {
    if (contains(relevant, v)) order.push_back(v);
  }

  BigInt states = 1;
  for (NodeId v : order) {
    if (!q.targets.contains(v)) states *= g.cardinality(v);
  }
  if (states > BigInt(static_cast<unsigned long>(scale.table_entries))) {
    throw DeskScaleExceeded("enumeration needs " + states.get_str() + " completions, above the limit of " +
                            std::to_string(scale.table_entries));
  }

  std::vector<int> value(g.size(), 0);
  for (const auto& [v, x] : q.targets) value[index(v)] = x;
  std::vector<int> pv;
  DyadicRational total(0);
  // Depth-first over `order` with a running product.
  auto walk = [&](auto&& self, std::size_t depth, const DyadicRational& prefix) -> void {
    if (depth == order.size()) {
      total = total + prefix;
      return;
    }
    const NodeId v = order[depth];
    const auto& cpt = bn.cpt(v);
    pv.resize(cpt.parents.size());
    for (std::size_t i = 0; i < pv.size(); ++i) pv[i] = value[index(cpt.parents[i])];
    const auto& row = cpt.rows[cpt.row_index(pv)];
    auto fixed = q.targets.find(v);
    const int lo = fixed != q.targets.end() ? fixed->second : 0;
    const int hi = fixed != q.targets.end() ? fixed->second + 1 : g.cardinality(v);
    for (int x = lo; x < hi; ++x) {
      const DyadicRational p = prefix * row[static_cast<std::size_t>(x)];
      if (p.is_zero()) continue;
      value[index(v)] = x;
      self(self, depth + 1, p);
    }
  };
  walk(walk, 0, DyadicRational(1));
  return total;
}

DiscreteDistribution enumerate_marginal_table(const ParametricBn& bn, const NodeSet& nodes, const DeskScale& scale) {
  for (NodeId v : nodes) {
    if (v < 0 || index(v) >= bn.size()) throw InvalidArgument("node " + std::to_string(v) + " is out of range");
  }
  if (!std::is_sorted(nodes.begin(), nodes.end()) || std::adjacent_find(nodes.begin(), nodes.end()) != nodes.end()) {
    throw InvalidArgument("marginal nodes must be ascending and distinct");
  }
  const NodeSet relevant = ancestral_set(bn.structure(), nodes);
  const auto joint = joint_table(induced_network(bn, relevant), scale);
  std::vector<std::size_t> keep;
  for (NodeId v : nodes) {
    keep.push_back(static_cast<std::size_t>(std::lower_bound(relevant.begin(), relevant.end(), v) - relevant.begin()));
  }
  return joint.marginal(keep);
}

DyadicRational polytree_marginal(const ParametricBn& bn, const Query& q) {
  validate_query(bn, q);
  const Dag& g = bn.structure();
  if (!is_polytree(g)) throw InvalidArgument("polytree_marginal needs a network whose skeleton has no cycle");
  std::vector<std::optional<int>> evidence(g.size());
  for (const auto& [v, x] : q.targets) evidence[index(v)] = x;

  std::vector<Factor> pool;
  std::vector<char> alive;
  pool.reserve(2 * g.size() + 1);
  DyadicRational constant(1);
  auto add = [&](Factor f) {
    if (f.vars.empty()) {
      constant = constant * f.values.front();
    } else {
      pool.push_back(std::move(f));
      alive.push_back(1);
    }
  };
  for (std::size_t v = 0; v < g.size(); ++v) add(cpt_factor(bn, static_cast<NodeId>(v), evidence));

  for (NodeId v : leaf_order(g)) {
    if (evidence[index(v)]) continue;
    std::vector<const Factor*> touching;
    std::vector<std::size_t> ids;
    for (std::size_t k = 0; k < pool.size(); ++k) {
      if (alive[k] && contains(pool[k].vars, v)) {
        touching.push_back(&pool[k]);
        ids.push_back(k);
      }
    }
    if (touching.empty()) continue;
    Factor f = eliminate(touching, v, g.cardinality(v));
    for (std::size_t k : ids) alive[k] = 0;
    add(std::move(f));
    if (constant.is_zero()) return constant;
  }
  return constant;
}

CutsetPlan build_cutset_plan(const ParametricBn& h, const Query& q) {
  validate_query(h, q);
  const Dag& g = h.structure();
  auto view = read_gadget_view(g);
  if (!view) not_gadget_shaped("a node label is neither a vertex nor a gadget label");
  const std::vector<int> tree = check_gadget_shape(g, *view);

  CutsetPlan plan;
  NodeSet attached;
  std::vector<int> relevant_trees;
  for (const auto& [v, x] : q.targets) {
    if (is_role(*view, v, Role::H)) throw InvalidArgument("query node " + g.label(v) + " is hidden");
    if (is_role(*view, v, Role::C)) {
      const Arc a = view->label[index(v)]->arc;
      const NodeId b = view->at(Role::B, a);
      if (!q.targets.contains(b)) plan.cutset.push_back(b);
      attached.push_back(v);
      relevant_trees.push_back(tree[index(view->at(Role::H, a))]);
      relevant_trees.push_back(tree[index(b)]);
    } else {
      relevant_trees.push_back(tree[index(v)]);
    }
  }
  std::sort(plan.cutset.begin(), plan.cutset.end());
  std::sort(relevant_trees.begin(), relevant_trees.end());
  relevant_trees.erase(std::unique(relevant_trees.begin(), relevant_trees.end()), relevant_trees.end());

  for (int t : relevant_trees) {
    CutsetComponent comp;
    for (std::size_t v = 0; v < g.size(); ++v) {
      if (tree[v] == t) comp.nodes.push_back(static_cast<NodeId>(v));
    }
    for (NodeId c : attached) {
      if (tree[index(view->at(Role::H, view->label[index(c)]->arc))] == t) comp.attached.push_back(c);
    }
    plan.components.push_back(std::move(comp));
  }
  std::sort(plan.components.begin(), plan.components.end(),
            [](const CutsetComponent& a, const CutsetComponent& b) { return a.nodes.front() < b.nodes.front(); });
  return plan;
}

DyadicRational cutset_marginal(const ParametricBn& h, const Query& q) {
  const CutsetPlan plan = build_cutset_plan(h, q);
  const Dag& g = h.structure();
  std::vector<int> cards;
  for (NodeId b : plan.cutset) cards.push_back(g.cardinality(b));

  DyadicRational total(0);
  odometer(cards, [&](std::size_t, const std::vector<int>& bvals) {
    std::map<NodeId, int> evidence = q.targets;
    for (std::size_t i = 0; i < plan.cutset.size(); ++i) evidence[plan.cutset[i]] = bvals[i];
    DyadicRational product(1);
    for (const auto& comp : plan.components) {
      // Each attached C keeps only its H parent: B is fixed by the evidence.
      std::map<NodeId, Cpt<DyadicRational>> overrides;
      for (NodeId c : comp.attached) {
        const auto& full = h.cpt(c);
        NodeId b_node = full.parents[0];
        NodeId h_node = full.parents[1];
        if (parse_gadget_label(g.label(b_node))->role == Role::H) std::swap(b_node, h_node);
        Cpt<DyadicRational> sliced;
        sliced.node = c;
        sliced.cardinality = full.cardinality;
        sliced.parents = {h_node};
        sliced.parent_cards = {g.cardinality(h_node)};
        for (int hv = 0; hv < g.cardinality(h_node); ++hv) {
          std::vector<int> pv(2);
          pv[b_node < h_node ? 0 : 1] = evidence.at(b_node);
          pv[b_node < h_node ? 1 : 0] = hv;
          sliced.rows.push_back(full.rows[full.row_index(pv)]);
        }
        overrides.emplace(c, std::move(sliced));
      }
      NodeSet nodes = comp.nodes;
      nodes.insert(nodes.end(), comp.attached.begin(), comp.attached.end());
      std::sort(nodes.begin(), nodes.end());
      const ParametricBn sub = induced_network(h, nodes, overrides);
      Query local;
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto it = evidence.find(nodes[i]);
        if (it != evidence.end()) local.targets[static_cast<NodeId>(i)] = it->second;
      }
      product = product * polytree_marginal(sub, local);
      if (product.is_zero()) break;
    }
    total = total + product;
  });
  return total;
}

NodeSet hidden_nodes(const ParametricBn& h) {
  NodeSet out;
  for (std::size_t v = 0; v < h.size(); ++v) {
    auto gl = parse_gadget_label(h.structure().label(static_cast<NodeId>(v)));
    if (gl && gl->role == Role::H) out.push_back(static_cast<NodeId>(v));
  }
  return out;
}

namespace {

void require_observable_triple(const ParametricBn& h, NodeId x, NodeId y, const NodeSet& z, const OracleConfig& config) {
  const Dag& g = h.structure();
  auto check = [&](NodeId v) {
    if (v < 0 || index(v) >= g.size()) throw InvalidArgument("query node " + std::to_string(v) + " is out of range");
  };
  check(x);
  check(y);
  for (NodeId v : z) check(v);
  if (x == y || contains(z, x) || contains(z, y)) throw InvalidArgument("x, y and z must be disjoint");
  if (z.size() > config.k) {
    throw InvalidArgument("conditioning set has " + std::to_string(z.size()) + " nodes, the oracle bound is " +
                          std::to_string(config.k));
  }
  const NodeSet hidden = hidden_nodes(h);
  for (NodeId v : z) {
    if (contains(hidden, v)) throw InvalidArgument("query node " + g.label(v) + " is hidden");
  }
  if (contains(hidden, x)) throw InvalidArgument("query node " + g.label(x) + " is hidden");
  if (contains(hidden, y)) throw InvalidArgument("query node " + g.label(y) + " is hidden");
}

mpq_class as_rational(const DyadicRational& d) {
  mpq_class q(d.numerator());
  mpz_class scale(1);
  scale <<= d.log2_denominator();
  q /= scale;
  return q;
}

// (1 + u) ln(1 + u) - u, which is >= 0 for u >= -1. The series avoids the
// cancellation near u = 0.
double divergence_kernel(double u) {
  if (u == -1.0) return 1.0;
  if (std::abs(u) >= 0.125) return (1.0 + u) * std::log1p(u) - u;
  // sum over n >= 2 of (-1)^n u^n / (n (n - 1))
  double sum = 0.0;
  double power = u;
  for (int n = 2; n < 40; ++n) {
    power *= -u;
    const double term = -power / (static_cast<double>(n) * (n - 1));
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// One cell's share of the information, in bits, written as
//   q ((1 + u) ln(1 + u) - u) / ln 2,  q = p(x,z) p(y,z) / p(z),  p(x,y,z) = q (1 + u).
// Summed over x and y this equals the usual p log(p pz / (pxz pyz)) sum (the
// -p + q parts cancel for each z), but every cell is non-negative, so the
// total carries no cancellation error. u is formed exactly before rounding.
double information_term(const DyadicRational& pxyz, const DyadicRational& pz, const DyadicRational& pxz,
                        const DyadicRational& pyz) {
  if (pz.is_zero()) return 0.0;
  const mpq_class den = as_rational(pxz * pyz);
  if (sgn(den) == 0) return 0.0;
  const mpq_class q = den / as_rational(pz);
  const mpq_class u = (as_rational(pxyz * pz) - den) / den;
  return q.get_d() * divergence_kernel(u.get_d()) / std::log(2.0);
}

// Compensated (Neumaier) running sum.
class Accumulator {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      carry_ += (sum_ - t) + v;
    } else {
      carry_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

}  // namespace

bool independence_oracle(const ParametricBn& h, const IndependenceTriple& t, const OracleConfig& config) {
  require_observable_triple(h, t.x, t.y, t.z, config);
  return d_separated(h.structure(), t.x, t.y, t.z);
}

double information_oracle(const ParametricBn& h, NodeId x, NodeId y, const NodeSet& z, const OracleConfig& config) {
  if (independence_oracle(h, {x, y, z}, config)) return 0.0;
  const Dag& g = h.structure();
  // Positions within (x, y, z...).
  std::vector<NodeId> vars{x, y};
  vars.insert(vars.end(), z.begin(), z.end());
  std::vector<int> cards;
  for (NodeId v : vars) cards.push_back(g.cardinality(v));

  // p(x, y, z) by the inference oracle, the smaller marginals by exact sums.
  std::vector<DyadicRational> joint(table_size(cards), DyadicRational(0));
  odometer(cards, [&](std::size_t i, const std::vector<int>& a) {
    Query q;
    for (std::size_t j = 0; j < vars.size(); ++j) q.targets[vars[j]] = a[j];
    joint[i] = cutset_marginal(h, q);
  });
  const std::size_t nz = table_size(std::vector<int>(cards.begin() + 2, cards.end()));
  const auto cx = static_cast<std::size_t>(cards[0]);
  const auto cy = static_cast<std::size_t>(cards[1]);
  std::vector<DyadicRational> pz(nz, DyadicRational(0));
  std::vector<DyadicRational> pxz(cx * nz, DyadicRational(0));
  std::vector<DyadicRational> pyz(cy * nz, DyadicRational(0));
  for (std::size_t xi = 0; xi < cx; ++xi) {
    for (std::size_t yi = 0; yi < cy; ++yi) {
      for (std::size_t zi = 0; zi < nz; ++zi) {
        const auto& p = joint[(xi * cy + yi) * nz + zi];
        pz[zi] = pz[zi] + p;
        pxz[xi * nz + zi] = pxz[xi * nz + zi] + p;
        pyz[yi * nz + zi] = pyz[yi * nz + zi] + p;
      }
    }
  }
  Accumulator sum;
  for (std::size_t xi = 0; xi < cx; ++xi) {
    for (std::size_t yi = 0; yi < cy; ++yi) {
      for (std::size_t zi = 0; zi < nz; ++zi) {
        sum.add(information_term(joint[(xi * cy + yi) * nz + zi], pz[zi], pxz[xi * nz + zi], pyz[yi * nz + zi]));
      }
    }
  }
  return sum.value();
}

double conditional_mutual_information(const DiscreteDistribution& d, std::size_t x, std::size_t y,
                                      const std::vector<std::size_t>& z) {
  std::vector<std::size_t> xyz{x, y};
  xyz.insert(xyz.end(), z.begin(), z.end());
  std::vector<std::size_t> sorted = xyz;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || (!sorted.empty() && sorted.back() >= d.variable_count())) {
    throw InvalidArgument("x, y and z must be distinct positions of the table");
  }
  auto table = [&](std::vector<std::size_t> keep) {
    std::sort(keep.begin(), keep.end());
    return std::pair{keep, d.marginal(keep)};
  };
  const auto [all_pos, all] = table(xyz);
  std::vector<std::size_t> xz{x}, yz{y};
  xz.insert(xz.end(), z.begin(), z.end());
  yz.insert(yz.end(), z.begin(), z.end());
  const auto [xz_pos, pxz] = table(xz);
  const auto [yz_pos, pyz] = table(yz);
  const auto [z_pos, pz] = table(std::vector<std::size_t>(z.begin(), z.end()));

  auto project = [&](const std::vector<std::size_t>& positions, const std::vector<int>& full) {
    std::vector<int> a;
    for (std::size_t p : positions) {
      a.push_back(full[static_cast<std::size_t>(std::lower_bound(all_pos.begin(), all_pos.end(), p) - all_pos.begin())]);
    }
    return a;
  };
  Accumulator sum;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const auto a = all.assignment_of(i);
    sum.add(information_term(all.mass_at(i), pz.mass(project(z_pos, a)), pxz.mass(project(xz_pos, a)),
                             pyz.mass(project(yz_pos, a))));
  }
  return sum.value();
}

}  // namespace bnhard
