#pragma once

// Template bodies for distribution.hpp. Not meant to be included directly.

#include <algorithm>
#include <bit>
#include <type_traits>

namespace bnhard {

namespace detail {

inline std::size_t checked_table_size(std::span<const int> cards, const DeskScale& scale) {
  std::size_t total = 1;
  for (int c : cards) {
    const auto cc = static_cast<std::size_t>(c);
    if (total > scale.table_entries / cc) {
      throw DeskScaleExceeded("explicit table over " + std::to_string(cards.size()) +
                              " variables exceeds the bound of " + std::to_string(scale.table_entries) + " entries");
    }
    total *= cc;
  }
  if (total > scale.table_entries) {
    throw DeskScaleExceeded("explicit table needs " + std::to_string(total) + " entries; the bound is " +
                            std::to_string(scale.table_entries));
  }
  return total;
}

inline std::vector<std::size_t> strides_of(std::span<const int> cards) {
  std::vector<std::size_t> strides(cards.size(), 1);
  for (std::size_t i = cards.size(); i-- > 1;) strides[i - 1] = strides[i] * static_cast<std::size_t>(cards[i]);
  return strides;
}

// a*b == c*d, reusing scratch space for the BigInt case.
inline bool products_equal(const BigInt& a, const BigInt& b, const BigInt& c, const BigInt& d, BigInt& t1,
                           BigInt& t2) {
  mpz_mul(t1.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_mul(t2.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
  return mpz_cmp(t1.get_mpz_t(), t2.get_mpz_t()) == 0;
}

template <class Int>
bool products_equal(const Int& a, const Int& b, const Int& c, const Int& d, Int& /*t1*/, Int& /*t2*/) {
  return a * b == c * d;
}

template <class Int>
bool is_unit_interval(const Dyadic<Int>& /*v*/) {
  return true;  // no order on the quartic ring; rows summing to one is still enforced
}

template <>
inline bool is_unit_interval<BigInt>(const Dyadic<BigInt>& v) {
  return sgn(v.numerator()) >= 0 && v <= DyadicRational(1);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// BayesNet

template <class V>
BayesNet<V>::BayesNet(Dag structure, std::vector<Cpt<V>> cpts)
    : structure_(std::move(structure)), cpts_(std::move(cpts)) {
  if (cpts_.size() != structure_.size()) {
    throw InvalidArgument("network has " + std::to_string(structure_.size()) + " nodes but " +
                          std::to_string(cpts_.size()) + " tables");
  }
  for (std::size_t i = 0; i < cpts_.size(); ++i) {
    const auto id = static_cast<NodeId>(i);
    const Cpt<V>& cpt = cpts_[i];
    const std::string& name = structure_.label(id);
    if (cpt.node != id) throw InvalidArgument("table for '" + name + "' is stored out of order");
    if (cpt.cardinality != structure_.cardinality(id)) {
      throw InvalidArgument("table for '" + name + "' has the wrong cardinality");
    }
    if (cpt.parents != structure_.parents(id)) {
      throw InvalidArgument("table for '" + name + "' lists parents that differ from the graph");
    }
    if (cpt.parent_cards.size() != cpt.parents.size()) {
      throw InvalidArgument("table for '" + name + "' has a malformed parent cardinality list");
    }
    for (std::size_t p = 0; p < cpt.parents.size(); ++p) {
      if (cpt.parent_cards[p] != structure_.cardinality(cpt.parents[p])) {
        throw InvalidArgument("table for '" + name + "' has a wrong parent cardinality");
      }
    }
    if (cpt.rows.size() != cpt.row_count()) {
      throw InvalidArgument("table for '" + name + "' has " + std::to_string(cpt.rows.size()) + " rows, expected " +
                            std::to_string(cpt.row_count()));
    }
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto& row = cpt.rows[r];
      if (row.size() != static_cast<std::size_t>(cpt.cardinality)) {
        throw InvalidArgument("table for '" + name + "' row " + std::to_string(r) + " has the wrong length");
      }
      V sum(0);
      for (const V& p : row) {
        if constexpr (std::is_same_v<V, DyadicRational> || std::is_same_v<V, QuarticDyadic>) {
          if (!detail::is_unit_interval(p)) {
            throw InvalidArgument("table for '" + name + "' row " + std::to_string(r) + " has an entry outside [0, 1]");
          }
        }
        sum += p;
      }
      if (!(sum == V(1))) {
        throw InvalidArgument("table for '" + name + "' row " + std::to_string(r) + " does not sum to 1");
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Distribution

template <class Int>
Distribution<Int>::Distribution(std::vector<Variable> variables, unsigned log2_denominator, std::vector<Int> numerators)
    : vars_(std::move(variables)), exp_(log2_denominator), nums_(std::move(numerators)) {
  std::size_t total = 1;
  for (const auto& v : vars_) {
    if (v.cardinality < 2) throw InvalidArgument("variable '" + v.label + "' has cardinality below 2");
    total *= static_cast<std::size_t>(v.cardinality);
  }
  if (nums_.size() != total) {
    throw InvalidArgument("table has " + std::to_string(nums_.size()) + " entries, expected " + std::to_string(total));
  }
}

template <class Int>
Distribution<Int> Distribution<Int>::from_masses(std::vector<Variable> variables,
                                                 const std::vector<Dyadic<Int>>& masses) {
  unsigned e = 0;
  for (const auto& m : masses) e = std::max(e, m.log2_denominator());
  std::vector<Int> nums;
  nums.reserve(masses.size());
  for (const auto& m : masses) nums.push_back(m.numerator_at(e));
  return Distribution(std::move(variables), e, std::move(nums));
}

template <class Int>
std::optional<std::size_t> Distribution<Int>::position(const std::string& label) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].label == label) return i;
  }
  return std::nullopt;
}

template <class Int>
std::size_t Distribution<Int>::index_of(std::span<const int> assignment) const {
  if (assignment.size() != vars_.size()) throw InvalidArgument("assignment has the wrong number of values");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (assignment[i] < 0 || assignment[i] >= vars_[i].cardinality) {
      throw InvalidArgument("value " + std::to_string(assignment[i]) + " out of range for '" + vars_[i].label + "'");
    }
    idx = idx * static_cast<std::size_t>(vars_[i].cardinality) + static_cast<std::size_t>(assignment[i]);
  }
  return idx;
}

template <class Int>
std::vector<int> Distribution<Int>::assignment_of(std::size_t index) const {
  std::vector<int> a(vars_.size(), 0);
  for (std::size_t i = vars_.size(); i-- > 0;) {
    const auto c = static_cast<std::size_t>(vars_[i].cardinality);
    a[i] = static_cast<int>(index % c);
    index /= c;
  }
  return a;
}

template <class Int>
Dyadic<Int> Distribution<Int>::total() const {
  Int sum(0);
  for (const Int& n : nums_) sum += n;
  return Dyadic<Int>(std::move(sum), exp_);
}

template <class Int>
bool Distribution<Int>::strictly_positive() const {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return std::all_of(nums_.begin(), nums_.end(), [](const BigInt& n) { return sgn(n) > 0; });
  } else {
    return std::none_of(nums_.begin(), nums_.end(), [](const Int& n) { return is_zero(n); });
  }
}

template <class Int>
Distribution<Int> Distribution<Int>::marginal(std::span<const std::size_t> keep) const {
  const std::size_t n = vars_.size();
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] >= n || (i > 0 && keep[i] <= keep[i - 1])) {
      throw InvalidArgument("marginal: positions must be ascending and in range");
    }
  }
  std::vector<Variable> out_vars;
  for (std::size_t p : keep) out_vars.push_back(vars_[p]);
  if (keep.size() == n) return *this;

  std::vector<std::size_t> out_stride(n, 0);
  std::size_t out_size = 1;
  for (std::size_t k = keep.size(); k-- > 0;) {
    out_stride[keep[k]] = out_size;
    out_size *= static_cast<std::size_t>(vars_[keep[k]].cardinality);
  }
  std::vector<Int> out(out_size, Int(0));
  std::vector<int> digit(n, 0);
  std::size_t oi = 0;
  for (std::size_t i = 0; i < nums_.size(); ++i) {
    out[oi] += nums_[i];
    for (std::size_t k = n; k-- > 0;) {
      ++digit[k];
      oi += out_stride[k];
      if (digit[k] < vars_[k].cardinality) break;
      oi -= out_stride[k] * static_cast<std::size_t>(vars_[k].cardinality);
      digit[k] = 0;
    }
  }
  return Distribution(std::move(out_vars), exp_, std::move(out));
}

template <class Int>
Distribution<Int> Distribution<Int>::without(std::size_t position) const {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (i != position) keep.push_back(i);
  }
  return marginal(keep);
}

// ---------------------------------------------------------------------------
// Parameterizations

template <class V>
Cpt<V> perfect_cpt(NodeId node, const NodeSet& parents, std::span<const int> cardinalities,
                   const DyadicRational& alpha) {
  const long a = static_cast<long>(alpha_exponent(alpha));
  const int r = cardinalities[static_cast<std::size_t>(node)];
  if (r < 2 || (r - 1) & (r - 2)) {
    throw InvalidArgument("cardinality " + std::to_string(r) +
                          " splits the non-zero mass over a count that is not a power of two");
  }
  const int split_bits = std::countr_zero(static_cast<unsigned>(r - 1));

  Cpt<V> cpt;
  cpt.node = node;
  cpt.cardinality = r;
  cpt.parents = parents;
  for (NodeId p : parents) cpt.parent_cards.push_back(cardinalities[static_cast<std::size_t>(p)]);

  // p(0 | N1 = n) for every possible n; alpha^(2 - 2^-n) = 2^(-a (2^(n+1) - 1) / 2^n).
  std::vector<V> zero_mass;
  for (std::size_t n1 = 0; n1 <= parents.size(); ++n1) {
    const long den = 1L << n1;
    try {
      zero_mass.push_back(V::two_to(-a * (2 * den - 1), den));
    } catch (const InvalidArgument&) {
      throw InvalidArgument("alpha = 2^-" + std::to_string(a) + " with " + std::to_string(parents.size()) +
                            " parents needs an exponent that this number type cannot represent exactly");
    }
  }

  const std::size_t q = cpt.row_count();
  cpt.rows.reserve(q);
  for (std::size_t row = 0; row < q; ++row) {
    const auto values = cpt.row_values(row);
    const auto n1 = static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](int v) { return v != 0; }));
    const V& p0 = zero_mass[n1];
    const V rest = (V(1) - p0).scaled(-split_bits);
    std::vector<V> entries(static_cast<std::size_t>(r), rest);
    entries[0] = p0;
    cpt.rows.push_back(std::move(entries));
  }
  return cpt;
}

template <class V>
BayesNet<V> perfect_network(const Dag& g, const DyadicRational& alpha) {
  std::vector<int> cards;
  for (const auto& info : g.nodes()) cards.push_back(info.cardinality);
  std::vector<Cpt<V>> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    cpts.push_back(perfect_cpt<V>(id, g.parents(id), cards, alpha));
  }
  return BayesNet<V>(g, std::move(cpts));
}

// ---------------------------------------------------------------------------
// Evaluation

template <class V>
V joint_probability(const BayesNet<V>& bn, std::span<const int> assignment) {
  const Dag& g = bn.structure();
  if (assignment.size() != g.size()) throw InvalidArgument("assignment must cover every node");
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (assignment[v] < 0 || assignment[v] >= g.cardinality(static_cast<NodeId>(v))) {
      throw InvalidArgument("value " + std::to_string(assignment[v]) + " out of range for '" +
                            g.label(static_cast<NodeId>(v)) + "'");
    }
  }
  V out(1);
  std::vector<int> pa;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& cpt = bn.cpt(static_cast<NodeId>(v));
    pa.clear();
    for (NodeId p : cpt.parents) pa.push_back(assignment[static_cast<std::size_t>(p)]);
    out *= cpt.rows[cpt.row_index(pa)][static_cast<std::size_t>(assignment[v])];
  }
  return out;
}

template <class Int>
Distribution<Int> joint_table(const BayesNet<Dyadic<Int>>& bn, const DeskScale& scale) {
  const Dag& g = bn.structure();
  const std::size_t n = g.size();
  std::vector<Variable> vars;
  std::vector<int> cards;
  for (const auto& info : g.nodes()) {
    vars.push_back({info.label, info.cardinality});
    cards.push_back(info.cardinality);
  }
  const std::size_t total = detail::checked_table_size(cards, scale);
  if (n == 0) return Distribution<Int>({}, 0, {Int(1)});

  // Each table rescaled to its own largest denominator; the joint denominator
  // is the sum of those exponents.
  std::vector<std::vector<Int>> flat(n);
  unsigned joint_exp = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto& cpt = bn.cpt(static_cast<NodeId>(v));
    unsigned e = 0;
    for (const auto& row : cpt.rows) {
      for (const auto& p : row) e = std::max(e, p.log2_denominator());
    }
    for (const auto& row : cpt.rows) {
      for (const auto& p : row) flat[v].push_back(p.numerator_at(e));
    }
    joint_exp += e;
  }

  const auto order = g.topological_order();
  const auto strides = detail::strides_of(cards);
  std::vector<int> value(n, 0);
  std::vector<Int> prefix(n);
  std::vector<Int> out(total);

  auto factor = [&](NodeId v) -> const Int& {
    const auto& cpt = bn.cpt(v);
    std::size_t row = 0;
    for (std::size_t i = 0; i < cpt.parents.size(); ++i) {
      row = row * static_cast<std::size_t>(cpt.parent_cards[i]) +
            static_cast<std::size_t>(value[static_cast<std::size_t>(cpt.parents[i])]);
    }
    return flat[static_cast<std::size_t>(v)]
               [row * static_cast<std::size_t>(cpt.cardinality) + static_cast<std::size_t>(value[static_cast<std::size_t>(v)])];
  };

  std::size_t from = 0;
  std::size_t idx = 0;
  for (;;) {
    for (std::size_t k = from; k < n; ++k) {
      if (k == 0) {
        prefix[0] = factor(order[0]);
      } else {
        prefix[k] = prefix[k - 1] * factor(order[k]);
      }
    }
    out[idx] = prefix[n - 1];

    std::size_t k = n;
    bool done = true;
    while (k-- > 0) {
      const auto v = static_cast<std::size_t>(order[k]);
      ++value[v];
      idx += strides[v];
      if (value[v] < cards[v]) {
        done = false;
        break;
      }
      idx -= strides[v] * static_cast<std::size_t>(cards[v]);
      value[v] = 0;
    }
    if (done) break;
    from = k;
  }
  return Distribution<Int>(std::move(vars), joint_exp, std::move(out));
}

template <class Int>
Distribution<Int> marginalize(const BayesNet<Dyadic<Int>>& bn, const NodeSet& hidden, const DeskScale& scale) {
  auto joint = joint_table(bn, scale);
  std::vector<std::size_t> keep;
  for (std::size_t v = 0; v < bn.size(); ++v) {
    if (!std::binary_search(hidden.begin(), hidden.end(), static_cast<NodeId>(v))) keep.push_back(v);
  }
  return joint.marginal(keep);
}

// ---------------------------------------------------------------------------
// Independence

template <class Int>
bool is_independent(const Distribution<Int>& d, const IndependenceTriple& t) {
  const auto n = static_cast<NodeId>(d.variable_count());
  auto in_range = [&](NodeId v) { return v >= 0 && v < n; };
  if (!in_range(t.x) || !in_range(t.y) || t.x == t.y) throw InvalidArgument("is_independent: bad x/y");
  for (NodeId v : t.z) {
    if (!in_range(v) || v == t.x || v == t.y) throw InvalidArgument("is_independent: bad conditioning set");
  }
  auto sorted = [](std::vector<std::size_t> s) {
    std::sort(s.begin(), s.end());
    return s;
  };
  std::vector<std::size_t> zs(t.z.begin(), t.z.end());
  std::vector<std::size_t> xyz = zs;
  xyz.push_back(static_cast<std::size_t>(t.x));
  xyz.push_back(static_cast<std::size_t>(t.y));
  std::vector<std::size_t> xz = zs;
  xz.push_back(static_cast<std::size_t>(t.x));
  std::vector<std::size_t> yz = zs;
  yz.push_back(static_cast<std::size_t>(t.y));
  xyz = sorted(xyz);
  xz = sorted(xz);
  yz = sorted(yz);
  zs = sorted(zs);

  const auto p_xyz = d.marginal(xyz);
  const auto p_xz = d.marginal(xz);
  const auto p_yz = d.marginal(yz);
  const auto p_z = d.marginal(zs);

  // Project an assignment of xyz onto a subset (both sorted lists of positions).
  auto project = [](const std::vector<std::size_t>& from, const std::vector<int>& a,
                    const std::vector<std::size_t>& onto) {
    std::vector<int> out;
    out.reserve(onto.size());
    std::size_t j = 0;
    for (std::size_t i = 0; i < from.size() && j < onto.size(); ++i) {
      if (from[i] == onto[j]) {
        out.push_back(a[i]);
        ++j;
      }
    }
    return out;
  };

  Int t1(0);
  Int t2(0);
  for (std::size_t i = 0; i < p_xyz.size(); ++i) {
    const auto a = p_xyz.assignment_of(i);
    const Int& nz = p_z.numerators()[p_z.index_of(project(xyz, a, zs))];
    if (is_zero(nz)) continue;
    const Int& nxz = p_xz.numerators()[p_xz.index_of(project(xyz, a, xz))];
    const Int& nyz = p_yz.numerators()[p_yz.index_of(project(xyz, a, yz))];
    if (!detail::products_equal(p_xyz.numerators()[i], nz, nxz, nyz, t1, t2)) return false;
  }
  return true;
}

template <class Int>
bool slice_rank_one(const Distribution<Int>& d, std::size_t x, std::size_t y) {
  const std::size_t n = d.variable_count();
  if (x >= n || y >= n || x == y) throw InvalidArgument("slice_rank_one: bad positions");
  const auto& vars = d.variables();
  std::vector<int> cards;
  for (const auto& v : vars) cards.push_back(v.cardinality);
  const auto strides = detail::strides_of(cards);
  const auto rx = static_cast<std::size_t>(cards[x]);
  const auto ry = static_cast<std::size_t>(cards[y]);
  const std::size_t sx = strides[x];
  const std::size_t sy = strides[y];
  const auto& nums = d.numerators();

  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != x && i != y) rest.push_back(i);
  }
  std::vector<int> digit(rest.size(), 0);
  std::size_t base = 0;
  Int t1(0);
  Int t2(0);
  for (;;) {
    // Pivot: first non-zero entry of the slice.
    std::size_t px = rx;
    std::size_t py = ry;
    for (std::size_t a = 0; a < rx && px == rx; ++a) {
      for (std::size_t b = 0; b < ry; ++b) {
        if (!is_zero(nums[base + a * sx + b * sy])) {
          px = a;
          py = b;
          break;
        }
      }
    }
    if (px != rx) {
      const Int& pivot = nums[base + px * sx + py * sy];
      for (std::size_t a = 0; a < rx; ++a) {
        if (a == px) continue;
        const Int& a_py = nums[base + a * sx + py * sy];
        for (std::size_t b = 0; b < ry; ++b) {
          if (b == py) continue;
          if (!detail::products_equal(nums[base + a * sx + b * sy], pivot, a_py, nums[base + px * sx + b * sy], t1,
                                      t2)) {
            return false;
          }
        }
      }
    }
    std::size_t k = rest.size();
    bool done = true;
    while (k-- > 0) {
      const std::size_t v = rest[k];
      ++digit[k];
      base += strides[v];
      if (digit[k] < cards[v]) {
        done = false;
        break;
      }
      base -= strides[v] * static_cast<std::size_t>(cards[v]);
      digit[k] = 0;
    }
    if (done) return true;
  }
}

namespace detail {

template <class Int, class Visitor>
void marginal_walk(const Distribution<Int>& table, std::vector<std::size_t>& positions, std::size_t next,
                   std::size_t min_size, Visitor& visit) {
  visit(static_cast<const std::vector<std::size_t>&>(positions), table);
  if (positions.size() <= min_size) return;
  for (std::size_t i = next; i < positions.size(); ++i) {
    auto child = table.without(i);
    std::vector<std::size_t> child_positions = positions;
    child_positions.erase(child_positions.begin() + static_cast<std::ptrdiff_t>(i));
    marginal_walk(child, child_positions, i, min_size, visit);
  }
}

}  // namespace detail

template <class Int, class Visitor>
void for_each_marginal(const Distribution<Int>& d, std::size_t min_size, Visitor&& visit) {
  if (d.variable_count() < min_size) return;
  std::vector<std::size_t> positions(d.variable_count());
  for (std::size_t i = 0; i < positions.size(); ++i) positions[i] = i;
  detail::marginal_walk(d, positions, 0, min_size, visit);
}

namespace detail {

void require_matching_variables(const Dag& g, const std::vector<Variable>& vars);

}  // namespace detail

template <class Int>
PerfectnessReport check_perfectness(const Distribution<Int>& d, const Dag& g, const DeskScale& scale) {
  detail::require_matching_variables(g, d.variables());
  if (g.size() > scale.exhaustive_nodes) {
    throw DeskScaleExceeded("perfectness check over " + std::to_string(g.size()) + " variables exceeds the bound of " +
                            std::to_string(scale.exhaustive_nodes));
  }
  PerfectnessReport report;
  NodeSet z;
  for_each_marginal(d, 2, [&](const std::vector<std::size_t>& s, const Distribution<Int>& table) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      for (std::size_t j = i + 1; j < s.size(); ++j) {
        z.clear();
        for (std::size_t k = 0; k < s.size(); ++k) {
          if (k != i && k != j) z.push_back(static_cast<NodeId>(s[k]));
        }
        const bool separated = d_separated(g, static_cast<NodeId>(s[i]), static_cast<NodeId>(s[j]), z);
        const bool independent = slice_rank_one(table, i, j);
        ++report.triples;
        if (separated) ++report.separations;
        if (separated && !independent) ++report.missing_independences;
        if (!separated && independent) ++report.extra_independences;
      }
    }
  });
  return report;
}

}  // namespace bnhard
