#include "bnhard/distribution.hpp"

#include <bit>
#include <cmath>
#include <iostream>

namespace bnhard {

unsigned alpha_exponent(const DyadicRational& alpha) {
  if (alpha.numerator() != 1 || alpha.log2_denominator() == 0) {
    throw InvalidArgument("alpha must be 2^-a for some a >= 1, got " + to_string(alpha));
  }
  return alpha.log2_denominator();
}

Cpt<DyadicRational> zero_count_cpt(NodeId node, const NodeSet& parents, std::span<const int> cardinalities) {
  if (parents.size() != 2) {
    throw InvalidArgument("the zero-count table is defined for exactly two parents, got " +
                          std::to_string(parents.size()));
  }
  const int r = cardinalities[static_cast<std::size_t>(node)];
  if (r < 2 || (r - 1) & (r - 2)) {
    throw InvalidArgument("cardinality " + std::to_string(r) + " does not give dyadic entries");
  }
  const int split_bits = std::countr_zero(static_cast<unsigned>(r - 1));
  // Indexed by the number of parent values equal to zero.
  const DyadicRational zero_mass[3] = {DyadicRational(1, 7), DyadicRational(1, 6), DyadicRational(1, 4)};

  Cpt<DyadicRational> cpt;
  cpt.node = node;
  cpt.cardinality = r;
  cpt.parents = parents;
  for (NodeId p : parents) cpt.parent_cards.push_back(cardinalities[static_cast<std::size_t>(p)]);
  for (std::size_t row = 0; row < cpt.row_count(); ++row) {
    const auto values = cpt.row_values(row);
    const int zeros = static_cast<int>((values[0] == 0) + (values[1] == 0));
    const DyadicRational& p0 = zero_mass[zeros];
    std::vector<DyadicRational> entries(static_cast<std::size_t>(r), (DyadicRational(1) - p0).scaled(-split_bits));
    entries[0] = p0;
    cpt.rows.push_back(std::move(entries));
  }
  return cpt;
}

Cpt<double> perfect_cpt_approx(NodeId node, const NodeSet& parents, std::span<const int> cardinalities, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie strictly between 0 and 1");
  Cpt<double> cpt;
  cpt.node = node;
  cpt.cardinality = cardinalities[static_cast<std::size_t>(node)];
  cpt.parents = parents;
  for (NodeId p : parents) cpt.parent_cards.push_back(cardinalities[static_cast<std::size_t>(p)]);
  for (std::size_t row = 0; row < cpt.row_count(); ++row) {
    const auto values = cpt.row_values(row);
    const auto n1 = static_cast<int>(std::count_if(values.begin(), values.end(), [](int v) { return v != 0; }));
    const double p0 = std::pow(alpha, 2.0 - std::ldexp(1.0, -n1));
    std::vector<double> entries(static_cast<std::size_t>(cpt.cardinality), (1.0 - p0) / (cpt.cardinality - 1));
    entries[0] = p0;
    cpt.rows.push_back(std::move(entries));
  }
  return cpt;
}

WarningSink stderr_warnings() {
  return [](const std::string& message) { std::cerr << "warning: " << message << '\n'; };
}

namespace detail {

void require_matching_variables(const Dag& g, const std::vector<Variable>& vars) {
  if (vars.size() != g.size()) {
    throw InvalidArgument("distribution has " + std::to_string(vars.size()) + " variables, graph has " +
                          std::to_string(g.size()) + " nodes");
  }
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto& node = g.node(static_cast<NodeId>(i));
    if (vars[i].label != node.label || vars[i].cardinality != node.cardinality) {
      throw InvalidArgument("variable " + std::to_string(i) + " ('" + vars[i].label + "') does not match node '" +
                            node.label + "'");
    }
  }
}

}  // namespace detail

namespace {
struct StopWalk {};
}  // namespace

bool includes_distribution(const Dag& g, const DiscreteDistribution& d, const DeskScale& scale,
                           const WarningSink& warn) {
  detail::require_matching_variables(g, d.variables());
  if (g.size() > scale.exhaustive_nodes) {
    throw DeskScaleExceeded("inclusion check over " + std::to_string(g.size()) + " variables exceeds the bound of " +
                            std::to_string(scale.exhaustive_nodes));
  }
  if (!d.strictly_positive() && warn) {
    warn("distribution has zero-mass entries; the global Markov test may differ from factorization");
  }
  // Each triple (x, y, z) is decided on the marginal over {x, y} and z.
  NodeSet z;
  try {
    for_each_marginal(d, 2, [&](const std::vector<std::size_t>& s, const DiscreteDistribution& table) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          z.clear();
          for (std::size_t k = 0; k < s.size(); ++k) {
            if (k != i && k != j) z.push_back(static_cast<NodeId>(s[k]));
          }
          if (d_separated(g, static_cast<NodeId>(s[i]), static_cast<NodeId>(s[j]), z) &&
              !slice_rank_one(table, i, j)) {
            throw StopWalk{};
          }
        }
      }
    });
  } catch (const StopWalk&) {
    return false;
  }
  return true;
}

}  // namespace bnhard
