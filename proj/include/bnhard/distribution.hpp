#pragma once

// Parametric Bayesian networks with exact conditional tables, explicit joint
// and marginal tables, and exact independence / inclusion / perfectness tests.
//
// Everything is templated on the numerator ring so the same code evaluates
// ordinary dyadic networks (BigInt) and the perfect family with more than two
// parents (QuarticInt). Tables store one shared power-of-two denominator, so
// summing and comparing products never needs rescaling.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bnhard/dyadic.hpp"
#include "bnhard/error.hpp"
#include "bnhard/graph.hpp"

namespace bnhard {

struct Variable {
  std::string label;
  int cardinality = 2;
  friend bool operator==(const Variable&, const Variable&) = default;
};

// Row-major, first parent most significant.
template <class V>
struct Cpt {
  NodeId node = 0;
  int cardinality = 2;
  NodeSet parents;
  std::vector<int> parent_cards;
  std::vector<std::vector<V>> rows;

  std::size_t row_count() const {
    std::size_t q = 1;
    for (int c : parent_cards) q *= static_cast<std::size_t>(c);
    return q;
  }
  // parent_values[i] is the value of parents[i].
  std::size_t row_index(std::span<const int> parent_values) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < parent_values.size(); ++i) {
      idx = idx * static_cast<std::size_t>(parent_cards[i]) + static_cast<std::size_t>(parent_values[i]);
    }
    return idx;
  }
  std::vector<int> row_values(std::size_t row) const {
    std::vector<int> values(parents.size(), 0);
    for (std::size_t i = parents.size(); i-- > 0;) {
      values[i] = static_cast<int>(row % static_cast<std::size_t>(parent_cards[i]));
      row /= static_cast<std::size_t>(parent_cards[i]);
    }
    return values;
  }
};

template <class V>
class BayesNet {
 public:
  BayesNet() = default;
  // Throws InvalidArgument when a table does not match the structure or a
  // row does not sum exactly to one.
  BayesNet(Dag structure, std::vector<Cpt<V>> cpts);

  const Dag& structure() const { return structure_; }
  std::size_t size() const { return structure_.size(); }
  const Cpt<V>& cpt(NodeId node) const { return cpts_.at(static_cast<std::size_t>(node)); }
  const std::vector<Cpt<V>>& cpts() const { return cpts_; }

  friend bool operator==(const BayesNet& a, const BayesNet& b) {
    if (!(a.structure_ == b.structure_)) return false;
    for (std::size_t i = 0; i < a.cpts_.size(); ++i) {
      if (a.cpts_[i].rows != b.cpts_[i].rows) return false;
    }
    return true;
  }

 private:
  Dag structure_;
  std::vector<Cpt<V>> cpts_;
};

using ParametricBn = BayesNet<DyadicRational>;

// Table over a list of variables; the last variable varies fastest.
// mass(a) = numerators[index(a)] / 2^log2_denominator.
template <class Int>
class Distribution {
 public:
  Distribution() = default;
  Distribution(std::vector<Variable> variables, unsigned log2_denominator, std::vector<Int> numerators);

  // From exact masses; the shared denominator is the largest one present.
  static Distribution from_masses(std::vector<Variable> variables, const std::vector<Dyadic<Int>>& masses);

  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t variable_count() const { return vars_.size(); }
  std::size_t size() const { return nums_.size(); }
  unsigned log2_denominator() const { return exp_; }
  const std::vector<Int>& numerators() const { return nums_; }

  std::optional<std::size_t> position(const std::string& label) const;
  std::size_t index_of(std::span<const int> assignment) const;
  std::vector<int> assignment_of(std::size_t index) const;
  Dyadic<Int> mass(std::span<const int> assignment) const { return Dyadic<Int>(nums_[index_of(assignment)], exp_); }
  Dyadic<Int> mass_at(std::size_t index) const { return Dyadic<Int>(nums_[index], exp_); }
  Dyadic<Int> total() const;
  bool strictly_positive() const;

  // Sum out everything except `keep` (ascending variable positions).
  Distribution marginal(std::span<const std::size_t> keep) const;
  Distribution without(std::size_t position) const;

 private:
  std::vector<Variable> vars_;
  unsigned exp_ = 0;
  std::vector<Int> nums_;
};

using DiscreteDistribution = Distribution<BigInt>;

// Zero-biased parameterization: for a node with N1 non-zero parent values,
//   p(0 | pa) = alpha^(2 - 2^-N1),  p(x | pa) = (1 - p(0 | pa)) / (r - 1) for x != 0.
// alpha must be 2^-a with a >= 1. Throws InvalidArgument when alpha is out of
// range or when the value is not representable in V (naming the parent count).
template <class V>
Cpt<V> perfect_cpt(NodeId node, const NodeSet& parents, std::span<const int> cardinalities,
                   const DyadicRational& alpha);

template <class V>
BayesNet<V> perfect_network(const Dag& g, const DyadicRational& alpha);

// The reduction's literal table for a node with exactly two parents, keyed by
// the number of parent values equal to zero: 2 -> 1/16, 1 -> 1/64, 0 -> 1/128
// for state 0, the remainder split evenly over the other states.
Cpt<DyadicRational> zero_count_cpt(NodeId node, const NodeSet& parents, std::span<const int> cardinalities);

// Floating-point evaluation of the same family for alpha values whose powers
// are not exact. Exploratory only; no exact check uses it.
Cpt<double> perfect_cpt_approx(NodeId node, const NodeSet& parents, std::span<const int> cardinalities, double alpha);

// alpha = 2^-a; returns a, or throws InvalidArgument.
unsigned alpha_exponent(const DyadicRational& alpha);

template <class V>
V joint_probability(const BayesNet<V>& bn, std::span<const int> assignment);

// Explicit joint table over all nodes, in node order.
template <class Int>
Distribution<Int> joint_table(const BayesNet<Dyadic<Int>>& bn, const DeskScale& scale = {});

// Joint table with `hidden` summed out. Throws DeskScaleExceeded when the
// joint table would exceed the configured size.
template <class Int>
Distribution<Int> marginalize(const BayesNet<Dyadic<Int>>& bn, const NodeSet& hidden, const DeskScale& scale = {});

// Exact test of x _||_ y | z, where ids are variable positions in d:
// p(x,y,z) p(z) == p(x,z) p(y,z) for every z with p(z) > 0.
template <class Int>
bool is_independent(const Distribution<Int>& d, const IndependenceTriple& t);

// Test of (position x) _||_ (position y) | (all other variables of d), done
// slice by slice as a rank-one check: for each z the matrix p(., ., z) has rank
// at most one. Equivalent to is_independent with z = the remaining variables.
template <class Int>
bool slice_rank_one(const Distribution<Int>& d, std::size_t x, std::size_t y);

// Depth-first walk over every subset of d's variables with at least
// `min_size` members; each marginal is computed from its parent superset.
// visit(const std::vector<std::size_t>& positions, const Distribution<Int>& marginal).
template <class Int, class Visitor>
void for_each_marginal(const Distribution<Int>& d, std::size_t min_size, Visitor&& visit);

using WarningSink = std::function<void(const std::string&)>;
WarningSink stderr_warnings();

// Every independence g implies holds in d (global Markov condition). d's
// variables must match g's nodes (labels, cardinalities, order). Tables with
// zero entries are reported through `warn` and still evaluated.
bool includes_distribution(const Dag& g, const DiscreteDistribution& d, const DeskScale& scale = {},
                           const WarningSink& warn = stderr_warnings());

struct PerfectnessReport {
  std::size_t triples = 0;
  std::size_t separations = 0;
  std::size_t missing_independences = 0;  // d-separated, but dependent in d
  std::size_t extra_independences = 0;    // d-connected, but independent in d
  bool perfect() const { return missing_independences == 0 && extra_independences == 0; }
};

template <class Int>
PerfectnessReport check_perfectness(const Distribution<Int>& d, const Dag& g, const DeskScale& scale = {});

// d-separation in g and independence in d agree on every triple.
template <class Int>
bool is_perfect(const Distribution<Int>& d, const Dag& g, const DeskScale& scale = {}) {
  return check_perfectness(d, g, scale).perfect();
}

}  // namespace bnhard

#include "bnhard/distribution_impl.hpp"
