#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

#include "bnhard/distribution.hpp"
#include "support.hpp"

namespace bnhard {
namespace {

using testing::all_dags;
using testing::make_dag;

const DyadicRational kAlpha(BigInt(1), 4);

DyadicRational frac(long n, unsigned log2_den) { return DyadicRational(BigInt(n), log2_den); }

// Reference independence test on rationals: sums masses over full
// assignments and compares p(x,y|z) with p(x|z) p(y|z) directly.
bool independent_by_rationals(const DiscreteDistribution& d, NodeId x, NodeId y, const NodeSet& z) {
  std::map<std::vector<int>, mpq_class> pz, pxz, pyz, pxyz;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto a = d.assignment_of(i);
    mpq_class m(d.numerators()[i]);
    std::vector<int> zv;
    for (NodeId v : z) zv.push_back(a[static_cast<std::size_t>(v)]);
    auto with = [&](std::initializer_list<int> extra) {
      std::vector<int> k = zv;
      k.insert(k.end(), extra);
      return k;
    };
    pz[zv] += m;
    pxz[with({a[static_cast<std::size_t>(x)]})] += m;
    pyz[with({a[static_cast<std::size_t>(y)]})] += m;
    pxyz[with({a[static_cast<std::size_t>(x)], a[static_cast<std::size_t>(y)]})] += m;
  }
  const int rx = d.variables()[static_cast<std::size_t>(x)].cardinality;
  const int ry = d.variables()[static_cast<std::size_t>(y)].cardinality;
  for (const auto& [zv, mz] : pz) {
    if (mz == 0) continue;
    for (int a = 0; a < rx; ++a) {
      for (int b = 0; b < ry; ++b) {
        auto kx = zv, ky = zv, kxy = zv;
        kx.push_back(a);
        ky.push_back(b);
        kxy.push_back(a);
        kxy.push_back(b);
        mpq_class lhs = pxyz[kxy] / mz;
        mpq_class rhs = (pxz[kx] / mz) * (pyz[ky] / mz);
        if (lhs != rhs) return false;
      }
    }
  }
  return true;
}

TEST(PerfectCpt, ZeroBiasedValues) {
  const std::vector<int> cards{9, 2, 2, 9};
  auto root = perfect_cpt<DyadicRational>(0, {}, cards, kAlpha);
  ASSERT_EQ(root.rows.size(), 1u);
  EXPECT_EQ(root.rows[0][0], frac(1, 4));
  EXPECT_EQ(root.rows[0][5], frac(15, 7));

  auto two = perfect_cpt<DyadicRational>(3, {1, 2}, cards, kAlpha);
  const std::size_t both_zero = two.row_index(std::vector<int>{0, 0});
  const std::size_t one_zero = two.row_index(std::vector<int>{1, 0});
  const std::size_t none_zero = two.row_index(std::vector<int>{1, 1});
  EXPECT_EQ(two.rows[both_zero][0], frac(1, 4));
  EXPECT_EQ(two.rows[one_zero][0], frac(1, 6));
  EXPECT_EQ(two.rows[none_zero][0], frac(1, 7));
  EXPECT_EQ(two.rows[none_zero][3], frac(127, 10));
}

TEST(PerfectCpt, RejectsBadAlphaAndUnrepresentablePowers) {
  const std::vector<int> cards{2, 2, 2, 2};
  EXPECT_THROW(perfect_cpt<DyadicRational>(0, {}, cards, DyadicRational(1)), InvalidArgument);
  EXPECT_THROW(perfect_cpt<DyadicRational>(0, {}, cards, frac(3, 4)), InvalidArgument);
  EXPECT_THROW(perfect_cpt<DyadicRational>(0, {}, cards, DyadicRational(0)), InvalidArgument);
  try {
    perfect_cpt<DyadicRational>(3, {0, 1, 2}, cards, kAlpha);
    FAIL() << "three parents are not dyadic";
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("3 parents"), std::string::npos);
  }
  // alpha = 1/4 keeps one parent exact but not two.
  EXPECT_NO_THROW(perfect_cpt<DyadicRational>(1, {0}, cards, frac(1, 2)));
  EXPECT_THROW(perfect_cpt<DyadicRational>(2, {0, 1}, cards, frac(1, 2)), InvalidArgument);
  EXPECT_THROW(perfect_cpt<DyadicRational>(0, {}, std::vector<int>{4}, kAlpha), InvalidArgument);
}

TEST(PerfectCpt, QuarticRingHandlesFourParents) {
  const std::vector<int> cards{2, 3, 2, 2, 3};
  auto cpt = perfect_cpt<QuarticDyadic>(4, {0, 1, 2, 3}, cards, kAlpha);
  ASSERT_EQ(cpt.rows.size(), 24u);
  for (const auto& row : cpt.rows) {
    QuarticDyadic sum(0);
    for (const auto& p : row) sum += p;
    EXPECT_EQ(sum, QuarticDyadic(1));
  }
  // N1 = 4: alpha^(31/16) = 2^(-31/4) = r / 256.
  const std::size_t all_set = cpt.row_index(std::vector<int>{1, 2, 1, 1});
  EXPECT_EQ(cpt.rows[all_set][0], QuarticDyadic(QuarticInt::root_power(1), 8));
}

TEST(PerfectCpt, DenominatorsFitTenBits) {
  for (int r : {2, 3, 9}) {
    for (int pa1 : {2, 3, 9}) {
      for (int pa2 : {2, 3, 9}) {
        const std::vector<int> cards{pa1, pa2, r};
        for (const NodeSet& parents : {NodeSet{}, NodeSet{0}, NodeSet{0, 1}}) {
          for (const auto& row : perfect_cpt<DyadicRational>(2, parents, cards, kAlpha).rows) {
            for (const auto& p : row) EXPECT_LE(p.log2_denominator(), 10u);
          }
        }
      }
    }
  }
}

TEST(PerfectCpt, AgreesWithZeroCountTableForTwoParents) {
  for (int r : {2, 3, 9}) {
    for (int pa1 : {2, 3, 9}) {
      for (int pa2 : {2, 9}) {
        const std::vector<int> cards{pa1, pa2, r};
        auto a = perfect_cpt<DyadicRational>(2, {0, 1}, cards, kAlpha);
        auto b = zero_count_cpt(2, {0, 1}, cards);
        EXPECT_EQ(a.rows, b.rows) << r << " " << pa1 << " " << pa2;
      }
    }
  }
  EXPECT_THROW(zero_count_cpt(1, {0}, std::vector<int>{2, 2}), InvalidArgument);
}

TEST(PerfectCpt, FloatingModeTracksExactValues) {
  const std::vector<int> cards{3, 2, 9};
  auto exact = perfect_cpt<DyadicRational>(2, {0, 1}, cards, kAlpha);
  auto approx = perfect_cpt_approx(2, {0, 1}, cards, 1.0 / 16.0);
  for (std::size_t r = 0; r < exact.rows.size(); ++r) {
    for (std::size_t x = 0; x < 9; ++x) EXPECT_NEAR(approx.rows[r][x], to_double(exact.rows[r][x]), 1e-15);
  }
}

TEST(BayesNet, RejectsMalformedTables) {
  Dag g = make_dag({"X", "Y"}, {{0, 1}});
  auto good = perfect_network<DyadicRational>(g, kAlpha);
  auto cpts = good.cpts();
  cpts[1].rows[0][0] = frac(1, 3);
  EXPECT_THROW(ParametricBn(g, cpts), InvalidArgument);
  cpts = good.cpts();
  cpts[1].rows.pop_back();
  EXPECT_THROW(ParametricBn(g, cpts), InvalidArgument);
  cpts = good.cpts();
  cpts[1].rows[0] = {frac(3, 1), frac(-1, 1)};
  EXPECT_THROW(ParametricBn(g, cpts), InvalidArgument);
  cpts = good.cpts();
  cpts[1].parents.clear();
  EXPECT_THROW(ParametricBn(g, cpts), InvalidArgument);
}

TEST(Joint, Examples) {
  auto roots = perfect_network<DyadicRational>(make_dag({"X", "Y"}, {}), kAlpha);
  EXPECT_EQ(joint_probability(roots, std::vector<int>{0, 0}), frac(1, 8));
  EXPECT_THROW(joint_probability(roots, std::vector<int>{0, 2}), InvalidArgument);

  auto nine = perfect_network<DyadicRational>(make_dag({"X"}, {}, {9}), kAlpha);
  DyadicRational sum(0);
  for (int x = 0; x < 9; ++x) {
    const auto p = joint_probability(nine, std::vector<int>{x});
    EXPECT_EQ(p, x == 0 ? frac(1, 4) : frac(15, 7));
    sum += p;
  }
  EXPECT_EQ(sum, DyadicRational(1));
}

TEST(Joint, TableMatchesPointwiseProduct) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Dag g = testing::random_dag(4, 0.5, rng, {2, 3, 2, 3});
    if (testing::max_in_degree(g) > 2) continue;
    auto bn = perfect_network<DyadicRational>(g, kAlpha);
    auto table = joint_table(bn);
    EXPECT_EQ(table.total(), DyadicRational(1));
    for (std::size_t i = 0; i < table.size(); ++i) {
      ASSERT_EQ(table.mass_at(i), joint_probability(bn, table.assignment_of(i)));
    }
  }
}

TEST(Marginalize, Examples) {
  Dag g = make_dag({"H", "X"}, {{0, 1}}, {2, 3});
  auto bn = perfect_network<DyadicRational>(g, kAlpha);
  auto joint = marginalize(bn, {});
  EXPECT_EQ(joint.numerators(), joint_table(bn).numerators());

  auto px = marginalize(bn, {0});
  ASSERT_EQ(px.variable_count(), 1u);
  EXPECT_EQ(px.variables()[0].label, "X");
  for (int x = 0; x < 3; ++x) {
    DyadicRational expect(0);
    for (int h = 0; h < 2; ++h) {
      expect += bn.cpt(0).rows[0][static_cast<std::size_t>(h)] *
                bn.cpt(1).rows[static_cast<std::size_t>(h)][static_cast<std::size_t>(x)];
    }
    EXPECT_EQ(px.mass(std::vector<int>{x}), expect);
  }
  EXPECT_EQ(px.total(), DyadicRational(1));
}

TEST(Marginalize, TableBound) {
  Dag g = make_dag(testing::default_labels(8), {}, {9, 9, 9, 9, 9, 9, 9, 9});
  auto bn = perfect_network<DyadicRational>(g, kAlpha);
  try {
    marginalize(bn, {0});
    FAIL();
  } catch (const DeskScaleExceeded& e) {
    EXPECT_NE(std::string(e.what()).find("bound"), std::string::npos);
  }
}

TEST(Independence, Examples) {
  const std::vector<Variable> two_coins{{"X", 2}, {"Y", 2}};
  auto product = DiscreteDistribution::from_masses(two_coins, {frac(1, 2), frac(1, 2), frac(1, 2), frac(1, 2)});
  EXPECT_TRUE(is_independent(product, {0, 1, {}}));
  auto correlated = DiscreteDistribution::from_masses(two_coins, {frac(1, 1), DyadicRational(0), DyadicRational(0), frac(1, 1)});
  EXPECT_FALSE(is_independent(correlated, {0, 1, {}}));
  EXPECT_FALSE(slice_rank_one(correlated, 0, 1));

  auto chain = joint_table(perfect_network<DyadicRational>(make_dag({"X", "W", "Y"}, {{0, 1}, {1, 2}}), kAlpha));
  EXPECT_TRUE(is_independent(chain, {0, 2, {1}}));
  EXPECT_FALSE(is_independent(chain, {0, 2, {}}));
  EXPECT_THROW(is_independent(chain, {0, 0, {}}), InvalidArgument);
  EXPECT_THROW(is_independent(chain, {0, 2, {2}}), InvalidArgument);
}

TEST(Independence, ThreeRoutesAgree) {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> small(1, 5);
  for (int trial = 0; trial < 25; ++trial) {
    Dag g = testing::random_dag(4, 0.4, rng, {2, 3, 2, 2});
    if (testing::max_in_degree(g) > 2) continue;
    DiscreteDistribution d;
    if (trial % 2 == 0) {
      d = joint_table(perfect_network<DyadicRational>(g, kAlpha));
    } else {
      // Arbitrary table, some entries zero.
      std::vector<DyadicRational> masses;
      for (int i = 0; i < 24; ++i) masses.push_back(DyadicRational(small(rng) - 1));
      d = DiscreteDistribution::from_masses({{"A", 2}, {"B", 3}, {"C", 2}, {"D", 2}}, masses);
    }
    for_each_triple(4, DeskScale{}, [&](NodeId x, NodeId y, const NodeSet& z) {
      const bool formula = is_independent(d, {x, y, z});
      ASSERT_EQ(formula, independent_by_rationals(d, x, y, z));
      std::vector<std::size_t> keep(z.begin(), z.end());
      keep.push_back(static_cast<std::size_t>(x));
      keep.push_back(static_cast<std::size_t>(y));
      std::sort(keep.begin(), keep.end());
      auto m = d.marginal(keep);
      const auto px = static_cast<std::size_t>(std::find(keep.begin(), keep.end(), static_cast<std::size_t>(x)) - keep.begin());
      const auto py = static_cast<std::size_t>(std::find(keep.begin(), keep.end(), static_cast<std::size_t>(y)) - keep.begin());
      ASSERT_EQ(formula, slice_rank_one(m, px, py));
    });
  }
}

TEST(MarginalWalk, VisitsEverySubsetOnce) {
  auto d = joint_table(perfect_network<DyadicRational>(make_dag(testing::default_labels(5), {{0, 1}, {2, 3}}), kAlpha));
  std::set<std::vector<std::size_t>> seen;
  std::size_t visits = 0;
  for_each_marginal(d, 2, [&](const std::vector<std::size_t>& s, const DiscreteDistribution& m) {
    ++visits;
    seen.insert(s);
    ASSERT_EQ(m.variable_count(), s.size());
    ASSERT_EQ(m.numerators(), d.marginal(s).numerators());
  });
  EXPECT_EQ(visits, 26u);  // 32 subsets minus 5 singletons and the empty set
  EXPECT_EQ(seen.size(), 26u);
}

TEST(Inclusion, Examples) {
  const std::vector<Variable> two{{"X", 2}, {"Y", 2}};
  auto correlated = DiscreteDistribution::from_masses(two, {frac(1, 1), frac(0, 0), frac(0, 0), frac(1, 1)});
  std::vector<std::string> warnings;
  WarningSink sink = [&](const std::string& w) { warnings.push_back(w); };
  EXPECT_TRUE(includes_distribution(make_dag({"X", "Y"}, {{0, 1}}), correlated, {}, sink));
  EXPECT_FALSE(includes_distribution(make_dag({"X", "Y"}, {}), correlated, {}, sink));
  EXPECT_EQ(warnings.size(), 2u);
  EXPECT_THROW(includes_distribution(make_dag({"X", "Z"}, {}), correlated, {}, sink), InvalidArgument);
}

TEST(Inclusion, MonotoneUnderEdgeAddition) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 15; ++trial) {
    Dag truth = testing::random_dag(4, 0.5, rng, {2, 2, 3, 2});
    if (testing::max_in_degree(truth) > 2) continue;
    auto d = joint_table(perfect_network<DyadicRational>(truth, kAlpha));
    for (const Dag& g : all_dags(4, {2, 2, 3, 2})) {
      if (!includes_distribution(g, d)) continue;
      for (NodeId a = 0; a < 4; ++a) {
        for (NodeId b = 0; b < 4; ++b) {
          if (a == b || g.adjacent(a, b)) continue;
          auto edges = g.edges();
          edges.push_back({a, b});
          if (!is_acyclic(4, edges)) continue;
          ASSERT_TRUE(includes_distribution(g.with_edges(edges), d));
        }
      }
    }
  }
}

TEST(Perfectness, Examples) {
  const std::vector<Variable> two{{"X", 2}, {"Y", 2}};
  auto uniform = DiscreteDistribution::from_masses(two, {frac(1, 2), frac(1, 2), frac(1, 2), frac(1, 2)});
  EXPECT_FALSE(is_perfect(uniform, make_dag({"X", "Y"}, {{0, 1}})));
  EXPECT_TRUE(is_perfect(uniform, make_dag({"X", "Y"}, {})));
}

TEST(Perfectness, EveryThreeNodeStructure) {
  for (const Dag& g : all_dags(3, {2, 3, 2})) {
    auto d = joint_table(perfect_network<DyadicRational>(g, kAlpha));
    auto report = check_perfectness(d, g);
    EXPECT_TRUE(report.perfect());
    EXPECT_EQ(report.triples, 6u);
    EXPECT_EQ(report.separations, independence_map(g).size());
  }
}

TEST(Perfectness, ThreeParentNodeNeedsQuarticRing) {
  Dag g = make_dag({"A", "B", "C", "D"}, {{0, 3}, {1, 3}, {2, 3}}, {2, 3, 2, 2});
  EXPECT_THROW(perfect_network<DyadicRational>(g, kAlpha), InvalidArgument);
  auto bn = perfect_network<QuarticDyadic>(g, kAlpha);
  auto d = joint_table(bn);
  EXPECT_EQ(d.total(), QuarticDyadic(1));
  EXPECT_TRUE(is_perfect(d, g));
  EXPECT_TRUE(is_independent(d, {0, 1, {}}));
  EXPECT_FALSE(is_independent(d, {0, 1, {3}}));
}

}  // namespace
}  // namespace bnhard
