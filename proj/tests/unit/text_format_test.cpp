#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "bnhard/text_format.hpp"
#include "support.hpp"

namespace bnhard {
namespace {

using testing::make_dag;

int error_line(const std::function<void()>& f) {
  try {
    f();
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

TEST(TextFormat, DagLayout) {
  const Dag g = make_dag({"X", "W", "Y"}, {{0, 1}, {1, 2}}, {2, 3, 2});
  EXPECT_EQ(serialize_dag(g), "dag 3\nnode 0 X 2\nnode 1 W 3\nnode 2 Y 2\nedge 0 1\nedge 1 2\n");
  EXPECT_EQ(parse_dag("# comment\n\ndag 3\nnode 0 X 2  # trailing\nnode 1 W 3\nnode 2 Y 2\nedge 1 2\nedge 0 1\n"), g);
}

TEST(TextFormat, DagErrorsNameTheLine) {
  EXPECT_EQ(error_line([] { parse_dag("dag 2\nnode 0 A 2\nnode 2 B 2\n"); }), 3);
  EXPECT_EQ(error_line([] { parse_dag("dag 2\nnode 0 A 2\nnode 1 B 2\nedge 0 1\nedge 1 0\n"); }), 5);
  EXPECT_EQ(error_line([] { parse_dag("dag 1\nnode 0 A x\n"); }), 2);
  EXPECT_EQ(error_line([] { parse_dag("dag 1\nnode 0 A 1\n"); }), 2);
  EXPECT_EQ(error_line([] { parse_dag("dag 2\nnode 0 A 2\nnode 1 A 2\n"); }), 3);
  EXPECT_EQ(error_line([] { parse_dag("dag 1\nnode 0 A 2\nedge 0 0\n"); }), 3);
  EXPECT_EQ(error_line([] { parse_dag("dag 1\nnode 0 A 2\nfoo\n"); }), 3);
  EXPECT_EQ(error_line([] { parse_dag("dag 2\nnode 0 A 2\n"); }), 2);
  EXPECT_THROW(serialize_dag(make_dag({"has space"}, {})), InvalidArgument);
}

TEST(TextFormat, NetworkRoundTrip) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + rng() % 5;
    std::vector<int> cards(n);
    for (int& c : cards) c = 2 + static_cast<int>(rng() % 3);
    const auto bn = testing::random_network(testing::random_dag(n, 0.5, rng, cards), rng, 1 + rng() % 40);
    const std::string text = serialize_bn(bn);
    EXPECT_EQ(parse_bn(text), bn);
    EXPECT_EQ(serialize_bn(parse_bn(text)), text);
  }
}

TEST(TextFormat, NetworkErrors) {
  const std::string head = "dag 1\nnode 0 X 2\ncpt 0\n";
  EXPECT_EQ(error_line([&] { parse_bn(head + "row 0 1/2 1/4\n"); }), 4);
  EXPECT_EQ(error_line([&] { parse_bn(head + "row 0 1/3 2/3\n"); }), 4);
  EXPECT_EQ(error_line([&] { parse_bn(head + "row 0 3/2 -1/2\n"); }), 4);
  EXPECT_EQ(error_line([&] { parse_bn(head + "row 0 1/2\n"); }), 4);
  EXPECT_EQ(error_line([&] { parse_bn(head); }), 3);
  EXPECT_NO_THROW(parse_bn(head + "row 0 1/2 1/2\n"));
}

TEST(TextFormat, BundleRoundTrip) {
  const auto inst = build_learn_instance(make_dbfas(3, {{0, 1}, {1, 2}, {2, 0}}, 1));
  const auto bundle = bundle_of(inst);
  const std::string text = serialize_bundle(bundle);
  EXPECT_EQ(parse_bundle(text), bundle);
  EXPECT_EQ(serialize_bundle(parse_bundle(text)), text);
  for (char c : text) EXPECT_LT(static_cast<unsigned char>(c), 0x80u);
  EXPECT_NE(text.find("\nbound 656\n"), std::string::npos);
  EXPECT_THROW(parse_bundle(text.substr(0, text.rfind("bound"))), ParseError);
}

TEST(TextFormat, DbfasRoundTrip) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const auto d = random_dbfas(6, rng);
    const auto parsed = parse_dbfas(serialize_dbfas(d));
    EXPECT_EQ(parsed.arcs, d.arcs);
    EXPECT_EQ(parsed.k, d.k);
    EXPECT_EQ(serialize_dbfas(parsed), serialize_dbfas(d));
  }
  EXPECT_EQ(error_line([] { parse_dbfas("dbfas 2 1 0\narc 0 2\n"); }), 2);
  EXPECT_EQ(error_line([] { parse_dbfas("dbfas 2 1 2\narc 0 1\n"); }), 1);
  EXPECT_EQ(error_line([] { parse_dbfas("dbfas 2 2 0\narc 0 1\n"); }), 2);
  EXPECT_EQ(error_line([] { parse_dbfas("dbfas 2 2 0\narc 0 1\narc 0 1\n"); }), 3);
}

TEST(TextFormat, Dot) {
  const std::string dot = to_dot(make_dag({"X", "Y"}, {{0, 1}}));
  EXPECT_NE(dot.find("n0 -> n1"), std::string::npos);
  EXPECT_NE(dot.find("label=\"Y\""), std::string::npos);
}

}  // namespace
}  // namespace bnhard
