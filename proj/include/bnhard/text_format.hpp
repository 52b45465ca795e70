#pragma once

// Line-oriented text formats. Blank lines and everything after '#' are
// ignored; tokens are separated by spaces or tabs; labels may not contain
// either. Parsers throw ParseError naming the offending line.
//
//   dag <n>
//   node <index> <label> <cardinality>      (index 0 .. n-1, in order)
//   edge <parent-index> <child-index>
//
// A network is a dag block followed by one block per node, in node order:
//
//   cpt <node-index>
//   row <row-index> <p_0> ... <p_{r-1}>     (p as numerator/2^e)
//
// Rows are indexed mixed-radix over the ascending parents, first parent most
// significant. A learning bundle is a network followed by
//
//   observable <index>                      (one per observable)
//   bound <d>
//
// A feedback arc set instance is
//
//   dbfas <vertices> <arcs> <k>
//   arc <from> <to>                         (0-based)

#include <cstdint>
#include <string>
#include <string_view>

#include "bnhard/distribution.hpp"
#include "bnhard/graph.hpp"
#include "bnhard/reduction.hpp"

namespace bnhard {

struct LearnBundle {
  ParametricBn network;
  NodeSet observables;
  std::uint64_t bound = 0;
  friend bool operator==(const LearnBundle&, const LearnBundle&) = default;
};

LearnBundle bundle_of(const LearnInstance& inst);

// Serializers throw InvalidArgument for labels that cannot be written.
std::string serialize_dag(const Dag& g);
std::string serialize_bn(const ParametricBn& bn);
std::string serialize_bundle(const LearnBundle& bundle);
std::string serialize_dbfas(const DbfasInstance& d);

Dag parse_dag(std::string_view text);
ParametricBn parse_bn(std::string_view text);
LearnBundle parse_bundle(std::string_view text);
DbfasInstance parse_dbfas(std::string_view text);

// Graphviz dot, for viewing only.
std::string to_dot(const Dag& g);

}  // namespace bnhard
