#include "bnhard/text_format.hpp"

#include <charconv>
#include <cstdint>
#include <sstream>
#include <vector>

namespace bnhard {

namespace {

void require_writable_label(const std::string& label) {
  if (label.empty()) throw InvalidArgument("empty node label");
  for (char c : label) {
    const auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u >= 0x7f || c == '#') {
      throw InvalidArgument("label '" + label + "' contains a space, '#' or a non-ASCII character");
    }
  }
}

struct Line {
  int number = 0;
  std::vector<std::string_view> tokens;
};

class Reader {
 public:
  explicit Reader(std::string_view text) {
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      ++number;
      std::string_view line = text.substr(start, end - start);
      if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      Line parsed{number, {}};
      std::size_t i = 0;
      while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) parsed.tokens.push_back(line.substr(i, j - i));
        i = j;
      }
      if (!parsed.tokens.empty()) lines_.push_back(std::move(parsed));
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  bool done() const { return pos_ >= lines_.size(); }
  bool next_is(std::string_view keyword) const { return !done() && lines_[pos_].tokens[0] == keyword; }
  int last_line() const { return lines_.empty() ? 0 : lines_.back().number; }

  // Next line, which must start with `keyword` and have `arity` more tokens.
  const Line& expect(std::string_view keyword, std::size_t arity, bool at_least = false) {
    if (done()) throw ParseError(last_line(), "unexpected end of input, expected '" + std::string(keyword) + "'");
    const Line& line = lines_[pos_];
    if (line.tokens[0] != keyword) {
      throw ParseError(line.number,
                       "expected '" + std::string(keyword) + "', found '" + std::string(line.tokens[0]) + "'");
    }
    const std::size_t got = line.tokens.size() - 1;
    if (at_least ? got < arity : got != arity) {
      throw ParseError(line.number, "'" + std::string(keyword) + "' takes " + (at_least ? "at least " : "") +
                                        std::to_string(arity) + " values, found " + std::to_string(got));
    }
    ++pos_;
    return line;
  }

  void expect_end() const {
    if (!done()) {
      throw ParseError(lines_[pos_].number, "unexpected '" + std::string(lines_[pos_].tokens[0]) + "'");
    }
  }

 private:
  std::vector<Line> lines_;
  std::size_t pos_ = 0;
};

template <class T>
T number(const Line& line, std::size_t i, T lo, T hi) {
  const std::string_view tok = line.tokens[i];
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError(line.number, "'" + std::string(tok) + "' is not an integer");
  }
  if (value < lo || value > hi) {
    throw ParseError(line.number, "value " + std::string(tok) + " is outside [" + std::to_string(lo) + ", " +
                                      std::to_string(hi) + "]");
  }
  return value;
}

constexpr int kMaxIndex = 1 << 24;

Dag read_dag(Reader& in) {
  const Line& header = in.expect("dag", 1);
  const int n = number<int>(header, 1, 0, kMaxIndex);
  std::vector<NodeInfo> nodes;
  for (int i = 0; i < n; ++i) {
    const Line& line = in.expect("node", 3);
    if (number<int>(line, 1, 0, kMaxIndex) != i) {
      throw ParseError(line.number, "node lines must be numbered 0.." + std::to_string(n - 1) + " in order");
    }
    nodes.push_back({std::string(line.tokens[2]), number<int>(line, 3, 2, 1 << 16)});
    for (int j = 0; j < i; ++j) {
      if (nodes[static_cast<std::size_t>(j)].label == nodes.back().label) {
        throw ParseError(line.number, "label '" + nodes.back().label + "' is already used by node " + std::to_string(j));
      }
    }
  }
  std::vector<Edge> edges;
  while (in.next_is("edge")) {
    const Line& line = in.expect("edge", 2);
    const Edge e{number<int>(line, 1, 0, n - 1), number<int>(line, 2, 0, n - 1)};
    if (e.parent == e.child) throw ParseError(line.number, "self-loop");
    for (const Edge& seen : edges) {
      if (seen == e) throw ParseError(line.number, "duplicate edge");
    }
    edges.push_back(e);
    if (!is_acyclic(nodes.size(), edges)) throw ParseError(line.number, "edge closes a directed cycle");
  }
  return Dag(std::move(nodes), std::move(edges));
}

ParametricBn read_bn(Reader& in) {
  Dag g = read_dag(in);
  std::vector<Cpt<DyadicRational>> cpts;
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto id = static_cast<NodeId>(v);
    const Line& head = in.expect("cpt", 1);
    if (number<int>(head, 1, 0, kMaxIndex) != id) {
      throw ParseError(head.number, "cpt blocks must follow node order; expected cpt " + std::to_string(v));
    }
    Cpt<DyadicRational> cpt;
    cpt.node = id;
    cpt.cardinality = g.cardinality(id);
    cpt.parents = g.parents(id);
    for (NodeId p : cpt.parents) cpt.parent_cards.push_back(g.cardinality(p));
    const std::size_t rows = cpt.row_count();
    for (std::size_t r = 0; r < rows; ++r) {
      const Line& line = in.expect("row", static_cast<std::size_t>(cpt.cardinality) + 1);
      if (number<std::size_t>(line, 1, 0, rows - 1) != r) {
        throw ParseError(line.number, "rows must be numbered 0.." + std::to_string(rows - 1) + " in order");
      }
      std::vector<DyadicRational> row;
      DyadicRational sum(0);
      for (int x = 0; x < cpt.cardinality; ++x) {
        const std::string_view tok = line.tokens[static_cast<std::size_t>(x) + 2];
        try {
          row.push_back(parse_dyadic(tok));
        } catch (const InvalidArgument& e) {
          throw ParseError(line.number, e.what());
        }
        if (row.back() < DyadicRational(0)) throw ParseError(line.number, "negative probability");
        sum = sum + row.back();
      }
      if (!(sum == DyadicRational(1))) throw ParseError(line.number, "row sums to " + to_string(sum) + ", not 1");
      cpt.rows.push_back(std::move(row));
    }
    cpts.push_back(std::move(cpt));
  }
  return ParametricBn(std::move(g), std::move(cpts));
}

}  // namespace

LearnBundle bundle_of(const LearnInstance& inst) { return {inst.network, inst.observables, inst.bound}; }

std::string serialize_dag(const Dag& g) {
  std::ostringstream out;
  out << "dag " << g.size() << '\n';
  for (std::size_t v = 0; v < g.size(); ++v) {
    const auto& info = g.node(static_cast<NodeId>(v));
    require_writable_label(info.label);
    out << "node " << v << ' ' << info.label << ' ' << info.cardinality << '\n';
  }
  for (const Edge& e : g.edges()) out << "edge " << e.parent << ' ' << e.child << '\n';
  return out.str();
}

std::string serialize_bn(const ParametricBn& bn) {
  std::ostringstream out;
  out << serialize_dag(bn.structure());
  for (const auto& cpt : bn.cpts()) {
    out << "cpt " << cpt.node << '\n';
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      out << "row " << r;
      for (const auto& p : cpt.rows[r]) out << ' ' << to_string(p);
      out << '\n';
    }
  }
  return out.str();
}

std::string serialize_bundle(const LearnBundle& bundle) {
  std::ostringstream out;
  out << serialize_bn(bundle.network);
  for (NodeId v : bundle.observables) out << "observable " << v << '\n';
  out << "bound " << bundle.bound << '\n';
  return out.str();
}

std::string serialize_dbfas(const DbfasInstance& d) {
  std::ostringstream out;
  out << "dbfas " << d.vertex_count << ' ' << d.arcs.size() << ' ' << d.k << '\n';
  for (const Arc& a : d.arcs) out << "arc " << a.from << ' ' << a.to << '\n';
  return out.str();
}

Dag parse_dag(std::string_view text) {
  Reader in(text);
  Dag g = read_dag(in);
  in.expect_end();
  return g;
}

ParametricBn parse_bn(std::string_view text) {
  Reader in(text);
  ParametricBn bn = read_bn(in);
  in.expect_end();
  return bn;
}

LearnBundle parse_bundle(std::string_view text) {
  Reader in(text);
  LearnBundle bundle;
  bundle.network = read_bn(in);
  const int n = static_cast<int>(bundle.network.size());
  while (in.next_is("observable")) {
    const Line& line = in.expect("observable", 1);
    const NodeId v = number<int>(line, 1, 0, n - 1);
    if (!bundle.observables.empty() && v <= bundle.observables.back()) {
      throw ParseError(line.number, "observables must be listed in ascending order without repeats");
    }
    bundle.observables.push_back(v);
  }
  const Line& bound = in.expect("bound", 1);
  bundle.bound = number<std::uint64_t>(bound, 1, 0, UINT64_MAX);
  in.expect_end();
  return bundle;
}

DbfasInstance parse_dbfas(std::string_view text) {
  Reader in(text);
  const Line& header = in.expect("dbfas", 3);
  const int n = number<int>(header, 1, 0, kMaxIndex);
  const int m = number<int>(header, 2, 0, kMaxIndex);
  const int k = number<int>(header, 3, 0, m);
  std::vector<Arc> arcs;
  int last_line = header.number;
  for (int i = 0; i < m; ++i) {
    const Line& line = in.expect("arc", 2);
    arcs.push_back({number<int>(line, 1, 0, n - 1), number<int>(line, 2, 0, n - 1)});
    last_line = line.number;
  }
  in.expect_end();
  try {
    return make_dbfas(n, std::move(arcs), k);
  } catch (const InvalidArgument& e) {
    throw ParseError(last_line, e.what());
  }
}

std::string to_dot(const Dag& g) {
  std::ostringstream out;
  out << "digraph G {\n";
  for (std::size_t v = 0; v < g.size(); ++v) out << "  n" << v << " [label=\"" << g.label(static_cast<NodeId>(v)) << "\"];\n";
  for (const Edge& e : g.edges()) out << "  n" << e.parent << " -> n" << e.child << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace bnhard
