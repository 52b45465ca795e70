#include "bnhard/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "bnhard/inference.hpp"
#include "bnhard/reduction.hpp"
#include "bnhard/search.hpp"
#include "bnhard/text_format.hpp"

namespace bnhard {

namespace {

// Input problems that are not parse errors of a file.
class UsageError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <class T, class Parse>
T load(const std::string& path, Parse parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const ParseError& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot write '" + path + "'");
  file << text;
}

NodeId node_by_label(const Dag& g, const std::string& label) {
  auto v = g.find(label);
  if (!v) throw UsageError("no node labelled '" + label + "'");
  return *v;
}

NodeSet nodes_by_label(const Dag& g, const std::vector<std::string>& labels) {
  NodeSet out;
  for (const auto& l : labels) out.push_back(node_by_label(g, l));
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) throw UsageError("a label is listed twice");
  return out;
}

bool looks_like_bundle(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream tokens(line);
    std::string first;
    if (tokens >> first && first == "bound") return true;
  }
  return false;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

std::string arc_text(const Arc& a) { return vertex_label(a.from) + "->" + vertex_label(a.to); }

struct Globals {
  std::uint64_t seed = 1;
  std::size_t desk_scale = DeskScale{}.exhaustive_nodes;
  unsigned alpha_log2 = 4;

  DeskScale scale() const {
    DeskScale s;
    s.exhaustive_nodes = desk_scale;
    return s;
  }
  DyadicRational alpha() const { return DyadicRational(BigInt(1), alpha_log2); }
};

// ---------------------------------------------------------------------------

int cmd_reduce(const Globals& globals, const std::string& input, const std::string& output, const std::string& dot,
               std::ostream& out, std::ostream& err) {
  const auto raw = load<DbfasInstance>(input, parse_dbfas);
  const auto d = preprocess_dbfas(raw);
  if (d.arcs.empty()) {
    err << "instance is acyclic after preprocessing; the learning instance is empty\n";
    write_output(output, "# acyclic instance\ndag 0\nbound 0\n", out);
    return kExitOk;
  }
  if (d.vertex_count != raw.vertex_count) {
    err << "preprocessing kept " << d.vertex_count << " of " << raw.vertex_count << " vertices; labels use the new numbering\n";
  }
  BuildOptions options;
  options.alpha = globals.alpha();
  const auto inst = build_learn_instance(d, options);
  std::ostringstream text;
  text << "# learning instance: " << inst.observables.size() << " observables, " << inst.hidden.size()
       << " hidden, bound " << inst.bound << "\n";
  text << serialize_bundle(bundle_of(inst));
  write_output(output, text.str(), out);
  if (!dot.empty()) write_output(dot, to_dot(inst.network.structure()), out);
  return kExitOk;
}

int cmd_verify(const Globals& globals, const std::string& bundle_path, const std::string& dag_path,
               std::optional<std::uint64_t> max_params, std::ostream& out) {
  const auto bundle = load<LearnBundle>(bundle_path, parse_bundle);
  const auto inst = recover_learn_instance(bundle.network, bundle.observables, bundle.bound);
  const auto f = load<Dag>(dag_path, parse_dag);
  const auto report = verify_learn_solution(inst, f, max_params.value_or(bundle.bound), globals.scale());
  out << "parameters " << report.parameter_count << "\n";
  out << "max_params " << report.max_params << "\n";
  out << "within_bound " << yes_no(report.within_bound) << "\n";
  for (std::size_t i = 0; i < inst.dbfas.arcs.size(); ++i) {
    out << "component " << arc_text(inst.dbfas.arcs[i]) << " " << to_string(report.configs[i]) << "\n";
  }
  out << "inclusion " << to_string(report.inclusion) << "\n";
  out << "result " << (report.passed() ? "PASS" : "FAIL") << "\n";
  return report.passed() ? kExitOk : kExitFailed;
}

int cmd_solve_dbfas(const std::string& input, std::ostream& out) {
  const auto d = load<DbfasInstance>(input, parse_dbfas);
  const auto fas = brute_force_fas(d);
  out << "fas_size " << fas.size << "\n";
  for (const Arc& a : fas.arcs) out << "arc " << a.from << " " << a.to << "\n";
  out << "within_k " << yes_no(fas.size <= static_cast<std::size_t>(d.k)) << "\n";
  return kExitOk;
}

int cmd_solve_learn(const Globals& globals, const std::string& input, std::optional<std::uint64_t> max_params,
                    std::optional<std::size_t> parent_bound, const std::vector<std::string>& ordering,
                    std::ostream& out) {
  const std::string text = read_file(input);
  ParametricBn bn;
  NodeSet observables;
  try {
    if (looks_like_bundle(text)) {
      auto bundle = parse_bundle(text);
      bn = std::move(bundle.network);
      observables = std::move(bundle.observables);
    } else {
      bn = parse_bn(text);
      for (std::size_t v = 0; v < bn.size(); ++v) observables.push_back(static_cast<NodeId>(v));
    }
  } catch (const ParseError& e) {
    throw ParseError(0, input + ": " + e.what());
  }
  DeskScale scale = globals.scale();
  const auto d = enumerate_marginal_table(bn, observables, scale);
  Dag learned;
  std::uint64_t params = 0;
  if (!ordering.empty()) {
    std::vector<NodeId> order;
    for (const auto& label : ordering) {
      auto pos = d.position(label);
      if (!pos) throw UsageError("no observable labelled '" + label + "'");
      order.push_back(static_cast<NodeId>(*pos));
    }
    learned = ordered_greedy_learn(DistributionOracle(d), order);
    params = parameter_count(learned);
    out << "method ordered-greedy\n";
  } else {
    const auto result = brute_force_minimal_model(d, parent_bound);
    learned = result.dag;
    params = result.params;
    out << "method exhaustive\n";
  }
  out << "parameters " << params << "\n";
  if (max_params) out << "within_max_params " << yes_no(params <= *max_params) << "\n";
  out << serialize_dag(learned);
  return kExitOk;
}

int cmd_param_count(const std::string& input, const std::vector<std::string>& labels, std::ostream& out) {
  const auto g = load<Dag>(input, parse_dag);
  out << "parameters " << parameter_count(g) << "\n";
  if (!labels.empty()) {
    const NodeSet nodes = nodes_by_label(g, labels);
    out << "subtotal " << parameter_count(g, nodes) << "\n";
  }
  return kExitOk;
}

struct RoundtripRow {
  std::string name;
  DbfasInstance d;
};

int cmd_roundtrip(const Globals& globals, const std::string& input, std::size_t random_count, int max_vertices,
                  std::ostream& out) {
  std::vector<RoundtripRow> rows;
  if (!input.empty()) {
    rows.push_back({input, preprocess_dbfas(load<DbfasInstance>(input, parse_dbfas))});
  } else {
    std::mt19937_64 rng(globals.seed);
    for (std::size_t i = 0; i < random_count; ++i) rows.push_back({"random-" + std::to_string(i), random_dbfas(max_vertices, rng)});
  }
  out << "instance vertices arcs k fas forward_params formula bound backward decision ok\n";
  bool all_ok = true;
  for (const auto& row : rows) {
    if (row.d.arcs.empty()) {
      out << row.name << " 0 0 0 0 - - - - - yes\n";
      continue;
    }
    BuildOptions options;
    options.alpha = globals.alpha();
    const auto inst = build_learn_instance(row.d, options);
    const auto fas = brute_force_fas(row.d);
    const Dag f = forward_solution(inst, fas.arcs);
    const std::uint64_t params = parameter_count(f);
    const std::uint64_t formula = solution_parameter_formula(row.d, fas.size);
    const bool back = backward_solution(inst, f) == fas.arcs;
    const bool decision = (params <= inst.bound) == (fas.size <= static_cast<std::size_t>(row.d.k));
    const bool ok = params == formula && back && decision;
    all_ok = all_ok && ok;
    out << row.name << " " << row.d.vertex_count << " " << row.d.arcs.size() << " " << row.d.k << " " << fas.size
        << " " << params << " " << formula << " " << inst.bound << " " << (back ? "match" : "MISMATCH") << " "
        << (decision ? "agree" : "DISAGREE") << " " << yes_no(ok) << "\n";
  }
  return all_ok ? kExitOk : kExitFailed;
}

Query parse_assignments(const Dag& g, const std::vector<std::string>& items) {
  Query q;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("query item '" + item + "' is not label=value");
    const NodeId v = node_by_label(g, item.substr(0, eq));
    int value = 0;
    const std::string digits = item.substr(eq + 1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) throw UsageError("bad value in '" + item + "'");
    if (!q.targets.emplace(v, value).second) throw UsageError("node '" + item.substr(0, eq) + "' is queried twice");
  }
  return q;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact tools for the feedback-arc-set to structure-learning reduction", "bnhard"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals globals;
  app.add_option("--seed", globals.seed, "Seed for randomized drivers");
  app.add_option("--desk-scale-bound", globals.desk_scale, "Largest node count for exhaustive procedures")
      ->check(CLI::Range(1, 24));
  app.add_option("--alpha-log2", globals.alpha_log2, "alpha = 2^-e for the generated tables")->check(CLI::Range(1, 30));

  std::string input;
  std::string second;
  std::string output;
  std::string dot;
  std::optional<std::uint64_t> max_params;
  std::optional<std::size_t> parent_bound;
  std::vector<std::string> ordering;
  std::vector<std::string> labels;
  std::size_t random_count = 0;
  int max_vertices = 6;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> z_labels;
  std::vector<std::string> assignments;
  std::size_t oracle_k = OracleConfig{}.k;
  bool use_enumeration = false;

  auto* reduce = app.add_subcommand("reduce", "Build the learning bundle for a feedback arc set instance");
  reduce->add_option("dbfas", input, "Instance file")->required();
  reduce->add_option("-o,--output", output, "Bundle file (default: standard output)");
  reduce->add_option("--dot", dot, "Also write the generating structure as Graphviz dot");

  auto* verify = app.add_subcommand("verify-learn", "Check a DAG against a learning bundle");
  verify->add_option("bundle", input, "Bundle file")->required();
  verify->add_option("dag", second, "DAG file")->required();
  verify->add_option("--max-params", max_params, "Parameter limit (default: the bundle's bound)");

  auto* solve_dbfas = app.add_subcommand("solve-dbfas", "Exact minimum feedback arc set");
  solve_dbfas->add_option("dbfas", input, "Instance file")->required();

  auto* solve_learn = app.add_subcommand("solve-learn", "Fewest-parameter DAG for a network's observable marginal");
  solve_learn->add_option("input", input, "Network or bundle file")->required();
  solve_learn->add_option("--max-params", max_params, "Report whether the result fits this many parameters");
  solve_learn->add_option("--parent-bound", parent_bound, "Largest parent set in the exhaustive search");
  solve_learn->add_option("--ordering", ordering, "Node labels; switches to the ordered greedy learner")->delimiter(',');

  auto* oracle = app.add_subcommand("oracle", "Query the independence, inference and information oracles");
  oracle->require_subcommand(1);
  oracle->add_option("--k", oracle_k, "Largest conditioning set");
  auto* dsep = oracle->add_subcommand("dsep", "Is x independent of y given z");
  auto* prob = oracle->add_subcommand("prob", "p(Z = z) as an exact fraction");
  auto* mi = oracle->add_subcommand("mi", "Conditional mutual information in bits");
  for (auto* sub : {dsep, prob, mi}) sub->add_option("bundle", input, "Bundle file")->required();
  for (auto* sub : {dsep, mi}) {
    sub->add_option("--x", x_label)->required();
    sub->add_option("--y", y_label)->required();
    sub->add_option("--z", z_labels)->delimiter(',');
  }
  prob->add_option("--query", assignments, "label=value items")->delimiter(',');
  prob->add_flag("--enumerate", use_enumeration, "Sum the joint instead of cut-set conditioning");

  auto* params = app.add_subcommand("param-count", "Parameter count of a DAG");
  params->add_option("dag", input, "DAG file")->required();
  params->add_option("--nodes", labels, "Also report the subtotal over these labels")->delimiter(',');

  auto* roundtrip = app.add_subcommand("roundtrip", "Forward and backward solution translation against brute force");
  roundtrip->add_option("dbfas", input, "Instance file");
  roundtrip->add_option("--random", random_count, "Number of random instances instead of a file");
  roundtrip->add_option("--max-vertices", max_vertices, "Vertex limit for random instances")->check(CLI::Range(2, 12));

  std::vector<const char*> argv{"bnhard"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  }

  try {
    if (*reduce) return cmd_reduce(globals, input, output, dot, out, err);
    if (*verify) return cmd_verify(globals, input, second, max_params, out);
    if (*solve_dbfas) return cmd_solve_dbfas(input, out);
    if (*solve_learn) return cmd_solve_learn(globals, input, max_params, parent_bound, ordering, out);
    if (*params) return cmd_param_count(input, labels, out);
    if (*roundtrip) {
      if (input.empty() == (random_count == 0)) throw UsageError("roundtrip needs either a file or --random N");
      return cmd_roundtrip(globals, input, random_count, max_vertices, out);
    }
    if (*oracle) {
      const auto bundle = load<LearnBundle>(input, parse_bundle);
      const Dag& g = bundle.network.structure();
      OracleConfig config;
      config.k = oracle_k;
      if (*prob) {
        const Query q = parse_assignments(g, assignments);
        for (const auto& [v, value] : q.targets) {
          if (!std::binary_search(bundle.observables.begin(), bundle.observables.end(), v)) {
            throw UsageError("node '" + g.label(v) + "' is hidden");
          }
        }
        if (q.targets.size() > config.k) throw UsageError("query has more than " + std::to_string(config.k) + " nodes");
        const auto p = use_enumeration ? enumerate_marginal(bundle.network, q, globals.scale())
                                       : cutset_marginal(bundle.network, q);
        out << to_string(p) << "\n";
        return kExitOk;
      }
      const NodeId x = node_by_label(g, x_label);
      const NodeId y = node_by_label(g, y_label);
      const NodeSet z = nodes_by_label(g, z_labels);
      for (NodeId v : [&] {
             NodeSet all = z;
             all.push_back(x);
             all.push_back(y);
             return all;
           }()) {
        if (!std::binary_search(bundle.observables.begin(), bundle.observables.end(), v)) {
          throw UsageError("node '" + g.label(v) + "' is hidden");
        }
      }
      if (*dsep) {
        out << (independence_oracle(bundle.network, {x, y, z}, config) ? "independent" : "dependent") << "\n";
      } else {
        out << std::fixed << std::setprecision(17) << information_oracle(bundle.network, x, y, z, config) << "\n";
      }
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const DeskScaleExceeded& e) {
    err << "error: " << e.what() << " (raise --desk-scale-bound or use a smaller input)\n";
    return kExitBadInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return kExitBadInput;
}

}  // namespace bnhard
