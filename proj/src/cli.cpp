#include "infodiag/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "infodiag/abstract_model.hpp"
#include "infodiag/errors.hpp"
#include "infodiag/graph_markov.hpp"
#include "infodiag/interaction.hpp"
#include "infodiag/io.hpp"
#include "infodiag/slice_backend.hpp"

namespace infodiag {

namespace {

using nlohmann::json;

struct RunConfig {
  std::string base = "2";
  std::optional<double> tolerance;
  std::string format = "table";
  bool verify = false;
  int jobs = 1;
  std::string functional = "entropy";
  std::string method = "moebius";
};

struct Verdict {
  std::string test;
  bool holds = false;
  std::vector<std::pair<std::string, std::string>> details;
  AtomSet violations;
};

void render_verdict(const Verdict& v, OutputFormat format, std::ostream& out) {
  switch (format) {
    case OutputFormat::Table: {
      out << "test: " << v.test << "\n";
      for (const auto& [k, val] : v.details) out << k << ": " << val << "\n";
      out << "result: " << (v.holds ? "pass" : "fail") << "\n";
      if (!v.violations.empty()) {
        out << "violating atoms:";
        for (const auto& a : v.violations) out << " " << a.to_string();
        out << "\n";
      }
      break;
    }
    case OutputFormat::Csv: {
      out << "key,value\n" << "test," << v.test << "\n";
      for (const auto& [k, val] : v.details) out << k << "," << val << "\n";
      out << "result," << (v.holds ? "pass" : "fail") << "\n";
      for (const auto& a : v.violations) out << "violation," << a.to_string() << "\n";
      break;
    }
    case OutputFormat::Json: {
      json doc{{"test", v.test}, {"result", v.holds ? "pass" : "fail"}, {"holds", v.holds}};
      doc["details"] = json::object();
      for (const auto& [k, val] : v.details) doc["details"][k] = val;
      doc["violations"] = json::array();
      for (const auto& a : v.violations) doc["violations"].push_back(a.index_set().indices());
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::Dot:
      throw ArgumentError("dot output is only available for graphs");
  }
}

BuildOptions build_options(const RunConfig& cfg) {
  BuildOptions opts;
  opts.jobs = cfg.jobs;
  if (cfg.method == "moebius") {
    opts.method = BuildMethod::Moebius;
  } else if (cfg.method == "recursive") {
    opts.method = BuildMethod::Recursive;
  } else {
    throw ArgumentError("unknown build method '" + cfg.method + "'");
  }
  return opts;
}

/// Loads the input as the requested backend and hands an engine to `body`.
template <class Body>
int with_engine(const RunConfig& cfg, const std::string& path, Body&& body) {
  const json doc = parse_json_text(read_text_file(path), path);
  const BuildOptions opts = build_options(cfg);
  if (cfg.functional == "abstract") {
    const AbstractBackend backend(abstract_from_json(doc));
    const InteractionEngine<AbstractBackend> engine(backend, opts);
    return body(engine, std::vector<std::string>{});
  }
  SliceOptions slice;
  slice.base = cfg.base == "e" ? LogBase::E : LogBase::Two;
  if (cfg.tolerance) slice.tolerance = Tolerance{*cfg.tolerance, *cfg.tolerance};
  DiscreteSystem system = system_from_json(doc);
  std::vector<std::string> names;
  for (const auto& v : system.variables()) names.push_back(v.name);
  const SliceBackend backend(std::move(system), parse_functional(cfg.functional), slice);
  const InteractionEngine<SliceBackend> engine(backend, opts);
  return body(engine, names);
}

template <class Engine>
std::string value_text(const Engine& engine, const typename Engine::value_type& v) {
  if constexpr (Engine::group_type::exact) {
    return engine.values().format(v);
  } else {
    return format_exact(v);
  }
}

VarSubset parse_subset_arg(const std::string& text, int n, const std::string& what) {
  VarSubset s;
  try {
    s = parse_var_subset(text);
  } catch (const ArgumentError& e) {
    throw SchemaError(what + ": " + e.what());
  }
  if (!s.fits(n)) throw SchemaError(what + ": index outside 1.." + std::to_string(n));
  return s;
}

int cmd_diagram(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  return with_engine(cfg, path, [&](const auto& engine, const std::vector<std::string>&) {
    const auto diagram = engine.build_diagram();
    if (cfg.verify) {
      // Cross-check the chosen build route against the other one.
      BuildOptions other = engine.options();
      other.method = other.method == BuildMethod::Moebius ? BuildMethod::Recursive : BuildMethod::Moebius;
      const auto check = InteractionEngine(engine.backend(), other).build_diagram();
      const auto& g = engine.values();
      for (std::size_t k = 0; k < diagram.values().size(); ++k) {
        if (!diagram.is_zero(g.add(diagram.values()[k], g.negate(check.values()[k])))) {
          throw VerificationError("build routes disagree at atom index " + std::to_string(k + 1));
        }
      }
    }
    const auto format = parse_output_format(cfg.format);
    out << render_diagram(make_report(diagram, cfg.base), format);
    return kExitPass;
  });
}

int cmd_indep(const RunConfig& cfg, const std::string& path, const std::string& a_text, const std::string& b_text,
              const std::string& c_text, std::ostream& out) {
  return with_engine(cfg, path, [&](const auto& engine, const std::vector<std::string>&) {
    const VarSubset a = parse_subset_arg(a_text, engine.n(), "A");
    const VarSubset b = parse_subset_arg(b_text, engine.n(), "B");
    const VarSubset c = parse_subset_arg(c_text, engine.n(), "C");
    const auto value = engine.conditioned_interaction(c, {a, b});
    const bool holds = engine.is_zero(value);
    if (cfg.verify) {
      // Pairwise characterizations: additivity, conditional additivity, and both one-sided forms.
      const auto& g = engine.values();
      auto same = [&](auto x, auto y) { return engine.is_zero(g.add(x, g.negate(y))); };
      const bool additive = same(engine.evaluate(c, a | b), g.add(engine.evaluate(c, a), engine.evaluate(c, b)));
      const bool cross = same(engine.evaluate(c, a | b), g.add(engine.evaluate(c | b, a), engine.evaluate(c | a, b)));
      const bool left = same(engine.evaluate(c, a), engine.evaluate(c | b, a));
      const bool right = same(engine.evaluate(c, b), engine.evaluate(c | a, b));
      if (additive != holds || cross != holds || left != holds || right != holds) {
        throw VerificationError("pairwise independence characterizations disagree");
      }
    }
    Verdict v{"indep", holds, {{"A", a.to_string()}, {"B", b.to_string()}, {"C", c.to_string()}, {"value", value_text(engine, value)}}, {}};
    render_verdict(v, parse_output_format(cfg.format), out);
    return holds ? kExitPass : kExitFail;
  });
}

int cmd_fcmi(const RunConfig& cfg, const std::string& path, const std::vector<std::string>& parts_text,
             const std::string& given_text, std::ostream& out) {
  return with_engine(cfg, path, [&](const auto& engine, const std::vector<std::string>&) {
    const VarSubset j = parse_subset_arg(given_text, engine.n(), "--given");
    std::vector<VarSubset> parts;
    for (const auto& t : parts_text) parts.push_back(parse_subset_arg(t, engine.n(), "part"));
    std::optional<ConditionalPartition> partition;
    try {
      partition.emplace(engine.n(), j, parts);
    } catch (const ArgumentError& e) {
      throw SchemaError(std::string("conditional partition: ") + e.what());
    }
    if (parts.size() < 2) throw SchemaError("conditional partition: at least two parts are required");
    const auto result = engine.test_fcmi(*partition, cfg.verify);
    Verdict v{"fcmi", result.holds, {{"partition", partition->to_string()}}, result.violations};
    render_verdict(v, parse_output_format(cfg.format), out);
    return result.holds ? kExitPass : kExitFail;
  });
}

int cmd_mrf(const RunConfig& cfg, const std::string& path, const std::string& graph_path, std::ostream& out) {
  const Graph graph = graph_from_json(parse_json_text(read_text_file(graph_path), graph_path));
  return with_engine(cfg, path, [&](const auto& engine, const std::vector<std::string>&) {
    if (graph.n() != engine.n()) throw SchemaError("graph has " + std::to_string(graph.n()) + " vertices for " + std::to_string(engine.n()) + " variables");
    const auto result = test_mrf_diagram(engine.diagram(), graph);
    if (cfg.verify) {
      auto oracle = [&](VarSubset a, VarSubset b, VarSubset c) { return engine.is_independent(a, b, c); };
      const bool cutset = test_mrf_oracle(graph, oracle, MarkovMode::Cutset);
      const bool global = graph.n() <= kMaxGlobalMarkovVertices ? test_mrf_oracle(graph, oracle, MarkovMode::Global) : cutset;
      if (cutset != result.holds || global != result.holds) throw VerificationError("MRF characterizations disagree");
    }
    Verdict v{"mrf", result.holds, {{"graph", graph.to_string()}}, result.violations};
    render_verdict(v, parse_output_format(cfg.format), out);
    return result.holds ? kExitPass : kExitFail;
  });
}

int cmd_chain(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  return with_engine(cfg, path, [&](const auto& engine, const std::vector<std::string>&) {
    const auto result = test_markov_chain(engine.diagram());
    if (cfg.verify && test_mrf_diagram(engine.diagram(), Graph::path(engine.n())).holds != result.holds) {
      throw VerificationError("chain test and path-graph MRF test disagree");
    }
    Verdict v{"chain", result.holds, {}, result.violations};
    render_verdict(v, parse_output_format(cfg.format), out);
    return result.holds ? kExitPass : kExitFail;
  });
}

int cmd_infer_graph(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  return with_engine(cfg, path, [&](const auto& engine, const std::vector<std::string>& names) {
    const auto candidate = candidate_smallest_graph(engine.diagram());
    const auto format = parse_output_format(cfg.format);
    switch (format) {
      case OutputFormat::Dot:
        out << render_dot(candidate.graph, names);
        break;
      case OutputFormat::Json: {
        json doc = graph_to_json(candidate.graph);
        doc["is_representation"] = candidate.is_representation;
        doc["warning"] = candidate.warning ? json(*candidate.warning) : json(nullptr);
        out << doc.dump(2) << "\n";
        break;
      }
      case OutputFormat::Csv:
        out << "a,b\n";
        for (auto [a, b] : candidate.graph.edges()) out << a << "," << b << "\n";
        break;
      case OutputFormat::Table:
        out << "candidate graph: " << candidate.graph.to_string() << "\n";
        out << "MRF for candidate: " << (candidate.is_representation ? "yes" : "no") << "\n";
        if (candidate.warning) out << "warning: " << *candidate.warning << "\n";
        break;
    }
    return kExitPass;
  });
}

bool doubly_stochastic(const std::vector<std::vector<double>>& t) {
  if (t.empty() || t.size() != t.front().size()) return false;
  for (std::size_t c = 0; c < t.size(); ++c) {
    double col = 0.0;
    for (const auto& row : t) col += row[c];
    if (std::abs(col - 1.0) > kNormalizationTolerance) return false;
  }
  return true;
}

int cmd_second_law(const RunConfig& cfg, const std::string& path, std::ostream& out) {
  const auto config = second_law_from_json(parse_json_text(read_text_file(path), path));
  const DiscreteSystem system = second_law_system(config.state_sizes, config.p1, config.q1, config.transitions);
  SliceOptions slice;
  slice.base = cfg.base == "e" ? LogBase::E : LogBase::Two;
  if (cfg.tolerance) slice.tolerance = Tolerance{*cfg.tolerance, *cfg.tolerance};
  const SliceBackend kl(system, Functional::KullbackLeibler, slice);
  const SliceBackend entropy(system, Functional::Entropy, slice);
  const int n = system.variable_count();

  std::vector<double> kl_series, h_series;
  for (int i = 1; i <= n; ++i) {
    kl_series.push_back(kl.evaluate({}, VarSubset::singleton(i)));
    h_series.push_back(entropy.evaluate({}, VarSubset::singleton(i)));
  }
  const InteractionEngine<SliceBackend> engine(kl, build_options(cfg));
  const auto& diagram = engine.diagram();
  AtomSet late;
  for (const auto& a : enumerate_atoms(n, kHardMaxVariables)) {
    if (a.index_set().min_index() >= 2) late.push_back(a);
  }
  const AtomSet violations = diagram.nonzero_among(late);
  const double slack = slice.tolerance.absolute;
  bool kl_monotone = true, h_monotone = true;
  for (int i = 1; i < n; ++i) {
    kl_monotone = kl_monotone && kl_series[i] <= kl_series[i - 1] + slack;
    h_monotone = h_monotone && h_series[i] >= h_series[i - 1] - slack;
  }
  bool uniform_q1 = true;
  for (double q : config.q1) uniform_q1 = uniform_q1 && std::abs(q - 1.0 / config.q1.size()) <= kNormalizationTolerance;
  bool entropy_claim = uniform_q1;
  for (const auto& t : config.transitions) entropy_claim = entropy_claim && doubly_stochastic(t);
  const bool holds = kl_monotone && violations.empty() && (h_monotone || !entropy_claim);

  const auto format = parse_output_format(cfg.format);
  const DiagramReport report = make_report(diagram, cfg.base);
  switch (format) {
    case OutputFormat::Table: {
      out << "# second law, n=" << n << ", log base " << cfg.base << "\n";
      out << "step  KL(X_i)    H(X_i)\n";
      for (int i = 0; i < n; ++i) {
        out << std::left << std::setw(4) << (i + 1) << "  " << format_fixed(kl_series[i]) << "  " << format_fixed(h_series[i]) << "\n";
      }
      out << "KL non-increasing: " << (kl_monotone ? "yes" : "no") << "\n";
      out << "entropy non-decreasing: " << (h_monotone ? "yes" : "no")
          << (entropy_claim ? " (expected: doubly stochastic transitions, uniform Q1)" : " (not implied by this setup)") << "\n";
      out << "atoms with min(I) >= 2 vanish: " << (violations.empty() ? "yes" : "no") << "\n";
      for (const auto& a : violations) out << "  nonzero: " << a.to_string() << "\n";
      out << render_diagram(report, OutputFormat::Table);
      break;
    }
    case OutputFormat::Csv: {
      out << "step,kl,entropy\n";
      for (int i = 0; i < n; ++i) out << (i + 1) << "," << format_exact(kl_series[i]) << "," << format_exact(h_series[i]) << "\n";
      break;
    }
    case OutputFormat::Json: {
      json doc{{"n", n},
               {"kl", kl_series},
               {"entropy", h_series},
               {"kl_non_increasing", kl_monotone},
               {"entropy_non_decreasing", h_monotone},
               {"entropy_claim_applies", entropy_claim},
               {"late_atoms_vanish", violations.empty()}};
      doc["violations"] = json::array();
      for (const auto& a : violations) doc["violations"].push_back(a.index_set().indices());
      doc["diagram"] = json::parse(render_diagram(report, OutputFormat::Json));
      out << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::Dot:
      throw ArgumentError("dot output is only available for graphs");
  }
  return holds ? kExitPass : kExitFail;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information diagrams for discrete systems and finite monoid models", "infodiag"};
  app.fallthrough();
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_option("--base", cfg.base, "Logarithm base")->check(CLI::IsMember({"2", "e"}));
  app.add_option("--tol", cfg.tolerance, "Zero-test tolerance (absolute and relative)")->check(CLI::PositiveNumber);
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "csv", "json", "dot"}));
  app.add_flag("--verify", cfg.verify, "Cross-check equivalent characterizations");
  app.add_option("--jobs", cfg.jobs, "Worker threads for diagram construction (0 = all cores)")->check(CLI::NonNegativeNumber);
  app.add_option("--functional", cfg.functional, "Information functional")
      ->check(CLI::IsMember({"entropy", "kl", "ce", "abstract"}));
  app.add_option("--method", cfg.method, "Diagram construction route")->check(CLI::IsMember({"moebius", "recursive"}));

  std::string input, graph_path, given;
  std::string a_text, b_text, c_text;
  std::vector<std::string> parts;

  auto* diagram = app.add_subcommand("diagram", "Print every atom value");
  diagram->add_option("input", input, "System or model file")->required();

  auto* test = app.add_subcommand("test", "Test an independence structure");
  test->require_subcommand(1);
  auto* indep = test->add_subcommand("indep", "X_A independent of X_B given X_C");
  indep->add_option("input", input)->required();
  indep->add_option("A", a_text)->required();
  indep->add_option("B", b_text)->required();
  indep->add_option("C", c_text, "Conditioning set (default empty)");
  auto* fcmi = test->add_subcommand("fcmi", "Full conditional mutual independence of the parts given --given");
  fcmi->add_option("input", input)->required();
  fcmi->add_option("parts", parts, "Blocks L_1 .. L_q")->required();
  fcmi->add_option("--given", given, "Conditioning block J");
  auto* mrf = test->add_subcommand("mrf", "Markov random field for a graph");
  mrf->add_option("input", input)->required();
  mrf->add_option("graph", graph_path)->required();
  auto* chain = test->add_subcommand("chain", "Markov chain X1 - ... - Xn");
  chain->add_option("input", input)->required();

  auto* infer = app.add_subcommand("infer-graph", "Candidate smallest graph from pair atoms");
  infer->add_option("input", input)->required();

  auto* second = app.add_subcommand("second-law", "KL and entropy series of two chains with shared transitions");
  second->add_option("config", input)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    if (diagram->parsed()) return cmd_diagram(cfg, input, out);
    if (indep->parsed()) return cmd_indep(cfg, input, a_text, b_text, c_text, out);
    if (fcmi->parsed()) return cmd_fcmi(cfg, input, parts, given, out);
    if (mrf->parsed()) return cmd_mrf(cfg, input, graph_path, out);
    if (chain->parsed()) return cmd_chain(cfg, input, out);
    if (infer->parsed()) return cmd_infer_graph(cfg, input, out);
    if (second->parsed()) return cmd_second_law(cfg, input, out);
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  err << "no command given\n";
  return kExitError;
}

}  // namespace infodiag
