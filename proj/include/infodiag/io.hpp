#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "infodiag/abstract_model.hpp"
#include "infodiag/diagram.hpp"
#include "infodiag/discrete_system.hpp"
#include "infodiag/graph.hpp"

namespace infodiag {

/// Reads a whole file; throws SchemaError when it cannot be opened.
std::string read_text_file(const std::string& path);
/// Parses JSON text, reporting syntax errors with line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& origin);

/// {"variables": [{"name", "labels"}], "outcomes": [[label, ...]], "P": [...], "Q": [...]}
DiscreteSystem system_from_json(const nlohmann::json& doc);
nlohmann::json system_to_json(const DiscreteSystem& system);

/// {"monoid_table", "identity"?, "group_factors", "action_table",
///  "cocycle" | "psi_generator", "variables"}
AbstractSystem abstract_from_json(const nlohmann::json& doc);
nlohmann::json abstract_to_json(const AbstractSystem& system);

/// {"n": 3, "edges": [[1, 2], [2, 3]]}
Graph graph_from_json(const nlohmann::json& doc);
nlohmann::json graph_to_json(const Graph& graph);

struct SecondLawConfig {
  std::vector<int> state_sizes;
  std::vector<double> p1;
  std::vector<double> q1;
  std::vector<std::vector<std::vector<double>>> transitions;
};

/// {"n" | "state_sizes", "P1", "Q1", "transition" (shared) | "transitions"}
SecondLawConfig second_law_from_json(const nlohmann::json& doc);

/// Shortest decimal text that parses back to the same double.
std::string format_exact(double v);
/// Fixed notation with `decimals` digits; negative zero prints as zero.
std::string format_fixed(double v, int decimals = 6);

struct AtomRecord {
  VarSubset atom;
  /// Real value, or the group element index for exact backends.
  double value = 0.0;
  /// Human-readable value (group elements as tuples).
  std::string text;
  bool zero = false;
};

struct DiagramReport {
  std::string backend;
  int n = 0;
  std::string base;
  bool exact = false;
  std::vector<AtomRecord> atoms;
  double total = 0.0;
  std::string total_text;
  friend bool operator==(const DiagramReport&, const DiagramReport&) = default;
};

inline bool operator==(const AtomRecord& a, const AtomRecord& b) {
  return a.atom == b.atom && a.value == b.value && a.text == b.text && a.zero == b.zero;
}

template <ValueGroup G>
DiagramReport make_report(const Diagram<G>& diagram, const std::string& base) {
  DiagramReport report{diagram.backend(), diagram.n(), base, G::exact, {}, 0.0, {}};
  const auto atoms = enumerate_atoms(diagram.n(), kHardMaxVariables);
  for (const auto& a : atoms) {
    const auto& v = diagram.at(a);
    report.atoms.push_back(AtomRecord{a.index_set(), static_cast<double>(v), diagram.group().format(v), diagram.is_zero(v)});
  }
  const auto t = total(diagram);
  report.total = static_cast<double>(t);
  report.total_text = diagram.group().format(t);
  return report;
}

enum class OutputFormat { Table, Csv, Json, Dot };
OutputFormat parse_output_format(const std::string& text);

std::string render_diagram(const DiagramReport& report, OutputFormat format);
DiagramReport parse_diagram_json(const std::string& text);
DiagramReport parse_diagram_csv(const std::string& text);

/// DOT text with edges in sorted order; `names` labels vertex k by names[k-1] when given.
std::string render_dot(const Graph& graph, const std::vector<std::string>& names = {});

}  // namespace infodiag
