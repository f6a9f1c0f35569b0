#include "infodiag/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "infodiag/errors.hpp"

namespace infodiag {

using nlohmann::json;

namespace {

[[noreturn]] void schema_fail(const std::string& path, const std::string& message) {
  throw SchemaError(path + ": " + message);
}

const json& field(const json& doc, const std::string& key, const std::string& path) {
  if (!doc.is_object()) schema_fail(path, "expected an object");
  const auto it = doc.find(key);
  if (it == doc.end()) schema_fail(path, "missing field \"" + key + "\"");
  return *it;
}

const json& array_at(const json& doc, const std::string& path) {
  if (!doc.is_array()) schema_fail(path, "expected an array");
  return doc;
}

double number_at(const json& v, const std::string& path) {
  if (!v.is_number()) schema_fail(path, "expected a number");
  return v.get<double>();
}

int int_at(const json& v, const std::string& path) {
  if (!v.is_number_integer()) schema_fail(path, "expected an integer");
  return v.get<int>();
}

/// Labels may be strings or numbers; numbers use their JSON spelling.
std::string label_at(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return v.dump();
  schema_fail(path, "expected a string or number label");
}

std::vector<double> numbers(const json& doc, const std::string& path) {
  std::vector<double> out;
  const auto& arr = array_at(doc, path);
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(number_at(arr[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<int> integers(const json& doc, const std::string& path) {
  std::vector<int> out;
  const auto& arr = array_at(doc, path);
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(int_at(arr[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::vector<int>> int_matrix(const json& doc, const std::string& path) {
  std::vector<std::vector<int>> out;
  const auto& arr = array_at(doc, path);
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(integers(arr[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

std::vector<std::vector<double>> real_matrix(const json& doc, const std::string& path) {
  std::vector<std::vector<double>> out;
  const auto& arr = array_at(doc, path);
  for (std::size_t k = 0; k < arr.size(); ++k) out.push_back(numbers(arr[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

/// Re-raises library validation errors as schema errors tagged with the document part.
template <class F>
auto validated(const std::string& what, F&& build) {
  try {
    return build();
  } catch (const SchemaError&) {
    throw;
  } catch (const DomainError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw SchemaError(what + ": " + e.what());
  } catch (const std::length_error& e) {
    throw SchemaError(what + ": " + e.what());
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        cur += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (quoted) throw SchemaError("unterminated quote in CSV line: " + line);
  out.push_back(cur);
  return out;
}

double parse_double(const std::string& text, const std::string& what) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || end != text.data() + text.size()) throw SchemaError(what + ": malformed number '" + text + "'");
  return v;
}

std::string space_separated(VarSubset s) {
  std::string out;
  for (int i : s.indices()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i);
  }
  return out;
}

VarSubset parse_space_separated(const std::string& text) {
  std::string commas = text;
  std::replace(commas.begin(), commas.end(), ' ', ',');
  return parse_var_subset(commas);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t k = 0; k + 1 < e.byte && k < text.size(); ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw SchemaError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) + ": invalid JSON");
  }
}

DiscreteSystem system_from_json(const json& doc) {
  const auto& vars_doc = array_at(field(doc, "variables", "$"), "$.variables");
  std::vector<Variable> variables;
  for (std::size_t i = 0; i < vars_doc.size(); ++i) {
    const std::string path = "$.variables[" + std::to_string(i) + "]";
    Variable v;
    const auto& name = field(vars_doc[i], "name", path);
    if (!name.is_string()) schema_fail(path + ".name", "expected a string");
    v.name = name.get<std::string>();
    const auto& labels = array_at(field(vars_doc[i], "labels", path), path + ".labels");
    for (std::size_t k = 0; k < labels.size(); ++k) {
      v.labels.push_back(label_at(labels[k], path + ".labels[" + std::to_string(k) + "]"));
    }
    variables.push_back(std::move(v));
  }
  const auto& outcomes_doc = array_at(field(doc, "outcomes", "$"), "$.outcomes");
  std::vector<std::vector<int>> outcomes;
  for (std::size_t w = 0; w < outcomes_doc.size(); ++w) {
    const std::string path = "$.outcomes[" + std::to_string(w) + "]";
    const auto& tuple = array_at(outcomes_doc[w], path);
    if (tuple.size() != variables.size()) {
      schema_fail(path, "has " + std::to_string(tuple.size()) + " labels for " + std::to_string(variables.size()) + " variables");
    }
    std::vector<int> row;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      const std::string label = label_at(tuple[i], path + "[" + std::to_string(i) + "]");
      const auto& range = variables[i].labels;
      const auto it = std::find(range.begin(), range.end(), label);
      if (it == range.end()) schema_fail(path + "[" + std::to_string(i) + "]", "unknown label '" + label + "' for " + variables[i].name);
      row.push_back(static_cast<int>(it - range.begin()));
    }
    outcomes.push_back(std::move(row));
  }
  std::vector<std::vector<double>> dists{numbers(field(doc, "P", "$"), "$.P")};
  if (doc.contains("Q")) dists.push_back(numbers(doc["Q"], "$.Q"));
  return validated("system", [&] { return DiscreteSystem(std::move(variables), std::move(outcomes), std::move(dists)); });
}

json system_to_json(const DiscreteSystem& system) {
  json doc;
  doc["variables"] = json::array();
  for (const auto& v : system.variables()) doc["variables"].push_back({{"name", v.name}, {"labels", v.labels}});
  doc["outcomes"] = json::array();
  for (const auto& o : system.outcomes()) {
    json row = json::array();
    for (std::size_t i = 0; i < o.size(); ++i) row.push_back(system.variables()[i].labels[o[i]]);
    doc["outcomes"].push_back(row);
  }
  doc["P"] = system.distribution(0);
  if (system.has_reference()) doc["Q"] = system.distribution(1);
  return doc;
}

AbstractSystem abstract_from_json(const json& doc) {
  auto table = int_matrix(field(doc, "monoid_table", "$"), "$.monoid_table");
  int identity = -1;
  if (doc.contains("identity")) {
    identity = int_at(doc["identity"], "$.identity");
  } else {
    for (int e = 0; e < static_cast<int>(table.size()) && identity < 0; ++e) {
      bool neutral = true;
      for (int x = 0; x < static_cast<int>(table.size()) && neutral; ++x) {
        neutral = x < static_cast<int>(table[e].size()) && table[e][x] == x;
      }
      if (neutral) identity = e;
    }
    if (identity < 0) schema_fail("$.monoid_table", "no identity element");
  }
  auto factors = integers(field(doc, "group_factors", "$"), "$.group_factors");
  auto action = int_matrix(field(doc, "action_table", "$"), "$.action_table");
  auto variables = integers(field(doc, "variables", "$"), "$.variables");
  MonoidModel model = validated("model", [&] {
    return MonoidModel(FiniteMonoid(std::move(table), identity), FiniteAbelianGroup(std::move(factors)), std::move(action));
  });
  const bool has_cocycle = doc.contains("cocycle");
  const bool has_generator = doc.contains("psi_generator");
  if (has_cocycle == has_generator) schema_fail("$", "exactly one of \"cocycle\" and \"psi_generator\" is required");
  Cocycle f = has_cocycle ? validated("$.cocycle", [&] { return Cocycle(model, integers(doc["cocycle"], "$.cocycle")); })
                          : validated("$.psi_generator", [&] { return psi(model, int_at(doc["psi_generator"], "$.psi_generator")); });
  for (std::size_t i = 0; i < variables.size(); ++i) {
    if (variables[i] < 0 || variables[i] >= model.monoid().size()) {
      schema_fail("$.variables[" + std::to_string(i) + "]", "not a monoid element");
    }
  }
  return AbstractSystem{std::move(model), std::move(variables), std::move(f)};
}

json abstract_to_json(const AbstractSystem& system) {
  json doc;
  doc["monoid_table"] = system.model.monoid().table();
  doc["identity"] = system.model.monoid().identity();
  doc["group_factors"] = system.model.group().factors();
  doc["action_table"] = system.model.action_table();
  doc["cocycle"] = system.cocycle.values();
  doc["variables"] = system.variables;
  return doc;
}

Graph graph_from_json(const json& doc) {
  const int n = int_at(field(doc, "n", "$"), "$.n");
  const auto& edges_doc = array_at(field(doc, "edges", "$"), "$.edges");
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < edges_doc.size(); ++k) {
    const std::string path = "$.edges[" + std::to_string(k) + "]";
    const auto pair = integers(edges_doc[k], path);
    if (pair.size() != 2) schema_fail(path, "an edge has exactly two endpoints");
    edges.emplace_back(pair[0], pair[1]);
  }
  return validated("graph", [&] { return Graph(n, std::move(edges)); });
}

json graph_to_json(const Graph& graph) {
  json edges = json::array();
  for (auto [a, b] : graph.edges()) edges.push_back({a, b});
  return {{"n", graph.n()}, {"edges", edges}};
}

SecondLawConfig second_law_from_json(const json& doc) {
  SecondLawConfig cfg;
  cfg.p1 = numbers(field(doc, "P1", "$"), "$.P1");
  cfg.q1 = numbers(field(doc, "Q1", "$"), "$.Q1");
  if (doc.contains("state_sizes")) {
    cfg.state_sizes = integers(doc["state_sizes"], "$.state_sizes");
  } else {
    const int n = int_at(field(doc, "n", "$"), "$.n");
    if (n < 1) schema_fail("$.n", "must be positive");
    cfg.state_sizes.assign(n, static_cast<int>(cfg.p1.size()));
  }
  if (doc.contains("transitions")) {
    const auto& arr = array_at(doc["transitions"], "$.transitions");
    for (std::size_t k = 0; k < arr.size(); ++k) cfg.transitions.push_back(real_matrix(arr[k], "$.transitions[" + std::to_string(k) + "]"));
  } else {
    const auto t = real_matrix(field(doc, "transition", "$"), "$.transition");
    cfg.transitions.assign(cfg.state_sizes.empty() ? 0 : cfg.state_sizes.size() - 1, t);
  }
  return cfg;
}

std::string format_exact(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string format_fixed(double v, int decimals) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(decimals) << v;
  std::string s = os.str();
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

OutputFormat parse_output_format(const std::string& text) {
  if (text == "table") return OutputFormat::Table;
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  if (text == "dot") return OutputFormat::Dot;
  throw ArgumentError("unknown output format '" + text + "'");
}

std::string render_diagram(const DiagramReport& report, OutputFormat format) {
  std::ostringstream os;
  switch (format) {
    case OutputFormat::Table: {
      os << "# " << report.backend << " diagram, n=" << report.n;
      if (!report.exact) os << ", log base " << report.base;
      os << "\n";
      std::vector<std::string> names, values;
      for (const auto& r : report.atoms) {
        names.push_back(Atom(r.atom).to_string());
        values.push_back(report.exact ? r.text : format_fixed(r.value));
      }
      const std::string total_value = report.exact ? report.total_text : format_fixed(report.total);
      std::size_t name_w = 5, value_w = 5;
      for (const auto& s : names) name_w = std::max(name_w, s.size());
      for (const auto& s : values) value_w = std::max(value_w, s.size());
      value_w = std::max(value_w, total_value.size());
      os << std::left << std::setw(static_cast<int>(name_w)) << "atom" << "  " << std::right
         << std::setw(static_cast<int>(value_w)) << "value" << "  zero\n";
      for (std::size_t k = 0; k < names.size(); ++k) {
        os << std::left << std::setw(static_cast<int>(name_w)) << names[k] << "  " << std::right
           << std::setw(static_cast<int>(value_w)) << values[k] << "  " << (report.atoms[k].zero ? "yes" : "no") << "\n";
      }
      os << std::left << std::setw(static_cast<int>(name_w)) << "total" << "  " << std::right
         << std::setw(static_cast<int>(value_w)) << total_value << "\n";
      break;
    }
    case OutputFormat::Csv: {
      os << "backend,n,base,exact\n"
         << csv_field(report.backend) << "," << report.n << "," << csv_field(report.base) << "," << (report.exact ? 1 : 0) << "\n";
      os << "atom,value,text,zero\n";
      for (const auto& r : report.atoms) {
        os << space_separated(r.atom) << "," << format_exact(r.value) << "," << csv_field(r.text) << "," << (r.zero ? 1 : 0) << "\n";
      }
      os << "total," << format_exact(report.total) << "," << csv_field(report.total_text) << ",\n";
      break;
    }
    case OutputFormat::Json: {
      // Doubles are emitted with round-trip precision by nlohmann::json.
      json doc;
      doc["backend"] = report.backend;
      doc["n"] = report.n;
      doc["base"] = report.base;
      doc["exact"] = report.exact;
      doc["atoms"] = json::array();
      for (const auto& r : report.atoms) {
        doc["atoms"].push_back({{"atom", r.atom.indices()}, {"value", r.value}, {"text", r.text}, {"zero", r.zero}});
      }
      doc["total"] = report.total;
      doc["total_text"] = report.total_text;
      os << doc.dump(2) << "\n";
      break;
    }
    case OutputFormat::Dot:
      throw ArgumentError("dot output is only available for graphs");
  }
  return os.str();
}

DiagramReport parse_diagram_json(const std::string& text) {
  const json doc = parse_json_text(text, "diagram");
  DiagramReport r;
  r.backend = field(doc, "backend", "$").get<std::string>();
  r.n = int_at(field(doc, "n", "$"), "$.n");
  r.base = field(doc, "base", "$").get<std::string>();
  r.exact = field(doc, "exact", "$").get<bool>();
  const auto& atoms = array_at(field(doc, "atoms", "$"), "$.atoms");
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const std::string path = "$.atoms[" + std::to_string(k) + "]";
    AtomRecord rec;
    rec.atom = VarSubset::from_indices(integers(field(atoms[k], "atom", path), path + ".atom"));
    rec.value = number_at(field(atoms[k], "value", path), path + ".value");
    rec.text = field(atoms[k], "text", path).get<std::string>();
    rec.zero = field(atoms[k], "zero", path).get<bool>();
    r.atoms.push_back(rec);
  }
  r.total = number_at(field(doc, "total", "$"), "$.total");
  r.total_text = field(doc, "total_text", "$").get<std::string>();
  return r;
}

DiagramReport parse_diagram_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  auto next = [&](const char* what) {
    if (!std::getline(in, line)) throw SchemaError(std::string("csv: missing ") + what);
    return split_csv_line(line);
  };
  if (next("header") != std::vector<std::string>{"backend", "n", "base", "exact"}) throw SchemaError("csv: bad header");
  const auto meta = next("metadata");
  if (meta.size() != 4) throw SchemaError("csv: bad metadata row");
  DiagramReport r;
  r.backend = meta[0];
  r.n = static_cast<int>(parse_double(meta[1], "csv n"));
  r.base = meta[2];
  r.exact = meta[3] == "1";
  if (next("atom header") != std::vector<std::string>{"atom", "value", "text", "zero"}) throw SchemaError("csv: bad atom header");
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    if (cells.size() != 4) throw SchemaError("csv: expected 4 fields in '" + line + "'");
    if (cells[0] == "total") {
      r.total = parse_double(cells[1], "csv total");
      r.total_text = cells[2];
      continue;
    }
    r.atoms.push_back(AtomRecord{parse_space_separated(cells[0]), parse_double(cells[1], "csv value"), cells[2], cells[3] == "1"});
  }
  return r;
}

std::string render_dot(const Graph& graph, const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "graph G {\n";
  for (int v = 1; v <= graph.n(); ++v) {
    os << "  " << v;
    if (static_cast<std::size_t>(v) <= names.size()) os << " [label=\"" << names[v - 1] << "\"]";
    os << ";\n";
  }
  for (auto [a, b] : graph.edges()) os << "  " << a << " -- " << b << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace infodiag
