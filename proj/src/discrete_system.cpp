#include "infodiag/discrete_system.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "infodiag/errors.hpp"
#include "infodiag/value_group.hpp"

namespace infodiag {

namespace {

constexpr std::size_t kMaxOutcomes = std::size_t{1} << 24;

std::string outcome_text(const std::vector<Variable>& vars, const std::vector<int>& outcome) {
  std::string out = "(";
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (i > 0) out += ',';
    out += vars[i].labels[outcome[i]];
  }
  return out + ")";
}

/// Validates a probability vector and rescales it to sum exactly to 1 up to rounding.
std::vector<double> normalized(std::vector<double> p, const std::string& what) {
  CompensatedSum sum;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!std::isfinite(p[k]) || p[k] < 0.0) {
      throw ArgumentError(what + " entry " + std::to_string(k) + " is negative or not finite");
    }
    sum.add(p[k]);
  }
  const double total = sum.value();
  if (std::abs(total - 1.0) > kNormalizationTolerance) {
    throw ArgumentError(what + " sums to " + std::to_string(total) + ", not 1");
  }
  if (total != 1.0) {
    for (auto& v : p) v /= total;
  }
  return p;
}

void check_stochastic_rows(const std::vector<std::vector<double>>& m, std::size_t rows, std::size_t cols,
                           const std::string& what) {
  if (m.size() != rows) throw ArgumentError(what + " has " + std::to_string(m.size()) + " rows, expected " + std::to_string(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    if (m[r].size() != cols) throw ArgumentError(what + " row " + std::to_string(r) + " has wrong length");
    double total = 0.0;
    for (double v : m[r]) {
      if (!std::isfinite(v) || v < 0.0) throw ArgumentError(what + " has a negative entry in row " + std::to_string(r));
      total += v;
    }
    if (std::abs(total - 1.0) > kNormalizationTolerance) {
      throw ArgumentError(what + " row " + std::to_string(r) + " sums to " + std::to_string(total));
    }
  }
}

struct ChainSpace {
  std::vector<Variable> variables;
  std::vector<std::vector<int>> outcomes;
};

ChainSpace chain_space(const std::vector<int>& sizes) {
  if (sizes.empty()) throw ArgumentError("a chain needs at least one variable");
  check_variable_count(static_cast<int>(sizes.size()), kHardMaxVariables);
  std::size_t total = 1;
  ChainSpace space;
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1) throw ArgumentError("state space of X" + std::to_string(i + 1) + " is empty");
    total *= static_cast<std::size_t>(sizes[i]);
    if (total > kMaxOutcomes) throw SizeError("chain state space too large");
    Variable v{"X" + std::to_string(i + 1), {}};
    for (int k = 0; k < sizes[i]; ++k) v.labels.push_back(std::to_string(k));
    space.variables.push_back(std::move(v));
  }
  std::vector<int> current(sizes.size(), 0);
  for (std::size_t w = 0; w < total; ++w) {
    space.outcomes.push_back(current);
    for (int i = static_cast<int>(sizes.size()) - 1; i >= 0; --i) {
      if (++current[i] < sizes[i]) break;
      current[i] = 0;
    }
  }
  return space;
}

std::vector<double> chain_joint(const ChainSpace& space, const std::vector<int>& sizes, const std::vector<double>& initial,
                                const std::vector<std::vector<std::vector<double>>>& transitions) {
  if (initial.size() != static_cast<std::size_t>(sizes[0])) throw ArgumentError("initial law has wrong length");
  normalized(initial, "initial law");
  if (transitions.size() + 1 != sizes.size()) {
    throw ArgumentError("expected " + std::to_string(sizes.size() - 1) + " transition matrices, got " +
                        std::to_string(transitions.size()));
  }
  for (std::size_t i = 0; i < transitions.size(); ++i) {
    check_stochastic_rows(transitions[i], sizes[i], sizes[i + 1], "transition " + std::to_string(i + 1));
  }
  std::vector<double> joint;
  joint.reserve(space.outcomes.size());
  for (const auto& x : space.outcomes) {
    double mass = initial[x[0]];
    for (std::size_t i = 0; i + 1 < x.size(); ++i) mass *= transitions[i][x[i]][x[i + 1]];
    joint.push_back(mass);
  }
  return joint;
}

}  // namespace

DiscreteSystem::DiscreteSystem(std::vector<Variable> variables, std::vector<std::vector<int>> outcomes,
                               std::vector<std::vector<double>> distributions)
    : variables_(std::move(variables)), outcomes_(std::move(outcomes)) {
  const int n = static_cast<int>(variables_.size());
  check_variable_count(n, kHardMaxVariables);
  for (const auto& v : variables_) {
    if (v.labels.empty()) throw ArgumentError("variable " + v.name + " has no labels");
    for (std::size_t a = 0; a < v.labels.size(); ++a) {
      for (std::size_t b = a + 1; b < v.labels.size(); ++b) {
        if (v.labels[a] == v.labels[b]) throw ArgumentError("variable " + v.name + " repeats label " + v.labels[a]);
      }
    }
  }
  if (outcomes_.empty()) throw ArgumentError("sample space is empty");
  if (outcomes_.size() > kMaxOutcomes) throw SizeError("too many outcomes");
  for (std::size_t w = 0; w < outcomes_.size(); ++w) {
    if (outcomes_[w].size() != variables_.size()) {
      throw ArgumentError("outcome " + std::to_string(w) + " has " + std::to_string(outcomes_[w].size()) +
                          " labels, expected " + std::to_string(n));
    }
    for (int i = 0; i < n; ++i) {
      const int label = outcomes_[w][i];
      if (label < 0 || label >= static_cast<int>(variables_[i].labels.size())) {
        throw ArgumentError("outcome " + std::to_string(w) + " has an unknown label for " + variables_[i].name);
      }
    }
  }
  if (distributions.empty() || distributions.size() > 2) {
    throw ArgumentError("expected P and optionally Q, got " + std::to_string(distributions.size()) + " distributions");
  }
  for (std::size_t d = 0; d < distributions.size(); ++d) {
    const std::string what = d == 0 ? "P" : "Q";
    if (distributions[d].size() != outcomes_.size()) {
      throw ArgumentError(what + " has " + std::to_string(distributions[d].size()) + " entries for " +
                          std::to_string(outcomes_.size()) + " outcomes");
    }
    distributions_.push_back(normalized(std::move(distributions[d]), what));
  }
  if (has_reference()) {
    for (std::size_t w = 0; w < outcomes_.size(); ++w) {
      if (distributions_[0][w] > 0.0 && distributions_[1][w] == 0.0) {
        throw DomainError("P is not absolutely continuous w.r.t. Q at outcome " + outcome_text(variables_, outcomes_[w]));
      }
    }
  }
}

const Variable& DiscreteSystem::variable(int index) const {
  if (index < 1 || index > variable_count()) throw ArgumentError("variable index " + std::to_string(index) + " out of range");
  return variables_[index - 1];
}

const std::vector<double>& DiscreteSystem::distribution(int index) const {
  if (index < 0 || index >= distribution_count()) {
    throw ArgumentError("distribution index " + std::to_string(index) + " out of range");
  }
  return distributions_[index];
}

OutcomeClasses DiscreteSystem::classes(VarSubset s) const {
  if (!s.fits(variable_count())) throw ArgumentError("variable set " + s.to_string() + " out of range");
  OutcomeClasses out;
  out.id.assign(outcomes_.size(), 0);
  out.count = 1;
  std::vector<int> lookup;
  for (int i : s.indices()) {
    const int k = static_cast<int>(variables_[i - 1].labels.size());
    lookup.assign(static_cast<std::size_t>(out.count) * k, -1);
    int next = 0;
    for (std::size_t w = 0; w < outcomes_.size(); ++w) {
      int& slot = lookup[static_cast<std::size_t>(out.id[w]) * k + outcomes_[w][i - 1]];
      if (slot < 0) slot = next++;
      out.id[w] = slot;
    }
    out.count = next;
  }
  return out;
}

std::vector<double> DiscreteSystem::class_masses(const OutcomeClasses& classes, int dist_index) const {
  const auto& p = distribution(dist_index);
  std::vector<CompensatedSum> sums(classes.count);
  for (std::size_t w = 0; w < outcomes_.size(); ++w) sums[classes.id[w]].add(p[w]);
  std::vector<double> mass(classes.count);
  for (int c = 0; c < classes.count; ++c) mass[c] = sums[c].value();
  return mass;
}

Marginal marginal(const DiscreteSystem& system, int dist_index, VarSubset s) {
  const auto& p = system.distribution(dist_index);
  const auto idx = s.indices();
  if (!s.fits(system.variable_count())) throw ArgumentError("variable set " + s.to_string() + " out of range");
  Marginal out{s, {}};
  std::size_t product = 1;
  for (int i : idx) {
    product *= system.variable(i).labels.size();
    if (product > kMaxOutcomes) throw SizeError("marginal table too large");
  }
  std::vector<int> tuple(idx.size(), 0);
  for (std::size_t t = 0; t < product; ++t) {
    out.table.emplace(tuple, 0.0);
    for (int k = static_cast<int>(idx.size()) - 1; k >= 0; --k) {
      if (++tuple[k] < static_cast<int>(system.variable(idx[k]).labels.size())) break;
      tuple[k] = 0;
    }
  }
  for (std::size_t w = 0; w < system.outcome_count(); ++w) {
    for (std::size_t k = 0; k < idx.size(); ++k) tuple[k] = system.label_index(w, idx[k]);
    out.table[tuple] += p[w];
  }
  return out;
}

DiscreteSystem condition(const DiscreteSystem& system, VarSubset y, const std::vector<int>& labels) {
  const auto idx = y.indices();
  if (!y.fits(system.variable_count())) throw ArgumentError("conditioning set " + y.to_string() + " out of range");
  if (labels.size() != idx.size()) throw ArgumentError("conditioning value has the wrong number of labels");
  std::vector<char> match(system.outcome_count(), 1);
  for (std::size_t w = 0; w < system.outcome_count(); ++w) {
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (system.label_index(w, idx[k]) != labels[k]) {
        match[w] = 0;
        break;
      }
    }
  }
  std::vector<std::vector<double>> conditioned;
  for (int d = 0; d < system.distribution_count(); ++d) {
    const auto& p = system.distribution(d);
    double mass = 0.0;
    for (std::size_t w = 0; w < p.size(); ++w) {
      if (match[w]) mass += p[w];
    }
    if (mass == 0.0) {
      if (d == 0) throw ConditioningError("P assigns zero mass to the conditioning value");
      throw DomainError("Q assigns zero mass to a conditioning value with positive P mass");
    }
    std::vector<double> q(p.size(), 0.0);
    for (std::size_t w = 0; w < p.size(); ++w) {
      if (match[w]) q[w] = p[w] / mass;
    }
    conditioned.push_back(std::move(q));
  }
  return DiscreteSystem(system.variables(), system.outcomes(), std::move(conditioned));
}

DiscreteSystem condition_on_labels(const DiscreteSystem& system, VarSubset y, const std::vector<std::string>& labels) {
  const auto idx = y.indices();
  if (labels.size() != idx.size()) throw ArgumentError("conditioning value has the wrong number of labels");
  std::vector<int> positions;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto& range = system.variable(idx[k]).labels;
    const auto it = std::find(range.begin(), range.end(), labels[k]);
    if (it == range.end()) throw ArgumentError("unknown label '" + labels[k] + "' for " + system.variable(idx[k]).name);
    positions.push_back(static_cast<int>(it - range.begin()));
  }
  return condition(system, y, positions);
}

std::vector<std::vector<int>> observed_values(const DiscreteSystem& system, VarSubset y) {
  const auto cls = system.classes(y);
  const auto& p = system.distribution(0);
  const auto idx = y.indices();
  std::vector<char> seen(cls.count, 0);
  std::vector<std::vector<int>> out;
  for (std::size_t w = 0; w < system.outcome_count(); ++w) {
    if (p[w] <= 0.0 || seen[cls.id[w]]) continue;
    seen[cls.id[w]] = 1;
    std::vector<int> tuple;
    for (int i : idx) tuple.push_back(system.label_index(w, i));
    out.push_back(std::move(tuple));
  }
  return out;
}

bool p_independent(const DiscreteSystem& system, int dist_index, VarSubset a, VarSubset b, VarSubset c) {
  const auto cc = system.classes(c);
  const auto cac = system.classes(a | c);
  const auto cbc = system.classes(b | c);
  const auto cabc = system.classes(a | b | c);
  const auto pc = system.class_masses(cc, dist_index);
  const auto pac = system.class_masses(cac, dist_index);
  const auto pbc = system.class_masses(cbc, dist_index);
  const auto pabc = system.class_masses(cabc, dist_index);

  // Parent c-class of every ac / bc class, and the abc class of each observed pair.
  std::vector<int> ac_parent(cac.count), bc_parent(cbc.count);
  std::unordered_map<std::uint64_t, int> pair_class;
  for (std::size_t w = 0; w < system.outcome_count(); ++w) {
    ac_parent[cac.id[w]] = cc.id[w];
    bc_parent[cbc.id[w]] = cc.id[w];
    pair_class.emplace((static_cast<std::uint64_t>(cac.id[w]) << 32) | static_cast<std::uint32_t>(cbc.id[w]), cabc.id[w]);
  }
  std::vector<std::vector<int>> ac_of(cc.count), bc_of(cc.count);
  for (int k = 0; k < cac.count; ++k) ac_of[ac_parent[k]].push_back(k);
  for (int k = 0; k < cbc.count; ++k) bc_of[bc_parent[k]].push_back(k);

  for (int z = 0; z < cc.count; ++z) {
    for (int x : ac_of[z]) {
      const double x_given_z = pc[z] > 0.0 ? pac[x] / pc[z] : 0.0;
      for (int y : bc_of[z]) {
        const auto it = pair_class.find((static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(y));
        const double joint = it == pair_class.end() ? 0.0 : pabc[it->second];
        if (std::abs(joint - x_given_z * pbc[y]) > kFactorizationTolerance) return false;
      }
    }
  }
  return true;
}

DiscreteSystem build_markov_chain(const std::vector<int>& state_sizes, const std::vector<double>& initial,
                                  const std::vector<std::vector<std::vector<double>>>& transitions) {
  ChainSpace space = chain_space(state_sizes);
  auto joint = chain_joint(space, state_sizes, initial, transitions);
  return DiscreteSystem(std::move(space.variables), std::move(space.outcomes), {std::move(joint)});
}

DiscreteSystem second_law_system(const std::vector<int>& state_sizes, const std::vector<double>& p1,
                                 const std::vector<double>& q1,
                                 const std::vector<std::vector<std::vector<double>>>& transitions) {
  ChainSpace space = chain_space(state_sizes);
  auto p = chain_joint(space, state_sizes, p1, transitions);
  auto q = chain_joint(space, state_sizes, q1, transitions);
  return DiscreteSystem(std::move(space.variables), std::move(space.outcomes), {std::move(p), std::move(q)});
}

}  // namespace infodiag
