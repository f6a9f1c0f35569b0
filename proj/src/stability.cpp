#include "infodiag/stability.hpp"

#include <cmath>

#include "infodiag/errors.hpp"

namespace infodiag {

namespace {

bool fcmi_holds(const DiscreteSystem& system, int dist, const ConditionalPartition& k) {
  const VarSubset all = k.covered();
  for (auto part : k.parts()) {
    if (!p_independent(system, dist, part, all - part, k.conditioning())) return false;
  }
  return true;
}

bool mrf_holds(const DiscreteSystem& system, int dist, const Graph& g) {
  return test_mrf_oracle(
      g, [&](VarSubset a, VarSubset b, VarSubset c) { return p_independent(system, dist, a, b, c); },
      MarkovMode::Cutset);
}

bool transitions_equal(const DiscreteSystem& system) {
  const int n = system.variable_count();
  for (int i = 2; i <= n; ++i) {
    const auto prev = system.classes(VarSubset::singleton(i - 1));
    const auto pair = system.classes(VarSubset{i - 1, i});
    const auto p_prev = system.class_masses(prev, 0);
    const auto q_prev = system.class_masses(prev, 1);
    const auto p_pair = system.class_masses(pair, 0);
    const auto q_pair = system.class_masses(pair, 1);
    std::vector<int> parent(pair.count, 0);
    for (std::size_t w = 0; w < system.outcome_count(); ++w) parent[pair.id[w]] = prev.id[w];
    for (int c = 0; c < pair.count; ++c) {
      const int x = parent[c];
      if (p_prev[x] <= 0.0) continue;
      if (q_prev[x] <= 0.0) return false;
      if (std::abs(p_pair[c] / p_prev[x] - q_pair[c] / q_prev[x]) > kFactorizationTolerance) return false;
    }
  }
  return true;
}

}  // namespace

bool property_holds(const DiscreteSystem& system, const StableProperty& property) {
  return std::visit(
      [&](const auto& prop) -> bool {
        using T = std::decay_t<decltype(prop)>;
        if constexpr (std::is_same_v<T, FcmiProperty>) {
          if (prop.partition.n() != system.variable_count()) throw ArgumentError("partition size mismatch");
          return fcmi_holds(system, 0, prop.partition);
        } else if constexpr (std::is_same_v<T, MrfProperty>) {
          if (prop.graph.n() != system.variable_count()) throw ArgumentError("graph size mismatch");
          return mrf_holds(system, 0, prop.graph);
        } else {
          if (!system.has_reference()) throw ArgumentError("equal transitions need a reference distribution Q");
          const Graph chain = Graph::path(system.variable_count());
          return mrf_holds(system, 0, chain) && mrf_holds(system, 1, chain) && transitions_equal(system);
        }
      },
      property);
}

bool verify_stability(const DiscreteSystem& system, const StableProperty& property, VarSubset y,
                      const std::vector<int>& labels) {
  if (!property_holds(system, property)) throw ArgumentError("property does not hold on the unconditioned system");
  return property_holds(condition(system, y, labels), property);
}

}  // namespace infodiag
