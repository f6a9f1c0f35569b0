#pragma once

#include <variant>
#include <vector>

#include "infodiag/diagram.hpp"
#include "infodiag/discrete_system.hpp"
#include "infodiag/graph.hpp"

namespace infodiag {

struct FcmiProperty {
  ConditionalPartition partition;
};

struct MrfProperty {
  Graph graph;
};

/// X1..Xn is a P- and Q-Markov chain and P(x_i | x_{i-1}) = Q(x_i | x_{i-1})
/// wherever P(x_{i-1}) > 0.
struct EqualTransitionsProperty {};

using StableProperty = std::variant<FcmiProperty, MrfProperty, EqualTransitionsProperty>;

/// Checks the property with the factorization oracle (no diagrams involved).
bool property_holds(const DiscreteSystem& system, const StableProperty& property);

/// Whether the property survives conditioning on X_Y = y (label indices).
/// Throws ArgumentError if the property fails on `system` itself.
bool verify_stability(const DiscreteSystem& system, const StableProperty& property, VarSubset y,
                      const std::vector<int>& labels);

}  // namespace infodiag
