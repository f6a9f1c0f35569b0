#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "infodiag/var_subset.hpp"

namespace infodiag {

/// Tolerance on input probability vectors: entries must sum to 1 within this.
inline constexpr double kNormalizationTolerance = 1e-12;
/// Factorization tolerance of the probabilistic independence oracle.
inline constexpr double kFactorizationTolerance = 1e-9;

struct Variable {
  std::string name;
  /// Value space; outcomes refer to labels by position.
  std::vector<std::string> labels;
};

/// Induced partition of the outcomes by the joint variable X_S.
struct OutcomeClasses {
  /// Dense class id per outcome, numbered by first occurrence.
  std::vector<int> id;
  int count = 0;
};

/// Finite sample space with n variables and the tuple (P || Q), r in {0, 1}.
///
/// Immutable after construction. Zero-mass outcomes are kept.
class DiscreteSystem {
 public:
  /// `outcomes[w][i]` is the label index of variable i+1 at outcome w.
  /// `distributions` holds P and optionally Q, aligned with `outcomes`.
  /// Throws ArgumentError on malformed input and DomainError when P is not
  /// absolutely continuous with respect to Q.
  DiscreteSystem(std::vector<Variable> variables, std::vector<std::vector<int>> outcomes,
                 std::vector<std::vector<double>> distributions);

  int variable_count() const { return static_cast<int>(variables_.size()); }
  std::size_t outcome_count() const { return outcomes_.size(); }
  /// r + 1
  int distribution_count() const { return static_cast<int>(distributions_.size()); }
  bool has_reference() const { return distributions_.size() == 2; }

  /// 1-based variable index.
  const Variable& variable(int index) const;
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<std::vector<int>>& outcomes() const { return outcomes_; }
  /// 0 is P, 1 is Q.
  const std::vector<double>& distribution(int index) const;
  /// Label index of variable `index` (1-based) at outcome `w`.
  int label_index(std::size_t w, int index) const { return outcomes_[w][index - 1]; }

  /// Outcome partition induced by X_S; a single class for S empty.
  OutcomeClasses classes(VarSubset s) const;

  /// Total mass of each class under the given distribution.
  std::vector<double> class_masses(const OutcomeClasses& classes, int dist_index) const;

 private:
  std::vector<Variable> variables_;
  std::vector<std::vector<int>> outcomes_;
  std::vector<std::vector<double>> distributions_;
};

/// Pushforward law over the full product of the label ranges of S.
struct Marginal {
  VarSubset variables;
  /// Label-index tuple (ascending variable order) -> probability.
  std::map<std::vector<int>, double> table;
};

Marginal marginal(const DiscreteSystem& system, int dist_index, VarSubset s);

/// Conditions every distribution of the tuple on X_Y = y. `y` lists label
/// indices in ascending variable order.
/// Throws ConditioningError when P(y) = 0 and DomainError when Q(y) = 0.
DiscreteSystem condition(const DiscreteSystem& system, VarSubset y, const std::vector<int>& labels);
/// Same, with labels given by name.
DiscreteSystem condition_on_labels(const DiscreteSystem& system, VarSubset y, const std::vector<std::string>& labels);

/// Label-index tuples of X_Y with positive P mass, in order of first occurrence.
std::vector<std::vector<int>> observed_values(const DiscreteSystem& system, VarSubset y);

/// P(x, y, z) = P(x | z) P(y, z) for all value triples, within
/// kFactorizationTolerance; P(x | z) is taken as 0 where P(z) = 0.
bool p_independent(const DiscreteSystem& system, int dist_index, VarSubset a, VarSubset b, VarSubset c);

/// Variables X1..Xn over the product of {0..k_i - 1}, labels "0".."k_i-1".
/// `transitions[i]` is the k_{i+1} x k_{i+2} matrix T(x_{i+2} | x_{i+1}).
/// Throws ArgumentError on inconsistent sizes or rows not summing to 1.
DiscreteSystem build_markov_chain(const std::vector<int>& state_sizes, const std::vector<double>& initial,
                                  const std::vector<std::vector<std::vector<double>>>& transitions);

/// (P || Q) chains driven by the same transitions from initial laws P1 and Q1.
/// Throws DomainError if P is not absolutely continuous w.r.t. Q.
DiscreteSystem second_law_system(const std::vector<int>& state_sizes, const std::vector<double>& p1,
                                 const std::vector<double>& q1,
                                 const std::vector<std::vector<std::vector<double>>>& transitions);

}  // namespace infodiag
