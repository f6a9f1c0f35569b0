#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infodiag/var_subset.hpp"

namespace infodiag {

inline constexpr int kMaxMonoidSize = 64;
inline constexpr int kMaxGroupOrder = 256;

/// Finite commutative idempotent monoid given by its multiplication table.
class FiniteMonoid {
 public:
  /// Throws ArgumentError unless the table is commutative, associative,
  /// idempotent and `identity` is neutral; SizeError above kMaxMonoidSize.
  FiniteMonoid(std::vector<std::vector<int>> table, int identity);

  /// Subsets of {1..n} under union; element k is the bit pattern k.
  static FiniteMonoid subsets(int n);

  int size() const { return static_cast<int>(table_.size()); }
  int identity() const { return identity_; }
  int multiply(int a, int b) const { return table_[a][b]; }
  const std::vector<std::vector<int>>& table() const { return table_; }
  /// x <= y iff xy = y.
  bool precedes(int x, int y) const { return multiply(x, y) == y; }

 private:
  std::vector<std::vector<int>> table_;
  int identity_;
};

/// The unique element absorbing every other one, if any.
std::optional<int> top_element(const FiniteMonoid& monoid);

/// Z/k_1 x ... x Z/k_s; elements are mixed-radix integers, first factor most significant.
class FiniteAbelianGroup {
 public:
  /// Factors must be >= 2; an empty list gives the trivial group.
  explicit FiniteAbelianGroup(std::vector<int> factors = {});

  const std::vector<int>& factors() const { return factors_; }
  int order() const { return order_; }
  bool is_trivial() const { return order_ == 1; }
  /// Finite groups are torsion-free only when trivial.
  bool torsion_free() const { return is_trivial(); }

  int zero() const { return 0; }
  int add(int a, int b) const;
  int negate(int a) const;
  int subtract(int a, int b) const { return add(a, negate(b)); }
  std::vector<int> digits(int a) const;
  int from_digits(const std::vector<int>& digits) const;
  /// "1" for cyclic groups, "(1,0)" for products.
  std::string format(int a) const;

 private:
  std::vector<int> factors_;
  int order_ = 1;
};

/// Exact value group backed by a finite abelian group.
class GroupValues {
 public:
  using value_type = int;
  static constexpr bool exact = true;

  explicit GroupValues(FiniteAbelianGroup group = FiniteAbelianGroup{}) : group_(std::move(group)) {}

  int zero() const { return 0; }
  int add(int a, int b) const { return group_.add(a, b); }
  int negate(int a) const { return group_.negate(a); }
  bool is_zero(int v, double) const { return v == 0; }
  double magnitude(int v) const { return v == 0 ? 0.0 : 1.0; }
  std::string format(int v) const { return group_.format(v); }
  const FiniteAbelianGroup& group() const { return group_; }

 private:
  FiniteAbelianGroup group_;
};

/// A monoid acting additively on a group, validated exhaustively.
class MonoidModel {
 public:
  /// `action[x][g]` is x.g. Throws ArgumentError unless the identity acts
  /// trivially, (xy).g = x.(y.g) and x.(g + h) = x.g + x.h.
  MonoidModel(FiniteMonoid monoid, FiniteAbelianGroup group, std::vector<std::vector<int>> action);

  const FiniteMonoid& monoid() const { return monoid_; }
  const FiniteAbelianGroup& group() const { return group_; }
  const std::vector<std::vector<int>>& action_table() const { return action_; }
  int act(int x, int g) const { return action_[x][g]; }

 private:
  FiniteMonoid monoid_;
  FiniteAbelianGroup group_;
  std::vector<std::vector<int>> action_;
};

/// F : M -> G with F(xy) = F(x) + x.F(y).
class Cocycle {
 public:
  /// Throws ArgumentError when the chain rule fails, naming the pair.
  Cocycle(const MonoidModel& model, std::vector<int> values);

  int operator()(int x) const { return values_[x]; }
  const std::vector<int>& values() const { return values_; }
  friend bool operator==(const Cocycle&, const Cocycle&) = default;

 private:
  std::vector<int> values_;
};

/// True if `values` satisfies the chain rule on the model.
bool satisfies_chain_rule(const MonoidModel& model, const std::vector<int>& values);

/// Psi(g)(X) = g - X.g. Needs a top element annihilating g.
/// Throws UnsupportedModelError without a top element and ArgumentError when top.g != 0.
Cocycle psi(const MonoidModel& model, int g);
/// Phi(F) = F(top). Throws UnsupportedModelError without a top element.
int phi(const MonoidModel& model, const Cocycle& f);
/// Elements of G annihilated by the top element, ascending.
std::vector<int> annihilated_by_top(const MonoidModel& model);
/// All cocycles, as Psi(g) over g annihilated by top, in ascending g.
std::vector<Cocycle> enumerate_cocycles(const MonoidModel& model);

/// A model together with variables X_1..X_n in M and a cocycle F.
struct AbstractSystem {
  MonoidModel model;
  std::vector<int> variables;
  Cocycle cocycle;
};

/// M = ({1, 0}, *), G = Z/2, X.g = X*g, X1 = X2 = X3 = 0, F = Psi(1).
/// Element 0 of M is the number 1 and element 1 is the number 0.
AbstractSystem torsion_model();

/// Exact evaluator X_J.F(X_S) = (prod_{j in J} X_j).F(prod_{s in S} X_s).
class AbstractBackend {
 public:
  using group_type = GroupValues;

  explicit AbstractBackend(AbstractSystem system);

  const GroupValues& values() const { return values_; }
  int variable_count() const { return static_cast<int>(system_.variables.size()); }
  std::string name() const { return "abstract"; }
  const AbstractSystem& system() const { return system_; }

  int evaluate(VarSubset j, VarSubset s) const;
  /// X_I as an element of M.
  int product(VarSubset i) const { return products_[i.bits()]; }
  /// Elements of the submonoid generated by the variables, ascending.
  std::vector<int> generated_submonoid() const;

 private:
  AbstractSystem system_;
  GroupValues values_;
  std::vector<int> products_;
};

}  // namespace infodiag
