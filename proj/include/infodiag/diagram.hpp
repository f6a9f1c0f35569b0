#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "infodiag/errors.hpp"
#include "infodiag/value_group.hpp"
#include "infodiag/var_subset.hpp"

namespace infodiag {

/// All 2^n - 1 atoms in ascending bit-pattern order.
AtomSet enumerate_atoms(int n, int max_n = kDefaultMaxVariables);

/// Atoms inside every circle X_{L_k} and outside X_J:
/// { p_W : W meets every L_k and W does not meet J }.
AtomSet region(int n, std::span<const VarSubset> parts, VarSubset conditioning);

/// (J, L_1..L_q): pairwise disjoint index sets covering {1..n}. Parts may be empty.
class ConditionalPartition {
 public:
  /// Throws ArgumentError when the sets overlap or do not cover {1..n}.
  ConditionalPartition(int n, VarSubset conditioning, std::vector<VarSubset> parts);

  int n() const { return n_; }
  VarSubset conditioning() const { return conditioning_; }
  const std::vector<VarSubset>& parts() const { return parts_; }
  /// L = L_1 u ... u L_q
  VarSubset covered() const;
  std::string to_string() const;

 private:
  int n_;
  VarSubset conditioning_;
  std::vector<VarSubset> parts_;
};

/// Atoms that must vanish exactly when the partition induces an FCMI:
/// union over |I| >= 2 of region([L_i : i in I], J u (L \ L_I)).
AtomSet fcmi_image(const ConditionalPartition& partition);

/// Dense table atom -> value, indexed by bits - 1.
template <ValueGroup G>
class Diagram {
 public:
  using value_type = typename G::value_type;

  Diagram(int n, std::vector<value_type> values, G group, std::string backend)
      : n_(n), values_(std::move(values)), group_(std::move(group)), backend_(std::move(backend)) {
    check_variable_count(n_, kHardMaxVariables);
    if (values_.size() != (std::size_t{1} << n_) - 1) {
      throw ArgumentError("diagram over " + std::to_string(n_) + " variables needs " +
                          std::to_string((std::size_t{1} << n_) - 1) + " atom values");
    }
    scale_ = zero_test_scale(group_, std::span<const value_type>(values_));
  }

  int n() const { return n_; }
  const G& group() const { return group_; }
  const std::string& backend() const { return backend_; }
  const std::vector<value_type>& values() const { return values_; }
  std::size_t atom_count() const { return values_.size(); }

  const value_type& at(const Atom& atom) const {
    if (!atom.index_set().fits(n_)) {
      throw ArgumentError("atom " + atom.to_string() + " outside diagram over " + std::to_string(n_) + " variables");
    }
    return values_[atom.table_index()];
  }

  /// Largest atom magnitude (at least 1); the relative zero-test scale.
  double scale() const { return scale_; }
  bool is_zero(const value_type& v) const { return group_.is_zero(v, scale_); }
  bool is_zero_at(const Atom& atom) const { return is_zero(at(atom)); }

  /// Atoms with nonzero value among `atoms`, in the given order.
  AtomSet nonzero_among(const AtomSet& atoms) const {
    AtomSet out;
    for (const auto& a : atoms) {
      if (!is_zero_at(a)) out.push_back(a);
    }
    return out;
  }

 private:
  int n_;
  std::vector<value_type> values_;
  G group_;
  std::string backend_;
  double scale_ = 1.0;
};

/// Sum of the atoms' values in ascending atom order; zero for the empty set.
template <ValueGroup G>
typename G::value_type measure(const Diagram<G>& diagram, const AtomSet& atoms) {
  const AtomSet sorted = normalize(atoms);
  std::vector<typename G::value_type> picked;
  picked.reserve(sorted.size());
  for (const auto& a : sorted) picked.push_back(diagram.at(a));
  return sum_values(diagram.group(), std::span<const typename G::value_type>(picked));
}

/// Measure of the whole diagram, F(X_[n]).
template <ValueGroup G>
typename G::value_type total(const Diagram<G>& diagram) {
  return sum_values(diagram.group(), std::span<const typename G::value_type>(diagram.values()));
}

}  // namespace infodiag
