#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "infodiag/errors.hpp"

namespace infodiag {

/// Default cap on the number of variables; the atom table has 2^n - 1 entries.
inline constexpr int kDefaultMaxVariables = 16;
/// Hard cap imposed by the 32-bit subset encoding.
inline constexpr int kHardMaxVariables = 30;

/// A subset of the variable indices {1..n}; index i is stored in bit i-1.
///
/// Doubles as the monoid element X_I = prod_{i in I} X_i: the product of two
/// elements is the union of their index sets.
class VarSubset {
 public:
  constexpr VarSubset() = default;
  constexpr explicit VarSubset(std::uint32_t bits) : bits_(bits) {}
  VarSubset(std::initializer_list<int> indices);

  static VarSubset from_indices(const std::vector<int>& indices);
  static constexpr VarSubset singleton(int index) { return VarSubset(std::uint32_t{1} << (index - 1)); }
  /// {1..n}
  static constexpr VarSubset full(int n) {
    return VarSubset(n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1));
  }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int index) const { return (bits_ >> (index - 1)) & 1u; }
  constexpr bool subset_of(VarSubset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool disjoint(VarSubset other) const { return (bits_ & other.bits_) == 0; }
  constexpr bool fits(int n) const { return subset_of(full(n)); }
  /// Smallest contained index, 0 for the empty set.
  constexpr int min_index() const { return bits_ == 0 ? 0 : std::countr_zero(bits_) + 1; }
  constexpr int max_index() const { return bits_ == 0 ? 0 : 32 - std::countl_zero(bits_); }
  /// True if the indices form a run of consecutive integers.
  constexpr bool is_interval() const {
    if (bits_ == 0) return false;
    const std::uint32_t shifted = bits_ >> std::countr_zero(bits_);
    return (shifted & (shifted + 1)) == 0;
  }

  constexpr VarSubset complement(int n) const { return VarSubset(~bits_ & full(n).bits_); }
  constexpr VarSubset without(int index) const { return VarSubset(bits_ & ~singleton(index).bits_); }

  /// Ascending list of 1-based indices.
  std::vector<int> indices() const;
  /// Singletons {i} for i in this set, ascending.
  std::vector<VarSubset> singletons() const;
  /// "{1,2,3}" style rendering; "{}" when empty.
  std::string to_string() const;
  /// Compact "123" label used for atom names; indices above 9 are comma separated.
  std::string label() const;

  friend constexpr VarSubset operator|(VarSubset a, VarSubset b) { return VarSubset(a.bits_ | b.bits_); }
  friend constexpr VarSubset operator&(VarSubset a, VarSubset b) { return VarSubset(a.bits_ & b.bits_); }
  /// Set difference.
  friend constexpr VarSubset operator-(VarSubset a, VarSubset b) { return VarSubset(a.bits_ & ~b.bits_); }
  VarSubset& operator|=(VarSubset o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend constexpr auto operator<=>(VarSubset, VarSubset) = default;

 private:
  std::uint32_t bits_ = 0;
};

/// Throws SizeError unless 1 <= n <= max_n (and max_n within the hard cap).
void check_variable_count(int n, int max_n = kDefaultMaxVariables);

/// Parses comma separated 1-based indices, optionally braced: "1,2,3" or
/// "{1,2,3}". Empty text, "-" and "{}" give the empty set. Throws
/// ArgumentError on malformed text or indices outside 1..kHardMaxVariables.
VarSubset parse_var_subset(const std::string& text);

/// An atom p_I of the diagram: a nonempty index set.
class Atom {
 public:
  explicit Atom(VarSubset index_set);
  Atom(std::initializer_list<int> indices) : Atom(VarSubset(indices)) {}

  VarSubset index_set() const { return set_; }
  std::uint32_t bits() const { return set_.bits(); }
  /// Position in the dense atom table (bits - 1).
  std::size_t table_index() const { return set_.bits() - 1; }
  std::string to_string() const { return "p_" + set_.label(); }

  friend auto operator<=>(const Atom&, const Atom&) = default;

 private:
  VarSubset set_;
};

/// Sorted (ascending bit pattern), duplicate-free list of atoms.
using AtomSet = std::vector<Atom>;

/// Sorts and deduplicates.
AtomSet normalize(AtomSet atoms);
bool contains(const AtomSet& atoms, const Atom& atom);

/// All nonempty subsets of `base`, ascending by bit pattern.
std::vector<VarSubset> nonempty_subsets(VarSubset base);
/// All subsets of `base` (including the empty set), ascending.
std::vector<VarSubset> all_subsets(VarSubset base);

}  // namespace infodiag
