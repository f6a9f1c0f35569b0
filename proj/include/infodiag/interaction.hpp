#pragma once

#include <algorithm>
#include <atomic>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "infodiag/diagram.hpp"
#include "infodiag/errors.hpp"
#include "infodiag/value_group.hpp"
#include "infodiag/var_subset.hpp"

namespace infodiag {

/// A degree-1 evaluator: evaluate(J, S) = X_J.F(X_S), with F(X_empty) = 0.
/// Implementations must be safe to call concurrently.
template <class B>
concept InformationBackend = requires(const B& b, VarSubset j, VarSubset s) {
  typename B::group_type;
  requires ValueGroup<typename B::group_type>;
  { b.values() } -> std::convertible_to<const typename B::group_type&>;
  { b.variable_count() } -> std::convertible_to<int>;
  { b.evaluate(j, s) } -> std::same_as<typename B::group_type::value_type>;
  { b.name() } -> std::convertible_to<std::string>;
};

enum class BuildMethod {
  /// Moebius inversion of the 2^n joint values F(X_S).
  Moebius,
  /// One conditioned interaction term per atom.
  Recursive,
};

struct BuildOptions {
  BuildMethod method = BuildMethod::Moebius;
  /// Worker threads for backend evaluation; 0 picks hardware concurrency.
  int jobs = 1;
  int max_variables = kDefaultMaxVariables;
};

struct FcmiResult {
  bool holds = false;
  /// Image atoms with nonzero value, ascending.
  AtomSet violations;
};

/// Memoizing evaluator of conditioned interaction terms X_J.F(X_{L_1};...;X_{L_q}).
///
/// The backend is borrowed and must outlive the engine. All queries are
/// const and may be issued from several threads.
template <InformationBackend B>
class InteractionEngine {
 public:
  using group_type = typename B::group_type;
  using value_type = typename group_type::value_type;

  explicit InteractionEngine(const B& backend, BuildOptions options = {})
      : backend_(&backend), options_(options), n_(backend.variable_count()) {
    check_variable_count(n_, options_.max_variables);
    state_ = std::make_unique<State>();
  }

  const B& backend() const { return *backend_; }
  const group_type& values() const { return backend_->values(); }
  int n() const { return n_; }
  const BuildOptions& options() const { return options_; }

  /// X_J.F(X_{L_1}; ...; X_{L_q}); the order of the L_k does not matter.
  value_type conditioned_interaction(VarSubset j, std::span<const VarSubset> parts) const {
    if (parts.empty()) throw ArgumentError("conditioned interaction needs at least one set");
    check_range(j);
    for (auto p : parts) check_range(p);
    std::vector<VarSubset> sorted(parts.begin(), parts.end());
    std::sort(sorted.begin(), sorted.end());
    return interaction_sorted(j, std::move(sorted));
  }

  value_type conditioned_interaction(VarSubset j, std::initializer_list<VarSubset> parts) const {
    return conditioned_interaction(j, std::span<const VarSubset>(parts.begin(), parts.size()));
  }

  /// F-hat(p_I) = X_{[n]\I}.F(;_{i in I} X_i)
  value_type atom_value(const Atom& atom) const {
    check_range(atom.index_set());
    const VarSubset i = atom.index_set();
    return interaction_sorted(i.complement(n_), i.singletons());
  }

  Diagram<group_type> build_diagram() const {
    std::vector<value_type> table;
    if (options_.method == BuildMethod::Recursive) {
      table = recursive_table();
    } else {
      table = moebius_table();
    }
    return Diagram<group_type>(n_, std::move(table), values(), backend_->name());
  }

  /// Lazily built diagram shared by all queries of this engine.
  const Diagram<group_type>& diagram() const {
    std::call_once(state_->diagram_once, [this] { state_->diagram.emplace(build_diagram()); });
    return *state_->diagram;
  }

  /// Zero test with the diagram-wide relative scale.
  bool is_zero(const value_type& v) const {
    if constexpr (group_type::exact) {
      return values().is_zero(v, 1.0);
    } else {
      return values().is_zero(v, diagram().scale());
    }
  }

  /// Inclusion-exclusion reconstruction of F-hat(p_I) from the conditioned
  /// region values X_{[n]\K}.F-hat(A), K subset of I.
  value_type subset_reconstruct(const AtomSet& region_atoms, const Atom& atom) const {
    const AtomSet a = normalize(region_atoms);
    if (!contains(a, atom)) throw ArgumentError(atom.to_string() + " is not in the given atom set");
    const group_type& g = values();
    const VarSubset i = atom.index_set();
    std::vector<value_type> terms;
    for (VarSubset k : all_subsets(i)) {
      const VarSubset outside_k = k.complement(n_);
      std::vector<value_type> region_terms;
      region_terms.reserve(a.size());
      for (const auto& p : a) {
        const VarSubset l = p.index_set();
        region_terms.push_back(interaction_sorted(outside_k | l.complement(n_), l.singletons()));
      }
      value_type acted = sum_values(g, std::span<const value_type>(region_terms));
      if ((i.size() - k.size()) % 2 != 0) acted = g.negate(acted);
      terms.push_back(acted);
    }
    return sum_values(g, std::span<const value_type>(terms));
  }

  /// X_J.TC over the singletons of I: sum_i X_J.F(X_i) - X_J.F(X_I).
  value_type total_correlation(VarSubset j, VarSubset i) const {
    require_nonempty(i, "total correlation");
    std::vector<VarSubset> parts = i.singletons();
    return total_correlation_of_parts(j, parts);
  }

  /// X_J.DTC over the singletons of I: X_J.F(X_I) - sum_i X_{J u I\i}.F(X_i).
  value_type dual_total_correlation(VarSubset j, VarSubset i) const {
    require_nonempty(i, "dual total correlation");
    std::vector<VarSubset> parts = i.singletons();
    return dual_total_correlation_of_parts(j, parts);
  }

  /// TC over arbitrary disjoint blocks.
  value_type total_correlation_of_parts(VarSubset j, std::span<const VarSubset> parts) const {
    const group_type& g = values();
    VarSubset all;
    std::vector<value_type> terms;
    for (auto p : parts) {
      check_range(p);
      all |= p;
      terms.push_back(evaluate(j, p));
    }
    terms.push_back(g.negate(evaluate(j, all)));
    return sum_values(g, std::span<const value_type>(terms));
  }

  /// DTC over arbitrary disjoint blocks: Y.F(X_L) - sum_i (Y X_{L\L_i}).F(X_{L_i}).
  value_type dual_total_correlation_of_parts(VarSubset y, std::span<const VarSubset> parts) const {
    const group_type& g = values();
    VarSubset all;
    for (auto p : parts) {
      check_range(p);
      all |= p;
    }
    std::vector<value_type> terms{evaluate(y, all)};
    for (auto p : parts) terms.push_back(g.negate(evaluate(y | (all - p), p)));
    return sum_values(g, std::span<const value_type>(terms));
  }

  value_type o_information(VarSubset i, VarSubset j = {}) const {
    const group_type& g = values();
    return g.add(total_correlation(j, i), g.negate(dual_total_correlation(j, i)));
  }

  value_type s_information(VarSubset i, VarSubset j = {}) const {
    return values().add(total_correlation(j, i), dual_total_correlation(j, i));
  }

  /// X_A independent of X_B given X_C: C.F(X_A; X_B) = 0.
  bool is_independent(VarSubset a, VarSubset b, VarSubset c) const {
    return is_zero(conditioned_interaction(c, {a, b}));
  }

  /// Mutual independence of the blocks given X_Y, decided by the conditional
  /// DTC. With `verify`, the two atom-level characterizations must agree or
  /// VerificationError is thrown.
  bool is_mutually_independent(std::span<const VarSubset> parts, VarSubset y, bool verify = false) const {
    check_range(y);
    VarSubset seen;
    for (auto p : parts) {
      check_range(p);
      if (!p.disjoint(seen)) throw ArgumentError("mutual independence needs disjoint blocks, " + p.to_string() + " overlaps");
      seen |= p;
    }
    const bool via_dtc = is_zero(dual_total_correlation_of_parts(y, parts));
    if (verify) {
      const bool via_subfamilies = all_subfamily_terms_vanish(parts, y, seen);
      bool via_splits = true;
      for (auto p : parts) {
        if (!is_zero(conditioned_interaction(y, {p, seen - p}))) via_splits = false;
      }
      if (via_dtc != via_subfamilies || via_dtc != via_splits) {
        throw VerificationError("mutual independence characterizations disagree: dtc=" + std::to_string(via_dtc) +
                                " subfamilies=" + std::to_string(via_subfamilies) +
                                " splits=" + std::to_string(via_splits));
      }
    }
    return via_dtc;
  }

  /// Diagram test of the FCMI named by the partition.
  FcmiResult test_fcmi(const ConditionalPartition& partition, bool verify = false) const {
    if (partition.n() != n_) throw ArgumentError("partition and backend disagree on the number of variables");
    const AtomSet image = fcmi_image(partition);
    const Diagram<group_type>& d = diagram();
    FcmiResult result;
    for (const auto& a : image) {
      if (!is_zero(d.at(a))) result.violations.push_back(a);
    }
    result.holds = result.violations.empty();
    if (verify) {
      const auto& parts = partition.parts();
      const bool via_terms = all_subfamily_terms_vanish(parts, partition.conditioning(), partition.covered());
      const bool via_dtc = is_mutually_independent(parts, partition.conditioning(), false);
      if (via_terms != result.holds || via_dtc != result.holds) {
        throw VerificationError("FCMI characterizations disagree for " + partition.to_string());
      }
    }
    return result;
  }

  /// X_J.F(X_S) straight from the backend (no memo needed).
  value_type evaluate(VarSubset j, VarSubset s) const {
    check_range(j);
    check_range(s);
    return backend_->evaluate(j, s);
  }

  std::size_t memo_size() const {
    std::shared_lock lock(state_->memo_mutex);
    return state_->memo.size();
  }

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept {
      std::uint64_t h = 1469598103934665603ull;
      for (auto v : key) {
        h ^= v;
        h *= 1099511628211ull;
      }
      return static_cast<std::size_t>(h);
    }
  };

  struct State {
    mutable std::shared_mutex memo_mutex;
    std::unordered_map<std::vector<std::uint32_t>, value_type, KeyHash> memo;
    std::once_flag diagram_once;
    std::optional<Diagram<group_type>> diagram;
  };

  void check_range(VarSubset s) const {
    if (!s.fits(n_)) {
      throw ArgumentError("index set " + s.to_string() + " outside {1.." + std::to_string(n_) + "}");
    }
  }

  static void require_nonempty(VarSubset s, const char* what) {
    if (s.empty()) throw ArgumentError(std::string(what) + " needs a nonempty index set");
  }

  /// `parts` must be sorted ascending.
  value_type interaction_sorted(VarSubset j, std::vector<VarSubset> parts) const {
    if (parts.size() == 1) return backend_->evaluate(j, parts.front());

    std::vector<std::uint32_t> key;
    key.reserve(parts.size() + 1);
    key.push_back(j.bits());
    for (auto p : parts) key.push_back(p.bits());
    {
      std::shared_lock lock(state_->memo_mutex);
      auto it = state_->memo.find(key);
      if (it != state_->memo.end()) return it->second;
    }

    // F_q = F_{q-1} - X_{L_q}.F_{q-1}, peeling off the largest set.
    const VarSubset last = parts.back();
    parts.pop_back();
    const value_type lower = interaction_sorted(j, parts);
    const value_type conditioned = interaction_sorted(j | last, std::move(parts));
    const group_type& g = values();
    const value_type result = g.add(lower, g.negate(conditioned));

    std::unique_lock lock(state_->memo_mutex);
    state_->memo.emplace(std::move(key), result);
    return result;
  }

  bool all_subfamily_terms_vanish(std::span<const VarSubset> parts, VarSubset y, VarSubset all) const {
    const std::size_t q = parts.size();
    if (q > 20) throw SizeError("too many blocks for exhaustive verification");
    for (std::uint32_t chosen = 1; chosen < (std::uint32_t{1} << q); ++chosen) {
      if (std::popcount(chosen) < 2) continue;
      std::vector<VarSubset> selected;
      VarSubset l_chosen;
      for (std::size_t i = 0; i < q; ++i) {
        if ((chosen >> i) & 1u) {
          selected.push_back(parts[i]);
          l_chosen |= parts[i];
        }
      }
      if (!is_zero(conditioned_interaction(y | (all - l_chosen), selected))) return false;
    }
    return true;
  }

  int worker_count() const {
    int jobs = options_.jobs;
    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return jobs;
  }

  /// Runs body(k) for k in [0, count) on the configured workers. Each index
  /// writes its own slot, so the outcome does not depend on scheduling.
  template <class Body>
  void parallel_for(std::size_t count, Body body) const {
    const int jobs = std::min<std::size_t>(worker_count(), std::max<std::size_t>(count, 1));
    if (jobs <= 1) {
      for (std::size_t k = 0; k < count; ++k) body(k);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        const std::size_t k = next.fetch_add(1);
        if (k >= count) return;
        try {
          body(k);
        } catch (...) {
          std::lock_guard guard(failure_mutex);
          if (!failure) failure = std::current_exception();
          next.store(count);
          return;
        }
      }
    };
    std::vector<std::jthread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    threads.clear();
    if (failure) std::rethrow_exception(failure);
  }

  std::vector<value_type> moebius_table() const {
    const group_type& g = values();
    const std::size_t size = std::size_t{1} << n_;
    const std::uint32_t full = VarSubset::full(n_).bits();
    // joint[S] = F(X_S)
    std::vector<value_type> joint(size, g.zero());
    parallel_for(size - 1, [&](std::size_t k) {
      const std::uint32_t s = static_cast<std::uint32_t>(k + 1);
      joint[s] = backend_->evaluate(VarSubset{}, VarSubset(s));
    });
    // h[T] = F(X_[n]) - F(X_{[n]\T}) is the measure of the atoms inside T.
    std::vector<value_type> h(size, g.zero());
    for (std::uint32_t t = 1; t < size; ++t) h[t] = g.add(joint[full], g.negate(joint[full & ~t]));
    // Inverse zeta transform over the subset lattice.
    for (int bit = 0; bit < n_; ++bit) {
      const std::uint32_t mask = std::uint32_t{1} << bit;
      for (std::uint32_t t = 1; t < size; ++t) {
        if (t & mask) h[t] = g.add(h[t], g.negate(h[t ^ mask]));
      }
    }
    return std::vector<value_type>(h.begin() + 1, h.end());
  }

  std::vector<value_type> recursive_table() const {
    const std::size_t count = (std::size_t{1} << n_) - 1;
    std::vector<value_type> table(count, values().zero());
    parallel_for(count, [&](std::size_t k) {
      table[k] = atom_value(Atom(VarSubset(static_cast<std::uint32_t>(k + 1))));
    });
    return table;
  }

  const B* backend_;
  BuildOptions options_;
  int n_;
  std::unique_ptr<State> state_;
};

// Free-function forms; each builds a throwaway engine.

template <InformationBackend B>
typename B::group_type::value_type conditioned_interaction(const B& backend, VarSubset j,
                                                           std::span<const VarSubset> parts) {
  return InteractionEngine<B>(backend).conditioned_interaction(j, parts);
}

template <InformationBackend B>
typename B::group_type::value_type atom_value(const B& backend, const Atom& atom) {
  return InteractionEngine<B>(backend).atom_value(atom);
}

template <InformationBackend B>
Diagram<typename B::group_type> build_diagram(const B& backend, BuildOptions options = {}) {
  return InteractionEngine<B>(backend, options).build_diagram();
}

}  // namespace infodiag
