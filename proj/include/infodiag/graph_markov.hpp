#pragma once

#include <optional>
#include <string>
#include <vector>

#include "infodiag/diagram.hpp"
#include "infodiag/errors.hpp"
#include "infodiag/graph.hpp"
#include "infodiag/interaction.hpp"

namespace infodiag {

struct AtomTest {
  bool holds = false;
  /// Atoms that should vanish but do not, ascending.
  AtomSet violations;
};

/// MRF test: every disconnected atom of G has zero value.
template <ValueGroup G>
AtomTest test_mrf_diagram(const Diagram<G>& diagram, const Graph& graph) {
  if (diagram.n() != graph.n()) throw ArgumentError("diagram and graph disagree on the number of variables");
  AtomTest result;
  result.violations = diagram.nonzero_among(disconnected_atoms(graph));
  result.holds = result.violations.empty();
  return result;
}

/// Markov chain test: every atom whose index set is not an interval vanishes.
template <ValueGroup G>
AtomTest test_markov_chain(const Diagram<G>& diagram) {
  AtomSet non_intervals;
  for (const auto& a : enumerate_atoms(diagram.n(), kHardMaxVariables)) {
    if (!a.index_set().is_interval()) non_intervals.push_back(a);
  }
  AtomTest result;
  result.violations = diagram.nonzero_among(non_intervals);
  result.holds = result.violations.empty();
  return result;
}

/// X_J.F(X_{i_1}; X_{i_q}) standing in for X_J.F(X_{i_1}; ...; X_{i_q}) on a
/// chain. Throws PreconditionError when the diagram is not a chain, and with
/// `verify` VerificationError when the two terms differ.
template <InformationBackend B>
typename B::group_type::value_type interval_collapse(const InteractionEngine<B>& engine, VarSubset j,
                                                     const std::vector<int>& indices, bool verify = false) {
  if (indices.size() < 2) throw ArgumentError("interval collapse needs at least two indices");
  for (std::size_t k = 1; k < indices.size(); ++k) {
    if (indices[k - 1] >= indices[k]) throw ArgumentError("indices must be strictly increasing");
  }
  const auto chain = test_markov_chain(engine.diagram());
  if (!chain.holds) {
    throw PreconditionError("diagram is not a Markov chain; first violating atom " + chain.violations.front().to_string());
  }
  const VarSubset first = VarSubset::singleton(indices.front());
  const VarSubset last = VarSubset::singleton(indices.back());
  const auto collapsed = engine.conditioned_interaction(j, {first, last});
  if (verify) {
    std::vector<VarSubset> all;
    for (int i : indices) all.push_back(VarSubset::singleton(i));
    const auto full = engine.conditioned_interaction(j, all);
    const auto& g = engine.values();
    if (!engine.is_zero(g.add(full, g.negate(collapsed)))) {
      throw VerificationError("interval collapse disagrees with the full term");
    }
  }
  return collapsed;
}

struct CandidateGraph {
  Graph graph;
  /// Whether the diagram passes the MRF test for the candidate.
  bool is_representation = false;
  /// Set when every atom vanishes, so no graph is singled out.
  std::optional<std::string> warning;
};

/// Edge {i, j} exactly where the pair atom p_ij is nonzero.
template <ValueGroup G>
CandidateGraph candidate_smallest_graph(const Diagram<G>& diagram) {
  const int n = diagram.n();
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      if (!diagram.is_zero_at(Atom{a, b})) edges.emplace_back(a, b);
    }
  }
  CandidateGraph out{Graph(n, std::move(edges)), false, std::nullopt};
  out.is_representation = test_mrf_diagram(diagram, out.graph).holds;
  bool all_zero = true;
  for (const auto& v : diagram.values()) all_zero = all_zero && diagram.is_zero(v);
  if (all_zero) out.warning = "diagram vanishes identically; the graph is not determined by it";
  return out;
}

/// X_{V\I}.F(;_{i in B} X_i) for the boundary B of a connected atom. With
/// `verify`, asserts it equals the atom value (requires an MRF for G).
template <InformationBackend B>
typename B::group_type::value_type connected_atom_value(const InteractionEngine<B>& engine, const Graph& graph,
                                                        const Atom& atom, bool verify = false) {
  if (graph.n() != engine.n()) throw ArgumentError("graph and backend disagree on the number of variables");
  const VarSubset boundary = connected_atom_boundary(graph, atom);
  const VarSubset outside = atom.index_set().complement(engine.n());
  const auto value = engine.conditioned_interaction(outside, boundary.singletons());
  if (verify) {
    if (!test_mrf_diagram(engine.diagram(), graph).holds) {
      throw PreconditionError("diagram is not an MRF for " + graph.to_string());
    }
    const auto& g = engine.values();
    if (!engine.is_zero(g.add(engine.atom_value(atom), g.negate(value)))) {
      throw VerificationError("boundary rewrite of " + atom.to_string() + " disagrees with the atom value");
    }
  }
  return value;
}

}  // namespace infodiag
