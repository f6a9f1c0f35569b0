#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "infodiag/var_subset.hpp"

namespace infodiag {

using Edge = std::pair<int, int>;

/// Simple undirected graph on vertices {1..n}.
class Graph {
 public:
  /// Edges are normalized to (min, max), sorted and deduplicated.
  /// Throws ArgumentError on loops or out-of-range vertices.
  Graph(int n, std::vector<Edge> edges);

  static Graph edgeless(int n);
  static Graph complete(int n);
  /// 1 - 2 - ... - n
  static Graph path(int n);
  static Graph star(int n, int center);

  int n() const { return n_; }
  VarSubset vertices() const { return VarSubset::full(n_); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool adjacent(int a, int b) const { return neighbors_[a - 1].contains(b); }
  VarSubset neighbors(int v) const { return neighbors_[v - 1]; }
  std::string to_string() const;
  friend bool operator==(const Graph& a, const Graph& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::vector<VarSubset> neighbors_;
};

/// Components of G - U, ordered by smallest vertex.
std::vector<VarSubset> components(const Graph& g, VarSubset removed);
/// G - U has at least two components.
bool is_cutset(const Graph& g, VarSubset u);
/// Every walk from A to B meets C. A, B, C must be pairwise disjoint.
bool separates(const Graph& g, VarSubset a, VarSubset b, VarSubset c);
/// Induced subgraph on W is connected (W nonempty).
bool is_connected_set(const Graph& g, VarSubset w);

/// Atoms p_W whose vertex set W is disconnected in G - (V \ W).
AtomSet disconnected_atoms(const Graph& g);

/// Boundary B = { i in I : I \ i is connected } of a connected atom with |I| >= 2.
/// Throws ArgumentError when I is too small or disconnected.
VarSubset connected_atom_boundary(const Graph& g, const Atom& atom);

struct MarginalGraph {
  /// Graph on {1..|V'|}; vertex k stands for vertices[k-1] of the original.
  Graph graph;
  std::vector<int> vertices;
};

/// Edge {i, j} for i, j in V' iff some walk joins them with all inner vertices outside V'.
MarginalGraph marginalize_graph(const Graph& g, VarSubset kept);

/// (A, B, C) -> "X_A independent of X_B given X_C".
using IndependenceOracle = std::function<bool(VarSubset, VarSubset, VarSubset)>;

enum class MarkovMode { Global, Cutset };

/// Global mode: separation implies independence for all disjoint (A, B, C)
/// with A, B nonempty (n <= 8). Cutset mode: for every cutset U, each
/// component is independent of the remaining ones given U.
bool test_mrf_oracle(const Graph& g, const IndependenceOracle& oracle, MarkovMode mode);

inline constexpr int kMaxGlobalMarkovVertices = 8;

}  // namespace infodiag
