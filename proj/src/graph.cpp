#include "infodiag/graph.hpp"

#include <algorithm>

#include "infodiag/errors.hpp"

namespace infodiag {

Graph::Graph(int n, std::vector<Edge> edges) : n_(n), neighbors_(n) {
  check_variable_count(n_, kHardMaxVariables);
  for (auto& [a, b] : edges) {
    if (a < 1 || a > n_ || b < 1 || b > n_) {
      throw ArgumentError("edge {" + std::to_string(a) + "," + std::to_string(b) + "} outside 1.." + std::to_string(n_));
    }
    if (a == b) throw ArgumentError("loop at vertex " + std::to_string(a));
    if (a > b) std::swap(a, b);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);
  for (auto [a, b] : edges_) {
    neighbors_[a - 1] |= VarSubset::singleton(b);
    neighbors_[b - 1] |= VarSubset::singleton(a);
  }
}

Graph Graph::edgeless(int n) { return Graph(n, {}); }

Graph Graph::complete(int n) {
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) edges.emplace_back(a, b);
  }
  return Graph(n, std::move(edges));
}

Graph Graph::path(int n) {
  std::vector<Edge> edges;
  for (int a = 1; a < n; ++a) edges.emplace_back(a, a + 1);
  return Graph(n, std::move(edges));
}

Graph Graph::star(int n, int center) {
  std::vector<Edge> edges;
  for (int a = 1; a <= n; ++a) {
    if (a != center) edges.emplace_back(center, a);
  }
  return Graph(n, std::move(edges));
}

std::string Graph::to_string() const {
  std::string out = "n=" + std::to_string(n_) + " edges={";
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    if (k > 0) out += ',';
    out += std::to_string(edges_[k].first) + "-" + std::to_string(edges_[k].second);
  }
  return out + "}";
}

namespace {

VarSubset reach(const Graph& g, VarSubset start, VarSubset allowed) {
  VarSubset seen = start & allowed;
  VarSubset frontier = seen;
  while (!frontier.empty()) {
    VarSubset next;
    for (int v : frontier.indices()) next |= g.neighbors(v);
    next = (next & allowed) - seen;
    seen |= next;
    frontier = next;
  }
  return seen;
}

void check_vertex_set(const Graph& g, VarSubset s) {
  if (!s.fits(g.n())) throw ArgumentError("vertex set " + s.to_string() + " outside the graph");
}

}  // namespace

std::vector<VarSubset> components(const Graph& g, VarSubset removed) {
  check_vertex_set(g, removed);
  VarSubset left = g.vertices() - removed;
  std::vector<VarSubset> out;
  while (!left.empty()) {
    const VarSubset comp = reach(g, VarSubset::singleton(left.min_index()), left);
    out.push_back(comp);
    left = left - comp;
  }
  return out;
}

bool is_cutset(const Graph& g, VarSubset u) { return components(g, u).size() >= 2; }

bool separates(const Graph& g, VarSubset a, VarSubset b, VarSubset c) {
  check_vertex_set(g, a | b | c);
  if (!a.disjoint(b) || !a.disjoint(c) || !b.disjoint(c)) {
    throw ArgumentError("separation needs pairwise disjoint vertex sets");
  }
  return reach(g, a, g.vertices() - c).disjoint(b);
}

bool is_connected_set(const Graph& g, VarSubset w) {
  check_vertex_set(g, w);
  if (w.empty()) return false;
  return reach(g, VarSubset::singleton(w.min_index()), w) == w;
}

AtomSet disconnected_atoms(const Graph& g) {
  AtomSet out;
  for (VarSubset w : nonempty_subsets(g.vertices())) {
    if (!is_connected_set(g, w)) out.emplace_back(w);
  }
  return out;
}

VarSubset connected_atom_boundary(const Graph& g, const Atom& atom) {
  const VarSubset i = atom.index_set();
  check_vertex_set(g, i);
  if (i.size() < 2) throw ArgumentError("boundary needs an atom with at least two indices");
  if (!is_connected_set(g, i)) throw ArgumentError(atom.to_string() + " is disconnected");
  VarSubset boundary;
  for (int v : i.indices()) {
    if (is_connected_set(g, i.without(v))) boundary |= VarSubset::singleton(v);
  }
  return boundary;
}

MarginalGraph marginalize_graph(const Graph& g, VarSubset kept) {
  check_vertex_set(g, kept);
  if (kept.empty()) throw ArgumentError("marginal graph needs at least one vertex");
  const std::vector<int> vertices = kept.indices();
  const VarSubset hidden = g.vertices() - kept;
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < vertices.size(); ++a) {
    // Vertices reachable from vertices[a] through hidden ones, plus one final step.
    const VarSubset through = reach(g, g.neighbors(vertices[a]) & hidden, hidden);
    VarSubset touched = g.neighbors(vertices[a]);
    for (int h : through.indices()) touched |= g.neighbors(h);
    for (std::size_t b = a + 1; b < vertices.size(); ++b) {
      if (touched.contains(vertices[b])) edges.emplace_back(static_cast<int>(a + 1), static_cast<int>(b + 1));
    }
  }
  return MarginalGraph{Graph(static_cast<int>(vertices.size()), std::move(edges)), vertices};
}

bool test_mrf_oracle(const Graph& g, const IndependenceOracle& oracle, MarkovMode mode) {
  const int n = g.n();
  if (mode == MarkovMode::Cutset) {
    for (VarSubset u : all_subsets(g.vertices())) {
      const auto comps = components(g, u);
      if (comps.size() < 2) continue;
      const VarSubset rest_all = g.vertices() - u;
      for (auto comp : comps) {
        if (!oracle(comp, rest_all - comp, u)) return false;
      }
    }
    return true;
  }
  if (n > kMaxGlobalMarkovVertices) {
    throw SizeError("global Markov enumeration is limited to " + std::to_string(kMaxGlobalMarkovVertices) + " vertices");
  }
  // Each vertex goes to A, B, C or nowhere.
  std::uint32_t total = 1;
  for (int k = 0; k < n; ++k) total *= 4;
  for (std::uint32_t code = 0; code < total; ++code) {
    VarSubset sets[4];
    std::uint32_t c = code;
    for (int v = 1; v <= n; ++v) {
      sets[c % 4] |= VarSubset::singleton(v);
      c /= 4;
    }
    const VarSubset a = sets[0], b = sets[1], cond = sets[2];
    if (a.empty() || b.empty()) continue;
    if (separates(g, a, b, cond) && !oracle(a, b, cond)) return false;
  }
  return true;
}

}  // namespace infodiag
