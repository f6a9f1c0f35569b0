#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "infodiag/graph.hpp"
#include "infodiag/graph_markov.hpp"
#include "infodiag/slice_backend.hpp"

using namespace infodiag;
using testsupport::Rng;

namespace {

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

IndependenceOracle factorization(const DiscreteSystem& system) {
  return [&system](VarSubset a, VarSubset b, VarSubset c) { return p_independent(system, 0, a, b, c); };
}

}  // namespace

TEST_CASE("graph construction") {
  const Graph g(3, {{2, 1}, {1, 2}, {3, 2}});
  CHECK(g.edges() == std::vector<Edge>{{1, 2}, {2, 3}});
  CHECK(g == Graph::path(3));
  CHECK(g.adjacent(2, 1));
  CHECK(g.neighbors(2) == VarSubset{1, 3});
  CHECK_THROWS_AS(Graph(3, {{1, 1}}), ArgumentError);
  CHECK_THROWS_AS(Graph(3, {{1, 4}}), ArgumentError);
  CHECK(Graph::complete(4).edges().size() == 6);
  CHECK(Graph::star(4, 2).edges() == std::vector<Edge>{{1, 2}, {2, 3}, {2, 4}});
}

TEST_CASE("components and separation") {
  const auto path = Graph::path(3);
  CHECK(components(path, VarSubset{2}) == std::vector<VarSubset>{VarSubset{1}, VarSubset{3}});
  CHECK(components(Graph::complete(3), {}) == std::vector<VarSubset>{VarSubset{1, 2, 3}});
  CHECK(components(Graph::edgeless(3), {}) == std::vector<VarSubset>{VarSubset{1}, VarSubset{2}, VarSubset{3}});
  CHECK(is_cutset(path, VarSubset{2}));
  CHECK_FALSE(is_cutset(path, VarSubset{1}));
  CHECK(separates(path, VarSubset{1}, VarSubset{3}, VarSubset{2}));
  CHECK_FALSE(separates(path, VarSubset{1}, VarSubset{3}, {}));
  CHECK(separates(path, {}, VarSubset{3}, {}));
  CHECK_THROWS_AS(separates(path, VarSubset{1}, VarSubset{1}, {}), ArgumentError);
  CHECK(is_connected_set(path, VarSubset{1, 2}));
  CHECK_FALSE(is_connected_set(path, VarSubset{1, 3}));
}

TEST_CASE("disconnected atoms") {
  CHECK(disconnected_atoms(Graph::path(3)) == AtomSet{Atom{1, 3}});
  CHECK(disconnected_atoms(Graph::complete(3)).empty());
  CHECK(disconnected_atoms(Graph::edgeless(2)) == AtomSet{Atom{1, 2}});
  // A disconnected atom is exactly a non-interval on the path.
  for (const auto& a : enumerate_atoms(5)) {
    CHECK(contains(disconnected_atoms(Graph::path(5)), a) == !a.index_set().is_interval());
  }
}

TEST_CASE("diagram tests on small systems") {
  Rng rng(71);
  const auto chain = testsupport::random_chain(rng, {2, 3, 2});
  const auto d = build_diagram(SliceBackend(chain, Functional::Entropy));
  CHECK(test_mrf_diagram(d, Graph::path(3)).holds);
  CHECK(test_markov_chain(d).holds);

  const auto x = build_diagram(SliceBackend(testsupport::xor_triple(), Functional::Entropy));
  const auto edgeless = test_mrf_diagram(x, Graph::edgeless(3));
  CHECK_FALSE(edgeless.holds);
  CHECK(edgeless.violations == AtomSet{Atom{1, 2}, Atom{1, 3}, Atom{2, 3}, Atom{1, 2, 3}});
  CHECK(test_mrf_diagram(x, Graph::complete(3)).holds);
  const auto chain_test = test_markov_chain(x);
  CHECK_FALSE(chain_test.holds);
  CHECK(chain_test.violations == AtomSet{Atom{1, 3}});
  CHECK_THROWS_AS(test_mrf_diagram(x, Graph::path(4)), ArgumentError);

  const auto four = build_diagram(SliceBackend(testsupport::random_chain(rng, {4, 4, 4, 4}), Functional::Entropy));
  CHECK(test_markov_chain(four).holds);
  // Two variables: every index set is an interval.
  CHECK(test_markov_chain(build_diagram(SliceBackend(testsupport::duplicated_bit(), Functional::Entropy))).holds);
}

TEST_CASE("oracle examples") {
  Rng rng(73);
  const auto chain = testsupport::random_chain(rng, {3, 2, 3});
  for (auto mode : {MarkovMode::Global, MarkovMode::Cutset}) {
    CHECK(test_mrf_oracle(Graph::path(3), factorization(chain), mode));
    const auto x = testsupport::xor_triple();
    CHECK_FALSE(test_mrf_oracle(Graph::path(3), factorization(x), mode));
    const auto bits = testsupport::independent_bits(3);
    CHECK(test_mrf_oracle(Graph::edgeless(3), factorization(bits), mode));
  }
  CHECK_THROWS_AS(test_mrf_oracle(Graph::path(9), factorization(chain), MarkovMode::Global), SizeError);
}

TEST_CASE("diagram, global and cutset tests agree") {
  Rng rng(79);
  int positives = 0;
  int negatives = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const auto counts = testsupport::random_label_counts(rng, n, 2);
    const auto true_graph = testsupport::random_graph(rng, n, 0.5);
    const auto sys = trial % 4 == 0 ? testsupport::random_system(rng, counts, false, 0.3)
                                    : testsupport::gibbs_system(rng, true_graph, counts, false);
    SliceBackend backend(sys, Functional::Entropy);
    InteractionEngine engine(backend);
    const IndependenceOracle via_engine = [&](VarSubset a, VarSubset b, VarSubset c) {
      return engine.is_independent(a, b, c);
    };
    for (int k = 0; k < 3; ++k) {
      const auto g = k == 0 ? true_graph : testsupport::random_graph(rng, n, 0.5);
      const bool diagram = test_mrf_diagram(engine.diagram(), g).holds;
      CHECK(diagram == test_mrf_oracle(g, factorization(sys), MarkovMode::Global));
      CHECK(diagram == test_mrf_oracle(g, factorization(sys), MarkovMode::Cutset));
      CHECK(diagram == test_mrf_oracle(g, via_engine, MarkovMode::Global));
      (diagram ? positives : negatives) += 1;
    }
  }
  CHECK(positives > 0);
  CHECK(negatives > 0);
}

TEST_CASE("interval collapse") {
  Rng rng(83);
  SliceBackend backend(testsupport::random_chain(rng, {2, 3, 2, 2}), Functional::Entropy);
  InteractionEngine engine(backend);
  const double collapsed = interval_collapse(engine, {}, {1, 2, 4}, true);
  CHECK(near(collapsed, engine.conditioned_interaction({}, {VarSubset{1}, VarSubset{4}})));
  CHECK(interval_collapse(engine, {}, {2, 3}) == engine.conditioned_interaction({}, {VarSubset{2}, VarSubset{3}}));

  SliceBackend three(testsupport::random_chain(rng, {2, 2, 2}), Functional::Entropy);
  InteractionEngine e3(three);
  CHECK(near(interval_collapse(e3, {}, {1, 2, 3}, true), e3.conditioned_interaction({}, {VarSubset{1}, VarSubset{3}})));

  SliceBackend x(testsupport::xor_triple(), Functional::Entropy);
  InteractionEngine ex(x);
  CHECK_THROWS_AS(interval_collapse(ex, {}, {1, 2, 3}), PreconditionError);
  CHECK_THROWS_AS(interval_collapse(engine, {}, {2, 1}), ArgumentError);
}

TEST_CASE("graph marginalization") {
  const auto m = marginalize_graph(Graph::path(5), VarSubset{1, 3, 5});
  CHECK(m.graph == Graph::path(3));
  CHECK(m.vertices == std::vector<int>{1, 3, 5});
  const Graph g(5, {{1, 2}, {2, 3}, {4, 5}});
  CHECK(marginalize_graph(g, VarSubset::full(5)).graph == g);
  CHECK(marginalize_graph(g, VarSubset{1, 4}).graph == Graph::edgeless(2));
  // The star collapses to a complete graph on its leaves.
  CHECK(marginalize_graph(Graph::star(4, 1), VarSubset{2, 3, 4}).graph == Graph::complete(3));
}

TEST_CASE("marginal systems stay Markov for the marginal graph") {
  Rng rng(89);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 2);
    const auto g = testsupport::random_graph(rng, n, 0.4);
    const auto sys = testsupport::gibbs_system(rng, g, testsupport::random_label_counts(rng, n, 2), false);
    VarSubset kept;
    for (int i = 1; i <= n; ++i) {
      if (rng() % 3 != 0) kept |= VarSubset::singleton(i);
    }
    if (kept.size() < 2) continue;
    const auto mg = marginalize_graph(g, kept);
    // Relabel: vertex k of the marginal graph is mg.vertices[k-1] of the system.
    const auto lift = [&](VarSubset s) {
      VarSubset out;
      for (int k : s.indices()) out |= VarSubset::singleton(mg.vertices[k - 1]);
      return out;
    };
    CHECK(test_mrf_oracle(
        mg.graph, [&](VarSubset a, VarSubset b, VarSubset c) { return p_independent(sys, 0, lift(a), lift(b), lift(c)); },
        MarkovMode::Global));
  }
}

TEST_CASE("smallest graph candidates") {
  Rng rng(97);
  const std::vector<std::vector<double>> t{{0.8, 0.2}, {0.3, 0.7}};
  const auto chain = build_markov_chain({2, 2, 2}, {0.6, 0.4}, {t, t});
  const auto c = candidate_smallest_graph(build_diagram(SliceBackend(chain, Functional::Entropy)));
  CHECK(c.graph == Graph::path(3));
  CHECK(c.is_representation);
  CHECK_FALSE(c.warning);

  const auto ind = candidate_smallest_graph(build_diagram(SliceBackend(testsupport::independent_bits(3), Functional::Entropy)));
  CHECK(ind.graph == Graph::edgeless(3));
  CHECK(ind.is_representation);

  const auto x = candidate_smallest_graph(build_diagram(SliceBackend(testsupport::xor_triple(), Functional::Entropy)));
  CHECK(x.graph == Graph::complete(3));

  for (int trial = 0; trial < 10; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 3);
    const auto tree = testsupport::random_tree(rng, n);
    const auto sys = testsupport::gibbs_system(rng, tree, testsupport::random_label_counts(rng, n, 3), false);
    const auto found = candidate_smallest_graph(build_diagram(SliceBackend(sys, Functional::Entropy)));
    CHECK(found.graph == tree);
    CHECK(found.is_representation);
  }

  const auto sys = testsupport::independent_bits(2);
  const DiscreteSystem same(sys.variables(), sys.outcomes(), {sys.distribution(0), sys.distribution(0)});
  const auto flat = candidate_smallest_graph(build_diagram(SliceBackend(same, Functional::KullbackLeibler)));
  CHECK(flat.warning.has_value());
}

TEST_CASE("connected atom boundaries") {
  CHECK(connected_atom_boundary(Graph::path(3), Atom{1, 2, 3}) == VarSubset{1, 3});
  CHECK(connected_atom_boundary(Graph::path(3), Atom{1, 2}) == VarSubset{1, 2});
  CHECK(connected_atom_boundary(Graph::star(5, 3), Atom{1, 2, 3, 4, 5}) == VarSubset{1, 2, 4, 5});
  CHECK_THROWS_AS(connected_atom_boundary(Graph::path(3), Atom{1, 3}), ArgumentError);
  CHECK_THROWS_AS(connected_atom_boundary(Graph::path(3), Atom{2}), ArgumentError);

  Rng rng(101);
  SliceBackend chain(testsupport::random_chain(rng, {2, 3, 2}), Functional::Entropy);
  InteractionEngine e(chain);
  const double v = connected_atom_value(e, Graph::path(3), Atom{1, 2, 3}, true);
  CHECK(near(v, e.atom_value(Atom{1, 2, 3}), 1e-10));
  CHECK(near(v, interval_collapse(e, {}, {1, 2, 3}), 1e-10));
}

TEST_CASE("connected atom values match on random graph models") {
  Rng rng(103);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const auto g = testsupport::random_graph(rng, n, 0.6);
    const auto sys = testsupport::gibbs_system(rng, g, testsupport::random_label_counts(rng, n, 2), true);
    for (auto f : {Functional::Entropy, Functional::KullbackLeibler}) {
      SliceBackend backend(sys, f);
      InteractionEngine e(backend);
      for (const auto& a : enumerate_atoms(n)) {
        if (a.index_set().size() < 2 || !is_connected_set(g, a.index_set())) continue;
        CHECK_NOTHROW(connected_atom_value(e, g, a, true));
      }
    }
  }
}
