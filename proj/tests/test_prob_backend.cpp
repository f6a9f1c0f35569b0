#include <doctest.h>

#include <cmath>

#include "generators.hpp"
#include "infodiag/discrete_system.hpp"
#include "infodiag/graph_markov.hpp"
#include "infodiag/interaction.hpp"
#include "infodiag/slice_backend.hpp"
#include "infodiag/stability.hpp"
#include "oracles.hpp"

using namespace infodiag;
using testsupport::Rng;

namespace {

bool near(double a, double b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

DiscreteSystem one_bit(std::vector<double> p, std::vector<double> q = {}) {
  std::vector<std::vector<double>> d{std::move(p)};
  if (!q.empty()) d.push_back(std::move(q));
  return DiscreteSystem({{"X1", {"0", "1"}}}, {{0}, {1}}, std::move(d));
}

const std::vector<std::vector<double>> kFlip{{0.9, 0.1}, {0.1, 0.9}};

}  // namespace

TEST_CASE("system validation") {
  CHECK_THROWS_AS(one_bit({0.5, 0.6}), ArgumentError);
  CHECK_THROWS_AS(one_bit({-0.1, 1.1}), ArgumentError);
  CHECK_THROWS_AS(one_bit({0.5, 0.5}, {1.0, 0.0}), DomainError);
  CHECK_NOTHROW(one_bit({1.0, 0.0}, {0.5, 0.5}));
  CHECK_THROWS_AS(DiscreteSystem({{"X1", {"a", "a"}}}, {{0}, {1}}, {{0.5, 0.5}}), ArgumentError);
  CHECK_THROWS_AS(DiscreteSystem({{"X1", {"a", "b"}}}, {{0}, {2}}, {{0.5, 0.5}}), ArgumentError);
  CHECK_THROWS_AS(DiscreteSystem({{"X1", {"a", "b"}}}, {{0}, {1}}, {}), ArgumentError);
  // Within the normalization tolerance the vector is rescaled.
  const auto tiny = one_bit({0.5, 0.5 + 5e-13});
  CHECK(near(tiny.distribution(0)[0] + tiny.distribution(0)[1], 1.0, 1e-15));
}

TEST_CASE("marginals") {
  const auto bit = one_bit({0.5, 0.5});
  const auto m = marginal(bit, 0, VarSubset{1});
  CHECK(m.table.at({0}) == 0.5);
  CHECK(m.table.at({1}) == 0.5);

  const auto x = testsupport::xor_triple();
  const auto m3 = marginal(x, 0, VarSubset{3});
  CHECK(near(m3.table.at({0}), 0.5));
  CHECK(near(m3.table.at({1}), 0.5));

  const auto empty = marginal(x, 0, {});
  REQUIRE(empty.table.size() == 1);
  CHECK(near(empty.table.at({}), 1.0));
}

TEST_CASE("conditioning") {
  const auto x = testsupport::xor_triple();
  const auto given = condition(x, VarSubset{3}, {0});
  CHECK(given.outcome_count() == x.outcome_count());
  const auto m12 = marginal(given, 0, VarSubset{1, 2});
  CHECK(near(m12.table.at({0, 0}), 0.5));
  CHECK(near(m12.table.at({1, 1}), 0.5));
  CHECK(near(m12.table.at({0, 1}), 0.0));
  CHECK(near(entropy_value(given, {}, VarSubset{1}), 1.0));
  CHECK(near(entropy_value(given, VarSubset{2}, VarSubset{1}), 0.0));

  const auto same = condition(x, {}, {});
  CHECK(same.distribution(0) == x.distribution(0));

  const auto point = condition(one_bit({0.5, 0.5}), VarSubset{1}, {0});
  CHECK(point.distribution(0) == std::vector<double>{1.0, 0.0});

  CHECK_THROWS_AS(condition(one_bit({1.0, 0.0}), VarSubset{1}, {1}), ConditioningError);
  CHECK_THROWS_AS(condition(x, VarSubset{3}, {0, 1}), ArgumentError);
  CHECK(condition_on_labels(x, VarSubset{3}, {"1"}).distribution(0) == condition(x, VarSubset{3}, {1}).distribution(0));
  CHECK_THROWS_AS(condition_on_labels(x, VarSubset{3}, {"7"}), ArgumentError);
}

TEST_CASE("entropy, divergence and cross-entropy examples") {
  CHECK(entropy_value(one_bit({0.5, 0.5}), {}, VarSubset{1}) == 1.0);
  CHECK(near(entropy_value(testsupport::xor_triple(), VarSubset{2, 3}, VarSubset{1}), 0.0));
  const DiscreteSystem four({{"X1", {"a", "b", "c", "d"}}}, {{0}, {1}, {2}, {3}}, {{0.25, 0.25, 0.25, 0.25}});
  CHECK(entropy_value(four, {}, VarSubset{1}) == 2.0);
  CHECK(near(entropy_value(four, {}, VarSubset{1}, LogBase::E), std::log(4.0)));

  const auto pq = one_bit({1.0, 0.0}, {0.5, 0.5});
  CHECK(kl_value(pq, {}, VarSubset{1}) == 1.0);
  CHECK(ce_value(pq, {}, VarSubset{1}) == 1.0);
  CHECK(entropy_value(pq, {}, VarSubset{1}) == 0.0);

  const auto same = one_bit({0.3, 0.7}, {0.3, 0.7});
  CHECK(kl_value(same, {}, VarSubset{1}) == 0.0);

  CHECK_THROWS_AS(SliceBackend(testsupport::xor_triple(), Functional::KullbackLeibler), ArgumentError);
  CHECK(parse_functional("ce") == Functional::CrossEntropy);
  CHECK_THROWS_AS(parse_functional("tsallis"), ArgumentError);
}

TEST_CASE("slice values match the chain-rule oracle") {
  Rng rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto sys = testsupport::random_system(rng, testsupport::random_label_counts(rng, n, 3), true, 0.25);
    const auto q = testsupport::random_query(rng, n, 1);
    for (auto f : {Functional::Entropy, Functional::KullbackLeibler, Functional::CrossEntropy}) {
      SliceBackend backend(sys, f);
      CHECK(near(backend.evaluate(q.conditioning, q.parts[0]),
                 testsupport::oracle_conditioned(sys, f, q.conditioning, q.parts[0]), 1e-10));
    }
    // Conditioning on a superset gives exactly zero.
    SliceBackend h(sys, Functional::Entropy);
    CHECK(h.evaluate(q.conditioning | q.parts[0], q.parts[0]) == 0.0);
  }
}

TEST_CASE("cross-entropy splits into entropy and divergence") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 3);
    const auto sys = testsupport::random_system(rng, testsupport::random_label_counts(rng, n, 3), true, 0.2);
    const auto q = testsupport::random_query(rng, n, 1);
    const double ce = ce_value(sys, q.conditioning, q.parts[0]);
    CHECK(near(ce, entropy_value(sys, q.conditioning, q.parts[0]) + kl_value(sys, q.conditioning, q.parts[0]), 1e-10));
    CHECK(kl_value(sys, q.conditioning, q.parts[0]) >= -1e-12);
  }
}

TEST_CASE("factorization oracle") {
  const auto bits = testsupport::independent_bits(3);
  CHECK(p_independent(bits, 0, VarSubset{1}, VarSubset{2}, {}));
  CHECK(p_independent(bits, 0, VarSubset{1}, VarSubset{2, 3}, {}));
  const auto x = testsupport::xor_triple();
  CHECK_FALSE(p_independent(x, 0, VarSubset{1}, VarSubset{2}, VarSubset{3}));
  CHECK(p_independent(x, 0, VarSubset{1}, VarSubset{2}, {}));
  CHECK(p_independent(x, 0, VarSubset{1}, VarSubset{2}, VarSubset{1, 3}));
}

TEST_CASE("entropy-slice independence coincides with the factorization oracle") {
  Rng rng(41);
  int independent_cases = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const auto counts = testsupport::random_label_counts(rng, n, 3);
    const auto sys = trial % 3 == 0   ? testsupport::random_system(rng, counts, false, 0.3)
                     : trial % 3 == 1 ? testsupport::gibbs_system(rng, testsupport::random_graph(rng, n, 0.5), counts, false)
                                      : testsupport::random_chain(rng, counts);
    SliceBackend backend(sys, Functional::Entropy);
    InteractionEngine engine(backend);
    for (int k = 0; k < 10; ++k) {
      auto q = testsupport::random_query(rng, n, 2);
      if (q.parts.size() < 2) continue;
      const bool via_diagram = engine.is_independent(q.parts[0], q.parts[1], q.conditioning);
      CHECK(via_diagram == p_independent(sys, 0, q.parts[0], q.parts[1], q.conditioning));
      independent_cases += via_diagram;
    }
  }
  CHECK(independent_cases > 0);
}

TEST_CASE("probabilistic independence is a separoid on arbitrary systems") {
  // Entropy-slice independence on a single distribution, colliders included.
  Rng rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 4;
    const auto counts = testsupport::random_label_counts(rng, n, 2);
    const auto sys = trial % 2 == 0 ? testsupport::random_system(rng, counts, false, 0.5)
                                    : testsupport::gibbs_system(rng, testsupport::random_graph(rng, n, 0.4), counts, false);
    SliceBackend backend(sys, Functional::Entropy);
    InteractionEngine e(backend);
    const auto ind = [&](VarSubset a, VarSubset b, VarSubset c) { return e.is_independent(a, b, c); };
    for (std::uint32_t mask = 0; mask < 256; ++mask) {
      // Each variable goes to one of W, X, Y, Z.
      VarSubset w, x, y, z;
      for (int i = 1; i <= n; ++i) {
        switch ((mask >> (2 * (i - 1))) & 3u) {
          case 0: w |= VarSubset::singleton(i); break;
          case 1: x |= VarSubset::singleton(i); break;
          case 2: y |= VarSubset::singleton(i); break;
          default: z |= VarSubset::singleton(i); break;
        }
      }
      if (ind(x, y, z)) CHECK(ind(y, x, z));
      if (ind(w | x, y, z)) {
        CHECK(ind(x, y, z));
        CHECK(ind(w, y, x | z));
      }
      if (ind(w, y, x | z) && ind(x, y, z)) CHECK(ind(w | x, y, z));
    }
  }
}

TEST_CASE("conditioning on a common effect breaks independence") {
  const auto x = testsupport::xor_triple();
  SliceBackend backend(x, Functional::Entropy);
  InteractionEngine e(backend);
  CHECK(e.is_independent(VarSubset{1}, VarSubset{2}, {}));
  CHECK_FALSE(e.is_independent(VarSubset{1}, VarSubset{2}, VarSubset{3}));

  // X3 = X1 + X2 in {0, 1, 2}: same failure without any parity structure.
  const DiscreteSystem sum({{"X1", {"0", "1"}}, {"X2", {"0", "1"}}, {"X3", {"0", "1", "2"}}},
                           {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 2}}, {{0.25, 0.25, 0.25, 0.25}});
  SliceBackend sb(sum, Functional::Entropy);
  InteractionEngine se(sb);
  CHECK(se.is_independent(VarSubset{1}, VarSubset{2}, {}));
  CHECK_FALSE(se.is_independent(VarSubset{1}, VarSubset{2}, VarSubset{3}));
}

TEST_CASE("markov chain construction") {
  const auto two = build_markov_chain({2, 2}, {1.0, 0.0}, {kFlip});
  const auto m = marginal(two, 0, VarSubset{1, 2});
  CHECK(near(m.table.at({0, 0}), 0.9));
  CHECK(near(m.table.at({0, 1}), 0.1));
  CHECK(near(m.table.at({1, 0}), 0.0));

  const std::vector<std::vector<double>> identity{{1.0, 0.0}, {0.0, 1.0}};
  const auto copy = build_markov_chain({2, 2, 2}, {0.5, 0.5}, {identity, identity});
  CHECK(near(entropy_value(copy, VarSubset{1}, VarSubset{2, 3}), 0.0));

  const auto stay_uniform = build_markov_chain({2, 2, 2, 2}, {0.5, 0.5}, {kFlip, kFlip, kFlip});
  for (int i = 1; i <= 4; ++i) CHECK(near(entropy_value(stay_uniform, {}, VarSubset::singleton(i)), 1.0));

  CHECK_THROWS_AS(build_markov_chain({2, 2}, {0.5, 0.5}, {{{0.5, 0.6}, {0.5, 0.5}}}), ArgumentError);
  CHECK_THROWS_AS(build_markov_chain({2, 2}, {0.5, 0.5}, {}), ArgumentError);
  CHECK_THROWS_AS(build_markov_chain({2, 3}, {0.5, 0.5}, {kFlip}), ArgumentError);
}

TEST_CASE("second-law systems") {
  const auto s2 = second_law_system({2, 2}, {1.0, 0.0}, {0.5, 0.5}, {kFlip});
  CHECK(kl_value(s2, {}, VarSubset{1}) == 1.0);
  CHECK(near(kl_value(s2, {}, VarSubset{2}), 1.0 - testsupport::binary_entropy(0.9), 1e-12));

  const auto flat = second_law_system({2, 2, 2}, {0.4, 0.6}, {0.4, 0.6}, {kFlip, kFlip});
  const auto flat_diagram = build_diagram(SliceBackend(flat, Functional::KullbackLeibler));
  for (double v : flat_diagram.values()) CHECK(v == 0.0);

  const auto s3 = second_law_system({2, 2, 2}, {1.0, 0.0}, {0.5, 0.5}, {kFlip, kFlip});
  const auto d = build_diagram(SliceBackend(s3, Functional::KullbackLeibler));
  for (const auto& a : enumerate_atoms(3)) {
    if (a.index_set().min_index() >= 2) CHECK(d.is_zero_at(a));
  }
  CHECK_FALSE(d.is_zero_at(Atom{1}));

  CHECK_THROWS_AS(second_law_system({2, 2}, {0.5, 0.5}, {1.0, 0.0}, {kFlip}), DomainError);
}

TEST_CASE("divergence diagrams of chain pairs vanish off the prefixes") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const auto sys = testsupport::random_chain_pair(rng, testsupport::random_label_counts(rng, n, 3));
    SliceBackend backend(sys, Functional::KullbackLeibler);
    const auto d = build_diagram(backend);
    for (const auto& a : enumerate_atoms(n)) {
      const auto i = a.index_set();
      if (i.min_index() >= 2) CHECK(std::abs(d.at(a)) < 1e-9);
      if (!i.is_interval()) CHECK(std::abs(d.at(a)) < 1e-9);
    }
  }
}

TEST_CASE("disconnected atoms vanish for all three functionals on a shared graph") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const auto g = testsupport::random_graph(rng, n, 0.5);
    const auto sys = testsupport::gibbs_system(rng, g, testsupport::random_label_counts(rng, n, 3), true);
    for (auto f : {Functional::Entropy, Functional::KullbackLeibler, Functional::CrossEntropy}) {
      CHECK(test_mrf_diagram(build_diagram(SliceBackend(sys, f)), g).holds);
    }
  }
}

TEST_CASE("stability examples") {
  Rng rng(59);
  const auto chain = testsupport::random_chain(rng, {2, 3, 2});
  CHECK(verify_stability(chain, MrfProperty{Graph::path(3)}, VarSubset{2}, {1}));
  CHECK(verify_stability(chain, MrfProperty{Graph::path(3)}, {}, {}));

  const auto pair = second_law_system({2, 2, 2}, {1.0, 0.0}, {0.5, 0.5}, {kFlip, kFlip});
  CHECK(verify_stability(pair, EqualTransitionsProperty{}, VarSubset{1}, {0}));

  const ConditionalPartition k(3, VarSubset{2}, {VarSubset{1}, VarSubset{3}});
  CHECK(verify_stability(chain, FcmiProperty{k}, VarSubset{3}, {0}));
  CHECK_THROWS_AS(verify_stability(testsupport::xor_triple(), MrfProperty{Graph::path(3)}, {}, {}), ArgumentError);
  CHECK_THROWS_AS(verify_stability(chain, EqualTransitionsProperty{}, {}, {}), ArgumentError);
}
