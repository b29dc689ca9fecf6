#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "chainmon/congruence.hpp"
#include "oracles.hpp"

using namespace chainmon;

TEST_CASE("order-preserving self-map counts match the closed form") {
  const std::size_t expected[] = {1, 3, 10, 35, 126, 462};
  for (std::size_t n = 1; n <= 6; ++n) {
    EndMonoid em = end_monoid(n);
    CHECK(em.monoid.size() == expected[n - 1]);
    CHECK(em.monoid.size() == oracle::binomial(2 * n - 1, n - 1));
  }
  CHECK_THROWS_AS(end_monoid(8), BudgetError);
}

TEST_CASE("End(2) building blocks") {
  EndMonoid em = end_monoid(2);
  CHECK(em.monoid.labels() == std::vector<std::string>{"1,1", "1,2", "2,2"});
  CHECK(em.identity() == 1);
  CHECK(em.constant(1) == 0);
  CHECK(em.constant(2) == 2);
  // composition applies the left factor first: c1 then id is c1
  CHECK(em.monoid.mul(em.constant(1), em.identity()) == em.constant(1));
  CHECK(em.monoid.mul(em.identity(), em.constant(1)) == em.constant(1));
}

TEST_CASE("bad multiplication tables are rejected") {
  // a non-associative magma on {0,1}: 0*0=1 breaks (0*0)*0 = 0*(0*0)
  CHECK_THROWS_AS(FiniteMonoid(2, 0, {1, 1, 1, 0}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteMonoid(2, 0, {0, 1, 1, 3}), std::invalid_argument);
  CHECK_THROWS_AS(FiniteMonoid(2, 0, {0, 0, 0, 1}), std::invalid_argument);  // 0 is not an identity
}

TEST_CASE("monoid JSON round-trip") {
  EndMonoid em = end_monoid(3);
  nlohmann::json j = em.monoid.to_json();
  FiniteMonoid back = FiniteMonoid::from_json(j);
  CHECK(back.size() == em.monoid.size());
  CHECK(back.identity() == em.identity());
  CHECK(back.labels() == em.monoid.labels());
  for (std::size_t a = 0; a < back.size(); ++a)
    for (std::size_t b = 0; b < back.size(); ++b) CHECK(back.mul(a, b) == em.monoid.mul(a, b));
}

TEST_CASE("one-sided congruence closures on End(2)") {
  EndMonoid em = end_monoid(2);
  std::size_t id = em.identity(), c1 = em.constant(1), c2 = em.constant(2);
  PairSet u = PairSet::of_pairs({{id, c1}});

  Partition right = congruence_closure(em.monoid, u, CongSide::Right);
  CHECK(right.block_count == 2);
  CHECK(right.same(id, c1));
  CHECK_FALSE(right.same(id, c2));

  Partition left = congruence_closure(em.monoid, u, CongSide::Left);
  CHECK(left.universal());

  CHECK(congruence_closure(em.monoid, PairSet::full(), CongSide::Right).universal());
}

TEST_CASE("closures are closed under translation on sampled pairs") {
  EndMonoid em = end_monoid(3);
  const FiniteMonoid& s = em.monoid;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> d(0, s.size() - 1);
  for (int trial = 0; trial < 20; ++trial) {
    PairSet u = PairSet::of_pairs({{d(rng), d(rng)}, {d(rng), d(rng)}});
    for (CongSide side : {CongSide::Right, CongSide::Left}) {
      Partition p = congruence_closure(s, u, side);
      for (int i = 0; i < 50; ++i) {
        std::size_t a = d(rng), b = d(rng), t = d(rng);
        if (!p.same(a, b)) continue;
        std::size_t at = side == CongSide::Right ? s.mul(a, t) : s.mul(t, a);
        std::size_t bt = side == CongSide::Right ? s.mul(b, t) : s.mul(t, b);
        CHECK(p.same(at, bt));
      }
    }
  }
}

TEST_CASE("derivation distances on End(2)") {
  EndMonoid em = end_monoid(2);
  std::size_t id = em.identity(), c1 = em.constant(1), c2 = em.constant(2);
  PairSet u = PairSet::from_subset({id, c1});

  CHECK(distance(em.monoid, u, CongSide::Left, id, c2) == 2u);
  CHECK(distance(em.monoid, u, CongSide::Left, id, id) == 0u);
  CHECK_FALSE(distance(em.monoid, u, CongSide::Right, id, c2).has_value());
}

TEST_CASE("distances agree with the reference BFS on End(3)") {
  EndMonoid em = end_monoid(3);
  const FiniteMonoid& s = em.monoid;
  std::size_t id = em.identity();
  std::vector<std::vector<std::size_t>> gen_sets = {
      {id, em.constant(1)}, {id, em.constant(1), em.constant(3)}, {id, em.constant(2)}};
  for (const auto& gens : gen_sets) {
    PairSet u = PairSet::from_subset(gens);
    for (CongSide side : {CongSide::Right, CongSide::Left}) {
      std::vector<std::pair<std::size_t, std::size_t>> pairs;
      for (std::size_t a : gens)
        for (std::size_t b : gens) pairs.push_back({a, b});
      auto adj = oracle::derivation_adjacency(s, pairs, side);
      for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b)
          CHECK(distance(s, u, side, a, b) == oracle::bfs_distance(adj, a, b));
    }
  }
}

TEST_CASE("finite distances form a metric on End(3)") {
  EndMonoid em = end_monoid(3);
  const FiniteMonoid& s = em.monoid;
  std::size_t id = em.identity();
  std::vector<std::vector<std::size_t>> gen_sets = {
      {id, em.constant(1)}, {id, em.constant(1), em.constant(3)}};
  for (const auto& gens : gen_sets) {
    PairSet u = PairSet::from_subset(gens);
    const std::size_t m = s.size();
    std::vector<std::vector<std::optional<unsigned>>> d(m,
                                                        std::vector<std::optional<unsigned>>(m));
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) d[a][b] = distance(s, u, CongSide::Left, a, b);
    for (std::size_t a = 0; a < m; ++a) {
      CHECK(d[a][a] == 0u);
      for (std::size_t b = 0; b < m; ++b) {
        CHECK(d[a][b] == d[b][a]);
        if (a != b && d[a][b]) CHECK(*d[a][b] > 0);
        for (std::size_t c = 0; c < m; ++c)
          if (d[a][b] && d[b][c] && d[a][c]) CHECK(*d[a][c] <= *d[a][b] + *d[b][c]);
      }
    }
  }
}

TEST_CASE("enlarging the generating set never increases distances") {
  EndMonoid em = end_monoid(3);
  const FiniteMonoid& s = em.monoid;
  std::size_t id = em.identity();
  PairSet u = PairSet::from_subset({id, em.constant(1)});
  PairSet v = PairSet::from_subset({id, em.constant(1), em.constant(3)});
  for (CongSide side : {CongSide::Right, CongSide::Left})
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = 0; b < s.size(); ++b) {
        auto du = distance(s, u, side, a, b);
        auto dv = distance(s, v, side, a, b);
        if (du) {
          REQUIRE(dv.has_value());
          CHECK(*dv <= *du);
        }
      }
}

TEST_CASE("diameters for the standard generating sets") {
  for (std::size_t n = 2; n <= 4; ++n) {
    EndMonoid em = end_monoid(n);
    CHECK(diameter(em.monoid, PairSet::full(), CongSide::Right) == 1u);
    CHECK(diameter(em.monoid, PairSet::full(), CongSide::Left) == 1u);
    PairSet u = PairSet::from_subset({em.identity(), em.constant(1)});
    CHECK(diameter(em.monoid, u, CongSide::Left) == 2u);
    PairSet v = PairSet::from_subset({em.identity(), em.constant(1), em.constant(n)});
    auto right = diameter(em.monoid, v, CongSide::Right);
    REQUIRE(right.has_value());
    CHECK(*right <= 3u);
    CHECK(right == oracle::bfs_diameter(em.monoid,
                                        {em.identity(), em.constant(1), em.constant(n)},
                                        CongSide::Right));
  }
}

TEST_CASE("diagonal act generation in one step") {
  EndMonoid em2 = end_monoid(2);
  CHECK(diagonal_act_generated(em2.monoid, PairSet::full()));
  CHECK_FALSE(
      diagonal_act_generated(em2.monoid, PairSet::of_pairs({{em2.identity(), em2.constant(1)}})));
  FiniteMonoid trivial(1, 0, {0});
  CHECK(diagonal_act_generated(trivial, PairSet::of_pairs({{0, 0}})));
}

TEST_CASE("derivation sequence validation") {
  EndMonoid em = end_monoid(2);
  const FiniteMonoid& s = em.monoid;
  std::size_t id = em.identity(), c1 = em.constant(1), c2 = em.constant(2);
  PairSet u = PairSet::from_subset({id, c1});

  CHECK(validate_usequence(s, u, CongSide::Left, c2, c2, {}));
  CHECK_FALSE(validate_usequence(s, u, CongSide::Left, id, c2, {}));

  // the star path id -> c1 -> c2 through the centre of the left graph
  std::vector<USeqTriple> seq = {{id, c1, id}, {c1, id, c2}};
  CHECK(validate_usequence(s, u, CongSide::Left, id, c2, seq));

  // a pair outside U invalidates the derivation
  PairSet tight = PairSet::of_pairs({{id, id}});
  CHECK_FALSE(validate_usequence(s, tight, CongSide::Left, id, c2, seq));

  CHECK_THROWS_AS(validate_usequence(s, u, CongSide::Left, id, c2, {{9, 0, 0}}),
                  std::out_of_range);
}

TEST_CASE("exhaustive generating-set minimum on small monoids") {
  EndMonoid em = end_monoid(2);
  CHECK(min_diameter_over_subsets(em.monoid, CongSide::Right) == 1u);
  CHECK(min_diameter_over_subsets(em.monoid, CongSide::Left) == 1u);
  CHECK_THROWS_AS(min_diameter_over_subsets(end_monoid(4).monoid, CongSide::Right), BudgetError);
}
