#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "chainmon/element.hpp"
#include "generators.hpp"

using namespace chainmon;

namespace {

ChainPtr P(const std::string& s) { return parse_chain(s); }

ChainElement E(const ChainPtr& e, const std::string& s) { return parse_element(e, s); }

}  // namespace

TEST_CASE("normalization rewrites reversal and merges finite prefixes") {
  CHECK(print_chain(normalize(P("rev(N + Q)"))) == "Q + N*");
  CHECK(print_chain(normalize(P("rev(rev(Z))"))) == "Z");
  CHECK(print_chain(normalize(P("2 + (3 + N)"))) == "5 + N");
  CHECK(print_chain(normalize(P("0 + Q + 0"))) == "Q");
  CHECK(print_chain(normalize(P("rev(N x Q)"))) == "N* x Q");
  CHECK(print_chain(normalize(P("0 x Z"))) == "0");
  CHECK(print_chain(normalize(P("rev(1 + Z + Q)"))) == "Q + Z + 1");
}

TEST_CASE("normalize is idempotent on generated terms") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 1000; ++i) {
    ChainPtr e = testgen::random_expr(rng);
    ChainPtr n1 = normalize(e);
    CHECK(equal(n1, normalize(n1)));
  }
}

TEST_CASE("attributes of primitives and sums") {
  Attributes n = attributes(P("N"));
  CHECK(n.has_min);
  CHECK_FALSE(n.has_max);
  CHECK(n.well_ordered);
  CHECK(n.scattered);

  CHECK(attributes(P("N + N*")).has_gap == Tri::Yes);
  CHECK(attributes(P("N")).has_gap == Tri::No);
  CHECK(attributes(P("Q")).has_gap == Tri::Yes);
  CHECK(attributes(P("R")).has_gap == Tri::No);

  Attributes a = attributes(P("1 + Z + R"));
  CHECK(a.has_min);
  CHECK_FALSE(a.has_max);
  CHECK_FALSE(a.scattered);
  CHECK(a.cardinality == Card::Uncountable);

  Attributes prod = attributes(P("N x Q"));
  CHECK(prod.has_min == false);  // Q has no minimum
  CHECK(prod.cardinality == Card::CountablyInfinite);
  CHECK_FALSE(prod.scattered);

  CHECK(attributes(P("4 x 3")).finite_count == 12);
}

TEST_CASE("reversal swaps endpoint attributes and preserves the rest") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 400; ++i) {
    ChainPtr e = testgen::random_expr(rng);
    Attributes a = attributes(e);
    Attributes b = attributes(ChainExpr::rev(e));
    CHECK(a.has_min == b.has_max);
    CHECK(a.has_max == b.has_min);
    CHECK(a.scattered == b.scattered);
    CHECK(a.cardinality == b.cardinality);
    CHECK(a.is_empty == b.is_empty);
  }
}

TEST_CASE("well-ordered implies a minimum or emptiness") {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 400; ++i) {
    Attributes a = attributes(testgen::random_expr(rng));
    if (a.well_ordered) CHECK((a.has_min || a.is_empty));
    if (!a.scattered) CHECK(a.cardinality != Card::Finite);
  }
}

TEST_CASE("comparison on primitives") {
  ChainPtr z = P("Z");
  CHECK(compare(z, ChainElement::num(-3), ChainElement::num(5)) == Ordering::LT);
  ChainPtr ns = P("N*");
  CHECK(compare(ns, ChainElement::num(3), ChainElement::num(1)) == Ordering::LT);
  ChainPtr q = P("Q");
  CHECK(compare(q, E(q, "1/3"), E(q, "2/5")) == Ordering::LT);
}

TEST_CASE("comparison is a strict total order on sampled triples") {
  std::mt19937_64 rng(99);
  std::vector<ChainPtr> exprs = {P("Q"), P("1 + Z + Q"), P("N x Q"), P("N* + 3 + Q"), P("Z x 2")};
  for (const auto& raw : exprs) {
    ChainPtr e = normalize(raw);
    std::uniform_int_distribution<std::uint64_t> d(0, 2000);
    for (int i = 0; i < 200; ++i) {
      ChainElement x = enumerate(e, d(rng)), y = enumerate(e, d(rng)), w = enumerate(e, d(rng));
      Ordering xy = compare(e, x, y), yx = compare(e, y, x);
      CHECK(static_cast<int>(xy) == -static_cast<int>(yx));
      if (xy != Ordering::GT && compare(e, y, w) != Ordering::GT)
        CHECK(compare(e, x, w) != Ordering::GT);
    }
  }
}

TEST_CASE("enumeration follows the documented scheme") {
  CHECK(element_text(enumerate(P("Z"), 2)) == "-1");
  CHECK(element_text(enumerate(P("Q"), 3)) == "1/2");
  CHECK(element_text(enumerate(P("1 + Q"), 0)) == "L:1");
  // Calkin-Wilf positives at odd indices
  ChainPtr q = P("Q");
  const char* expect[] = {"1/1", "1/2", "2/1", "1/3", "3/2", "2/3", "3/1"};
  for (int k = 0; k < 7; ++k)
    CHECK(element_text(enumerate(q, 2 * k + 1)) == expect[k]);
}

TEST_CASE("enumeration is injective and covers finite chains exactly") {
  for (const auto& raw : {"N", "Z", "Q", "1 + Q", "N x Q", "3 + Z"}) {
    ChainPtr e = normalize(P(raw));
    std::set<std::string> seen;
    for (std::uint64_t i = 0; i <= 10000; ++i) {
      bool inserted = seen.insert(element_text(enumerate(e, i))).second;
      if (!inserted) {
        CHECK_MESSAGE(inserted, "collision on ", raw, " at index ", i);
        break;
      }
    }
  }
  ChainPtr f = P("6");
  std::set<long long> values;
  for (std::uint64_t i = 0; i < 6; ++i) values.insert(enumerate(f, i).as_num());
  CHECK(values == std::set<long long>{1, 2, 3, 4, 5, 6});
  CHECK_THROWS_AS(enumerate(f, 6), std::out_of_range);
  CHECK_THROWS_AS(enumerate(P("0"), 0), std::domain_error);
  CHECK_THROWS_AS(enumerate(P("R"), 0), std::domain_error);
}

TEST_CASE("sum enumeration alternates and skips the exhausted side") {
  ChainPtr e = normalize(P("2 + Q"));
  CHECK(element_text(enumerate(e, 0)) == "L:1");
  CHECK(element_text(enumerate(e, 1)) == "R:0/1");
  CHECK(element_text(enumerate(e, 2)) == "L:2");
  CHECK(element_text(enumerate(e, 3)) == "R:1/1");
  CHECK(element_text(enumerate(e, 4)) == "R:-1/1");  // finite side exhausted
  CHECK(element_text(enumerate(e, 5)) == "R:1/2");
}

TEST_CASE("endpoints agree with attributes and comparison") {
  CHECK(element_text(*min_element(normalize(P("1 + Q")))) == "L:1");
  CHECK_FALSE(min_element(P("Z")).has_value());
  CHECK(element_text(*max_element(normalize(P("Q + 1")))) == "R:1");
  CHECK_FALSE(max_element(P("N")).has_value());
  CHECK_FALSE(min_element(normalize(P("N* x Z + 1"))).has_value());
  CHECK(element_text(*min_element(normalize(P("3 x N")))) == "(1,1)");

  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    ChainPtr e = normalize(testgen::random_countable_expr(rng));
    auto sz = finite_size(e);
    if (sz && *sz == 0) continue;
    Attributes a = attributes(e);
    auto m = min_element(e);
    CHECK(m.has_value() == a.has_min);
    if (m) {
      std::uniform_int_distribution<std::uint64_t> d(0, 500);
      for (int s = 0; s < 20; ++s) {
        std::uint64_t idx = d(rng);
        if (sz && idx >= *sz) idx = idx % *sz;
        CHECK(compare(e, *m, enumerate(e, idx)) != Ordering::GT);
      }
    }
  }
}

TEST_CASE("parser handles grammar, precedence and errors") {
  CHECK(print_chain(P("1 + Z + Q")) == "1 + Z + Q");
  CHECK(print_chain(normalize(P("rev(N)"))) == "N*");
  ChainPtr prod = P("N x Q");
  CHECK(prod->kind == ChainKind::LexProd);
  // '+' binds looser than 'x'
  ChainPtr mixed = P("1 + N x Q");
  CHECK(mixed->kind == ChainKind::Sum);
  CHECK(mixed->right->kind == ChainKind::LexProd);
  CHECK(print_chain(P("(1 + N) x Q")) == "(1 + N) x Q");
  CHECK_THROWS_AS(P("1 +"), ParseError);
  CHECK_THROWS_AS(P("rev(N"), ParseError);
  CHECK_THROWS_AS(P("w"), ParseError);
  try {
    P("1 + w");
  } catch (const ParseError& err) {
    CHECK(err.position == 4);
  }
}

TEST_CASE("print then parse is the identity on generated terms") {
  std::mt19937_64 rng(31337);
  for (int i = 0; i < 1000; ++i) {
    ChainPtr e = testgen::random_expr(rng);
    CHECK(equal(parse_chain(print_chain(e)), e));
  }
}

TEST_CASE("element text round-trips") {
  ChainPtr e = normalize(P("1 + Z + Q"));
  for (std::uint64_t i = 0; i < 200; ++i) {
    ChainElement x = enumerate(e, i);
    CHECK(elem_eq(e, parse_element(e, element_text(x)), x));
  }
  ChainPtr prod = normalize(P("N x Q"));
  ChainElement p = enumerate(prod, 17);
  CHECK(elem_eq(prod, parse_element(prod, element_text(p)), p));
  CHECK_THROWS_AS(parse_element(e, "L:7"), std::invalid_argument);
  CHECK_THROWS_AS(parse_element(e, "Q:1"), std::invalid_argument);
}

TEST_CASE("reverse_element is an order-reversing bijection onto the reversed chain") {
  std::mt19937_64 rng(64);
  for (int t = 0; t < 100; ++t) {
    ChainPtr e = normalize(testgen::random_countable_expr(rng));
    auto sz = finite_size(e);
    if (sz && *sz == 0) continue;
    ChainPtr f = normalize(ChainExpr::rev(e));
    std::uniform_int_distribution<std::uint64_t> d(0, 300);
    for (int i = 0; i < 20; ++i) {
      std::uint64_t ia = d(rng), ib = d(rng);
      if (sz) {
        ia %= *sz;
        ib %= *sz;
      }
      ChainElement x = enumerate(e, ia), y = enumerate(e, ib);
      ChainElement rx = reverse_element(e, x), ry = reverse_element(e, y);
      validate_element(f, rx);
      CHECK(static_cast<int>(compare(e, x, y)) == -static_cast<int>(compare(f, rx, ry)));
      CHECK(elem_eq(e, reverse_element(f, rx), x));
    }
  }
}

TEST_CASE("elements of chains containing R are rejected") {
  ChainPtr e = normalize(P("1 + R"));
  CHECK_THROWS_AS(min_element(e), std::domain_error);
  CHECK(attributes(e).has_min);  // the existence query still answers
}
