#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "chainmon/chain.hpp"

namespace chainmon {

enum class Side : std::uint8_t { L, R };
enum class Ordering : std::int8_t { LT = -1, EQ = 0, GT = 1 };

struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A point of a countable term chain, shaped like its expression:
/// an integer carrier for k/N/N*/Z, an exact rational for Q, a tagged
/// value for sums and a pair for products. Chains containing R have no
/// elements; R is a classification-only primitive.
class ChainElement {
 public:
  struct SumEl {
    Side side;
    std::shared_ptr<const ChainElement> sub;
  };
  struct PairEl {
    std::shared_ptr<const ChainElement> first, second;
  };

  std::variant<long long, Rational, SumEl, PairEl> v;

  static ChainElement num(long long n) { return ChainElement{n}; }
  static ChainElement rat(Rational q) { return ChainElement{std::move(q)}; }
  static ChainElement in_side(Side s, ChainElement sub) {
    return ChainElement{SumEl{s, std::make_shared<const ChainElement>(std::move(sub))}};
  }
  static ChainElement pair(ChainElement a, ChainElement b) {
    return ChainElement{PairEl{std::make_shared<const ChainElement>(std::move(a)),
                               std::make_shared<const ChainElement>(std::move(b))}};
  }

  bool is_num() const { return std::holds_alternative<long long>(v); }
  bool is_rat() const { return std::holds_alternative<Rational>(v); }
  bool is_sum() const { return std::holds_alternative<SumEl>(v); }
  bool is_pair() const { return std::holds_alternative<PairEl>(v); }
  long long as_num() const { return std::get<long long>(v); }
  const Rational& as_rat() const { return std::get<Rational>(v); }
  const SumEl& as_sum() const { return std::get<SumEl>(v); }
  const PairEl& as_pair() const { return std::get<PairEl>(v); }
};

/// Throws ShapeError unless x matches the shape of e at every level.
void validate_element(const ChainPtr& e, const ChainElement& x);

/// Total order of e. N* compares carriers reversed, sums compare the
/// side tag first (L < R), products compare lexicographically.
Ordering compare(const ChainPtr& e, const ChainElement& x, const ChainElement& y);

inline bool elem_le(const ChainPtr& e, const ChainElement& x, const ChainElement& y) {
  return compare(e, x, y) != Ordering::GT;
}
inline bool elem_eq(const ChainPtr& e, const ChainElement& x, const ChainElement& y) {
  return compare(e, x, y) == Ordering::EQ;
}

/// The fixed index -> element bijection:
///   k:  i -> i+1;  N, N*: i -> i+1;  Z: 0, 1, -1, 2, -2, ...;
///   Q:  0 first, odd indices walk the Calkin-Wilf positives, even >= 2
///       their negatives;
///   Sum: alternate sides, skipping an exhausted finite side;
///   LexProd: diagonal dovetail, skipping exhausted rows and columns.
/// Throws std::out_of_range past a finite chain and std::domain_error for
/// empty or R-containing expressions.
ChainElement enumerate(const ChainPtr& e, std::uint64_t index);

/// Endpoints of a normalized, R-free term. Absent endpoints give nullopt;
/// expressions containing R throw (their elements are not representable).
std::optional<ChainElement> min_element(const ChainPtr& e);
std::optional<ChainElement> max_element(const ChainPtr& e);

/// Text form: integers as decimals, rationals as "p/q", sum elements as
/// "L:<el>" / "R:<el>", product elements as "(<el>,<el>)".
std::string element_text(const ChainElement& x);
ChainElement parse_element(const ChainPtr& e, const std::string& text);

/// The canonical order-reversing bijection from e onto normalize(rev(e)):
/// finite carriers flip, N <-> N* keep carriers, Z and Q negate, sum tags
/// swap sides, product coordinates reverse pointwise.
ChainElement reverse_element(const ChainPtr& e, const ChainElement& x);

/// Comparator usable with ordered containers.
struct ElementLess {
  ChainPtr expr;
  bool operator()(const ChainElement& a, const ChainElement& b) const {
    return compare(expr, a, b) == Ordering::LT;
  }
};

}  // namespace chainmon
