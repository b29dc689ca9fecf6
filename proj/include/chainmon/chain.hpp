#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "chainmon/rational.hpp"

namespace chainmon {

enum class ChainKind : std::uint8_t { Finite, Nat, NatStar, Int, Rat, Real, Sum, LexProd, Rev };

class ChainExpr;
using ChainPtr = std::shared_ptr<const ChainExpr>;

/// A symbolic linear order built from the primitives k (finite chains),
/// N, N*, Z, Q, R and the operations ordered sum, lexicographic product
/// and order reversal. Nodes are immutable and shared.
class ChainExpr {
 public:
  ChainKind kind;
  std::uint64_t count = 0;  // Finite only
  ChainPtr left, right;     // Sum / LexProd
  ChainPtr inner;           // Rev

  explicit ChainExpr(ChainKind k) : kind(k) {}

  static ChainPtr finite(std::uint64_t k);
  static ChainPtr nat();
  static ChainPtr nat_star();
  static ChainPtr integers();
  static ChainPtr rationals();
  static ChainPtr reals();
  static ChainPtr sum(ChainPtr a, ChainPtr b);
  static ChainPtr lex(ChainPtr a, ChainPtr b);
  static ChainPtr rev(ChainPtr a);
};

bool equal(const ChainPtr& a, const ChainPtr& b);
bool contains_real(const ChainPtr& e);

/// Rewrites to the canonical form: no Rev node, no empty summand, no
/// adjacent finite summands, sums right-nested, empty products collapsed.
/// The result denotes an order-isomorphic chain.
ChainPtr normalize(const ChainPtr& e);

enum class Tri : std::uint8_t { Yes, No, Unknown };
enum class Card : std::uint8_t { Finite, CountablyInfinite, Uncountable };

struct Attributes {
  bool is_empty = true;
  Card cardinality = Card::Finite;
  Integer finite_count = 0;  // meaningful when cardinality == Finite
  bool has_min = false;
  bool has_max = false;
  bool well_ordered = true;
  bool scattered = true;
  Tri has_gap = Tri::No;
};

/// Structural order invariants of the denoted chain. The expression is
/// normalized internally, so Rev nodes are accepted.
Attributes attributes(const ChainPtr& e);

struct ParseError : std::runtime_error {
  std::size_t position;
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at position " + std::to_string(pos) + ")"), position(pos) {}
};

/// Grammar: expr := prod ('+' prod)*, prod := atom ('x' atom)*,
/// atom := 'N' | 'N*' | 'Z' | 'Q' | 'R' | INTEGER | 'rev(' expr ')' | '(' expr ')'.
/// '+' binds looser than 'x'; both chains nest to the right internally.
ChainPtr parse_chain(const std::string& text);
std::string print_chain(const ChainPtr& e);

/// Leaves of the right-nested sum spine; a non-Sum node is its own spine.
std::vector<ChainPtr> sum_spine(const ChainPtr& e);
ChainPtr sum_of(const std::vector<ChainPtr>& leaves);

/// Element count for countable chains; nullopt when infinite.
/// Saturates at 2^62 (beyond any index the library will enumerate).
std::optional<std::uint64_t> finite_size(const ChainPtr& e);

}  // namespace chainmon
