#pragma once

#include <optional>
#include <string>

#include "chainmon/element.hpp"

namespace chainmon {

/// Exact numbers a + b*sqrt(2). Closed under the operations the interval
/// machinery needs; comparisons against rationals are decided exactly.
struct Quad {
  Rational a;  // rational part
  Rational b;  // sqrt(2) coefficient

  static Quad of(Rational r) { return Quad{std::move(r), Rational(0)}; }
  bool is_rational() const { return b == 0; }
};

Ordering cmp_quad(const Quad& x, const Quad& y);
Quad quad_neg(const Quad& x);
Quad quad_add(const Quad& x, const Quad& y);
Quad quad_sub(const Quad& x, const Quad& y);
Quad quad_recip(const Quad& x);              // x != 0
Quad quad_scale(const Quad& x, const Rational& r);
Integer floor_quad(const Quad& x);
Rational pow2(long long k);                  // 2^k as an exact rational, k may be negative

/// A cut position in a chain: just above an element (Weak), just below it
/// (Strict), or at (anchor's final rational coordinate) + coeff*sqrt(2)
/// (Sqrt2 — an irrational position, so no element sits on the cut).
enum class BoundMode : std::uint8_t { Weak, Strict, Sqrt2 };

struct Bound {
  ChainElement anchor;
  BoundMode mode = BoundMode::Weak;
  Rational sqrt2_coeff = Rational(0);  // Sqrt2 only, nonzero

  static Bound weak(ChainElement x) { return Bound{std::move(x), BoundMode::Weak, Rational(0)}; }
  static Bound strict(ChainElement x) { return Bound{std::move(x), BoundMode::Strict, Rational(0)}; }
  static Bound sqrt2(ChainElement anchor, Rational coeff) {
    return Bound{std::move(anchor), BoundMode::Sqrt2, std::move(coeff)};
  }
};

/// True iff x lies at or below the cut. Weak cuts sit just above their
/// anchor, strict cuts just below it, sqrt2 cuts at the shifted position
/// inside the anchor's final Q coordinate.
bool below_bound(const ChainPtr& e, const ChainElement& x, const Bound& b);

/// Path of 'L'/'R' steps through nested sums.
using SumPath = std::string;

ChainPtr subtree_at(const ChainPtr& e, const SumPath& path);
bool path_matches(const ChainElement& x, const SumPath& path);
ChainElement strip_path(const ChainElement& x, const SumPath& path);
ChainElement wrap_path(const SumPath& path, ChainElement inner);

/// An interval of a designated summand subtree of a term chain.
struct Region {
  ChainPtr expr;
  SumPath path;
  std::optional<Bound> lo, hi;

  bool contains(const ChainElement& x) const;
};

/// Validates that the region is a nonempty interval of a Q summand with
/// neither a least nor a greatest element (the shape back-and-forth
/// isomorphisms require). Throws std::invalid_argument otherwise.
void require_dense_unbounded(const Region& r);

/// Positions of a region's cuts inside its Q coordinate, when they exist.
std::optional<Quad> region_lo_pos(const Region& r);
std::optional<Quad> region_hi_pos(const Region& r);

/// The final rational coordinate of an element of a Q summand.
Rational rat_coord(const ChainElement& x);

/// Simplest rational strictly inside (lo, hi) by Stern-Brocot descent;
/// absent bounds mean the interval is unbounded on that side.
Rational simplest_rational_between(const std::optional<Quad>& lo, const std::optional<Quad>& hi);

}  // namespace chainmon
