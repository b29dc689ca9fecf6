#include "chainmon/bound.hpp"

namespace chainmon {

Ordering cmp_quad(const Quad& x, const Quad& y) {
  // sign of (x - y) = a + b*sqrt(2)
  Rational a = x.a - y.a;
  Rational b = x.b - y.b;
  if (b == 0) return a < 0 ? Ordering::LT : a == 0 ? Ordering::EQ : Ordering::GT;
  bool flip = b < 0;
  if (flip) {
    a = -a;
    b = -b;
  }
  Ordering r;
  if (a >= 0)
    r = Ordering::GT;
  else {
    // -a vs b*sqrt(2), both positive: compare squares; equality impossible
    Rational lhs = a * a, rhs = 2 * b * b;
    r = lhs < rhs ? Ordering::GT : Ordering::LT;
  }
  return flip ? (r == Ordering::GT ? Ordering::LT : Ordering::GT) : r;
}

Quad quad_neg(const Quad& x) { return Quad{-x.a, -x.b}; }
Quad quad_add(const Quad& x, const Quad& y) { return Quad{x.a + y.a, x.b + y.b}; }
Quad quad_sub(const Quad& x, const Quad& y) { return Quad{x.a - y.a, x.b - y.b}; }

Quad quad_recip(const Quad& x) {
  // 1/(a + b*sqrt(2)) = (a - b*sqrt(2)) / (a^2 - 2 b^2)
  Rational d = x.a * x.a - 2 * x.b * x.b;
  if (d == 0) throw std::domain_error("reciprocal of zero");
  return Quad{x.a / d, -x.b / d};
}

Quad quad_scale(const Quad& x, const Rational& r) { return Quad{x.a * r, x.b * r}; }

Rational pow2(long long k) {
  Integer p = 1;
  p <<= static_cast<unsigned>(k < 0 ? -k : k);
  return k >= 0 ? Rational(p) : make_rational(1, p);
}

Integer floor_quad(const Quad& x) {
  if (x.b == 0) return floor_rational(x.a);
  // write x = (P + R*sqrt2)/D over a common denominator and floor the
  // irrational part exactly with an integer square root
  Integer D = denominator(x.a) * denominator(x.b);
  Integer P = numerator(x.a) * denominator(x.b);
  Integer R = numerator(x.b) * denominator(x.a);
  Integer u = boost::multiprecision::sqrt(Integer(2) * R * R);  // floor(|R| sqrt2)
  Integer tfloor = R >= 0 ? u : -u - 1;  // R*sqrt2 is irrational, never integral
  Integer num = P + tfloor;
  Integer n = num / D;
  if (num < 0 && n * D != num) --n;
  // the unit uncertainty in tfloor shifts the floor by at most one
  auto le = [&](const Integer& m) { return cmp_quad(Quad::of(Rational(m)), x) != Ordering::GT; };
  while (le(n + 1)) ++n;
  while (!le(n)) --n;
  return n;
}

namespace {

// walks x against the anchor; the sqrt2 shift applies to the final Q
// coordinate reached when x tracks the anchor all the way down
Ordering cmp_element_to_cut(const ChainPtr& e, const ChainElement& x, const ChainElement& anchor,
                            const Rational& coeff) {
  switch (e->kind) {
    case ChainKind::Rat: {
      Quad pos{anchor.as_rat(), coeff};
      Ordering c = cmp_quad(Quad::of(x.as_rat()), pos);
      if (c == Ordering::EQ) throw std::logic_error("element on an irrational cut");
      return c;
    }
    case ChainKind::Sum: {
      const auto& xs = x.as_sum();
      const auto& as = anchor.as_sum();
      if (xs.side != as.side) return xs.side == Side::L ? Ordering::LT : Ordering::GT;
      return cmp_element_to_cut(xs.side == Side::L ? e->left : e->right, *xs.sub, *as.sub, coeff);
    }
    case ChainKind::LexProd: {
      const auto& xp = x.as_pair();
      const auto& ap = anchor.as_pair();
      Ordering first = compare(e->left, *xp.first, *ap.first);
      if (first != Ordering::EQ) return first;
      return cmp_element_to_cut(e->right, *xp.second, *ap.second, coeff);
    }
    default:
      throw std::invalid_argument("sqrt2 cut must sit inside a Q coordinate");
  }
}

}  // namespace

bool below_bound(const ChainPtr& e, const ChainElement& x, const Bound& b) {
  switch (b.mode) {
    case BoundMode::Weak:
      return compare(e, x, b.anchor) != Ordering::GT;
    case BoundMode::Strict:
      return compare(e, x, b.anchor) == Ordering::LT;
    case BoundMode::Sqrt2:
      return cmp_element_to_cut(e, x, b.anchor, b.sqrt2_coeff) == Ordering::LT;
  }
  throw std::logic_error("unreachable");
}

ChainPtr subtree_at(const ChainPtr& e, const SumPath& path) {
  ChainPtr cur = e;
  for (char c : path) {
    if (cur->kind != ChainKind::Sum) throw std::invalid_argument("path leaves the sum spine");
    cur = c == 'L' ? cur->left : cur->right;
  }
  return cur;
}

bool path_matches(const ChainElement& x, const SumPath& path) {
  const ChainElement* cur = &x;
  for (char c : path) {
    if (!cur->is_sum()) return false;
    const auto& s = cur->as_sum();
    if ((c == 'L') != (s.side == Side::L)) return false;
    cur = s.sub.get();
  }
  return true;
}

ChainElement strip_path(const ChainElement& x, const SumPath& path) {
  const ChainElement* cur = &x;
  for (char c : path) {
    const auto& s = cur->as_sum();
    if ((c == 'L') != (s.side == Side::L)) throw ShapeError("element off the region path");
    cur = s.sub.get();
  }
  return *cur;
}

ChainElement wrap_path(const SumPath& path, ChainElement inner) {
  ChainElement out = std::move(inner);
  for (std::size_t i = path.size(); i-- > 0;)
    out = ChainElement::in_side(path[i] == 'L' ? Side::L : Side::R, std::move(out));
  return out;
}

bool Region::contains(const ChainElement& x) const {
  if (!path_matches(x, path)) return false;
  if (lo && below_bound(expr, x, *lo)) return false;
  if (hi && !below_bound(expr, x, *hi)) return false;
  return true;
}

namespace {

std::optional<Quad> bound_pos(const Region& r, const std::optional<Bound>& b) {
  if (!b) return std::nullopt;
  ChainElement local = strip_path(b->anchor, r.path);
  if (!local.is_rat()) throw std::invalid_argument("region bound must anchor in the Q coordinate");
  Rational coeff = b->mode == BoundMode::Sqrt2 ? b->sqrt2_coeff : Rational(0);
  return Quad{local.as_rat(), coeff};
}

}  // namespace

std::optional<Quad> region_lo_pos(const Region& r) { return bound_pos(r, r.lo); }
std::optional<Quad> region_hi_pos(const Region& r) { return bound_pos(r, r.hi); }

void require_dense_unbounded(const Region& r) {
  ChainPtr sub = subtree_at(r.expr, r.path);
  if (sub->kind != ChainKind::Rat)
    throw std::invalid_argument("region must select a Q summand");
  // a lo cut is open exactly when Weak (x > anchor), a hi cut when Strict
  if (r.lo && r.lo->mode == BoundMode::Strict)
    throw std::invalid_argument("region minimum would be attained; open cuts required");
  if (r.hi && r.hi->mode == BoundMode::Weak)
    throw std::invalid_argument("region maximum would be attained; open cuts required");
  for (const auto& b : {r.lo, r.hi}) {
    if (!b) continue;
    if (b->mode == BoundMode::Sqrt2 && b->sqrt2_coeff == 0)
      throw std::invalid_argument("sqrt2 cut needs a nonzero coefficient");
    if (!path_matches(b->anchor, r.path))
      throw std::invalid_argument("region bound anchored outside the region path");
  }
  auto lo = region_lo_pos(r), hi = region_hi_pos(r);
  if (lo && hi && cmp_quad(*lo, *hi) != Ordering::LT)
    throw std::invalid_argument("empty region");
}

Rational rat_coord(const ChainElement& x) {
  const ChainElement* cur = &x;
  while (cur->is_sum()) cur = cur->as_sum().sub.get();
  if (!cur->is_rat()) throw ShapeError("expected an element of a Q summand");
  return cur->as_rat();
}

namespace {

Rational simplest_impl(std::optional<Quad> lo, std::optional<Quad> hi, int depth) {
  if (depth > 100000) throw std::logic_error("interval search failed to converge");
  Quad zero = Quad::of(Rational(0));
  bool zero_above_lo = !lo || cmp_quad(*lo, zero) == Ordering::LT;
  bool zero_below_hi = !hi || cmp_quad(*hi, zero) == Ordering::GT;
  if (zero_above_lo && zero_below_hi) return Rational(0);
  if (hi && cmp_quad(*hi, zero) != Ordering::GT) {
    // interval is negative: reflect
    std::optional<Quad> nlo = hi ? std::optional<Quad>(quad_neg(*hi)) : std::nullopt;
    std::optional<Quad> nhi = lo ? std::optional<Quad>(quad_neg(*lo)) : std::nullopt;
    return -simplest_impl(nlo, nhi, depth + 1);
  }
  // now lo exists with lo >= 0
  Integer k = floor_quad(*lo);
  Rational cand = Rational(k + 1);
  if (!hi || cmp_quad(*hi, Quad::of(cand)) == Ordering::GT) return cand;
  // interval inside (k, k+1]: invert the fractional part
  Quad lo_frac = quad_sub(*lo, Quad::of(Rational(k)));
  Quad hi_frac = quad_sub(*hi, Quad::of(Rational(k)));
  std::optional<Quad> new_lo = quad_recip(hi_frac);
  std::optional<Quad> new_hi;
  if (!(lo_frac.is_rational() && lo_frac.a == 0)) new_hi = quad_recip(lo_frac);
  Rational r = simplest_impl(new_lo, new_hi, depth + 1);
  return Rational(k) + Rational(1) / r;
}

}  // namespace

Rational simplest_rational_between(const std::optional<Quad>& lo, const std::optional<Quad>& hi) {
  if (lo && hi && cmp_quad(*lo, *hi) != Ordering::LT)
    throw std::invalid_argument("empty interval");
  return simplest_impl(lo, hi, 0);
}

}  // namespace chainmon
