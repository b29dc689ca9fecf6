#include "chainmon/program.hpp"

#include <algorithm>

namespace chainmon {

// ---------------------------------------------------------------------------
// back-and-forth tables

DenseIsoTable::DenseIsoTable(Region a, Region b)
    : a_(std::move(a)),
      b_(std::move(b)),
      fwd_(ElementLess{a_.expr}),
      bwd_(ElementLess{b_.expr}) {
  require_dense_unbounded(a_);
  require_dense_unbounded(b_);
}

void DenseIsoTable::match_next(const Region& from, const Region& to,
                               std::map<ChainElement, ChainElement, ElementLess>& fwd,
                               std::map<ChainElement, ChainElement, ElementLess>& bwd,
                               std::uint64_t& cursor) const {
  ChainElement x = ChainElement::num(0);
  while (true) {
    if (cursor > 50'000'000) throw BudgetError("region enumeration budget exceeded");
    ChainElement cand = enumerate(from.expr, cursor);
    ++cursor;
    if (!from.contains(cand) || fwd.count(cand)) continue;
    x = std::move(cand);
    break;
  }
  // the admissible gap: strictly between the partners of x's neighbors,
  // inside the target region's own cuts
  std::optional<Quad> lo = region_lo_pos(to), hi = region_hi_pos(to);
  auto it = fwd.lower_bound(x);
  if (it != fwd.end()) hi = Quad::of(rat_coord(it->second));
  if (it != fwd.begin()) lo = Quad::of(rat_coord(std::prev(it)->second));
  Rational c = simplest_rational_between(lo, hi);
  ChainElement y = wrap_path(to.path, ChainElement::rat(c));
  fwd.emplace(x, y);
  bwd.emplace(std::move(y), std::move(x));
}

void DenseIsoTable::extend_once() const {
  if (steps_ % 2 == 0)
    match_next(a_, b_, fwd_, bwd_, cursor_a_);
  else
    match_next(b_, a_, bwd_, fwd_, cursor_b_);
  ++steps_;
}

ChainElement DenseIsoTable::map(const ChainElement& x, IsoDirection dir) const {
  std::lock_guard<std::mutex> lock(mu_);
  const Region& src = dir == IsoDirection::Forward ? a_ : b_;
  auto& table = dir == IsoDirection::Forward ? fwd_ : bwd_;
  if (!src.contains(x)) throw ShapeError("element outside the isomorphism's source region");
  for (std::size_t guard = 0; guard < 4'000'000; ++guard) {
    auto it = table.find(x);
    if (it != table.end()) return it->second;
    extend_once();
  }
  throw BudgetError("back-and-forth extension budget exceeded");
}

// ---------------------------------------------------------------------------
// staircases

namespace {

SumPath anchor_sum_path(const ChainElement& x) {
  SumPath p;
  const ChainElement* cur = &x;
  while (cur->is_sum()) {
    const auto& s = cur->as_sum();
    p += s.side == Side::L ? 'L' : 'R';
    cur = s.sub.get();
  }
  return p;
}

Quad bound_quad(const Bound& b) {
  return Quad{rat_coord(b.anchor), b.mode == BoundMode::Sqrt2 ? b.sqrt2_coeff : Rational(0)};
}

}  // namespace

SumPath StairSpec::source_path() const { return anchor_sum_path(lo.anchor); }

void StairSpec::validate() const {
  if (lo.mode != BoundMode::Weak)
    throw std::invalid_argument("staircase interval must be open below at a rational point");
  SumPath sp = source_path();
  if (subtree_at(source, sp)->kind != ChainKind::Rat)
    throw std::invalid_argument("staircase interval must sit in a Q summand");
  if (anchor_sum_path(hi.anchor) != sp)
    throw std::invalid_argument("staircase cuts must share one Q summand");
  ChainKind want;
  switch (kind) {
    case StairKind::OntoNat:
      want = ChainKind::Nat;
      if (hi.mode == BoundMode::Weak)
        throw std::invalid_argument("staircase onto N needs an open upper cut");
      break;
    case StairKind::OntoNatStar:
      want = ChainKind::NatStar;
      if (hi.mode != BoundMode::Weak)
        throw std::invalid_argument("staircase onto N* needs a closed upper cut");
      break;
    case StairKind::OntoInt:
      want = ChainKind::Int;
      if (hi.mode == BoundMode::Weak)
        throw std::invalid_argument("staircase onto Z needs an open upper cut");
      break;
    default:
      throw std::logic_error("unreachable");
  }
  if (subtree_at(target, target_path)->kind != want)
    throw std::invalid_argument("staircase target summand has the wrong kind");
  if (cmp_quad(Quad::of(rat_coord(lo.anchor)), bound_quad(hi)) != Ordering::LT)
    throw std::invalid_argument("empty staircase interval");
}

bool StairSpec::in_domain(const ChainElement& x) const {
  return !below_bound(source, x, lo) && below_bound(source, x, hi);
}

namespace {

// least k with pred(k) true, where pred is monotone (false then true);
// galloping keeps the number of exact big-rational evaluations logarithmic
template <typename Pred>
long long least_true(long long start, Pred&& pred) {
  long long lo, hi;
  if (pred(start)) {
    // gallop down for the last false point
    long long step = 1;
    hi = start;
    lo = start - 1;
    while (pred(lo)) {
      hi = lo;
      lo -= step;
      step <<= 1;
    }
  } else {
    long long step = 1;
    lo = start;
    hi = start + 1;
    while (!pred(hi)) {
      lo = hi;
      hi += step;
      step <<= 1;
    }
  }
  // invariant: !pred(lo) && pred(hi)
  while (hi - lo > 1) {
    long long mid = lo + (hi - lo) / 2;
    (pred(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace

long long StairSpec::rung_of(const ChainElement& x) const {
  if (!in_domain(x)) throw ShapeError("element outside the staircase interval");
  Rational t = rat_coord(x);
  Rational a = rat_coord(lo.anchor);
  Quad H = bound_quad(hi);
  Quad width = quad_sub(H, Quad::of(a));
  switch (kind) {
    case StairKind::OntoNat: {
      // rung k covers (e_{k-1}, e_k] with e_k = H - width/2^k
      auto at_or_below = [&](long long k) {
        if (k < 1) return false;
        Quad ek = quad_sub(H, quad_scale(width, pow2(-k)));
        return cmp_quad(Quad::of(t), ek) != Ordering::GT;
      };
      return least_true(1, at_or_below);
    }
    case StairKind::OntoNatStar: {
      // rung k covers (f_{k+1}, f_k] with f_k = a + width/2^{k-1}
      auto above_next = [&](long long k) {
        if (k < 1) return false;
        Quad fk1 = quad_add(Quad::of(a), quad_scale(width, pow2(-k)));
        return cmp_quad(Quad::of(t), fk1) == Ordering::GT;
      };
      return least_true(1, above_next);
    }
    case StairKind::OntoInt: {
      // transform by m(t) = -1/(t-a), a rational bijection of the interval
      // onto (-inf, M); rungs are dyadic steps below M
      Rational v = Rational(-1) / (t - a);
      Quad M = quad_neg(quad_recip(width));
      auto at_or_below = [&](long long k) {
        Rational dk = Rational(floor_quad(quad_scale(M, pow2(k))) - 1) * pow2(-k);
        return v <= dk;
      };
      return least_true(0, at_or_below);
    }
  }
  throw std::logic_error("unreachable");
}

Rational StairSpec::section_coord(long long k) const {
  Rational a = rat_coord(lo.anchor);
  Quad H = bound_quad(hi);
  Quad width = quad_sub(H, Quad::of(a));
  switch (kind) {
    case StairKind::OntoNat: {
      if (k < 1) throw std::invalid_argument("rung index must be positive");
      if (!H.is_rational()) throw std::invalid_argument("no rational section for this staircase");
      return H.a - (H.a - a) * pow2(-k);
    }
    case StairKind::OntoNatStar: {
      if (k < 1) throw std::invalid_argument("rung index must be positive");
      if (!H.is_rational()) throw std::invalid_argument("no rational section for this staircase");
      return a + (H.a - a) * pow2(-(k - 1));
    }
    case StairKind::OntoInt: {
      Quad M = quad_neg(quad_recip(width));
      Rational dk = Rational(floor_quad(quad_scale(M, pow2(k))) - 1) * pow2(-k);
      return a - Rational(1) / dk;
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// evaluation

struct EndoProgram::PreimageMemo {
  std::mutex mu;
  std::map<ChainElement, ChainElement, ElementLess> found;
  explicit PreimageMemo(const ChainPtr& keyed_by) : found(ElementLess{keyed_by}) {}
};

ChainElement EndoProgram::apply(const ChainElement& x) const {
  validate_element(source, x);
  if (const auto* b = std::get_if<Identity>(&body)) {
    (void)b;
    return x;
  }
  if (const auto* b = std::get_if<Const>(&body)) return b->value;
  if (const auto* b = std::get_if<Compose>(&body)) return b->second->apply(b->first->apply(x));
  if (const auto* b = std::get_if<TableMap>(&body)) {
    if (!path_matches(x, b->path)) throw ShapeError("element off the table summand");
    long long c = strip_path(x, b->path).as_num();
    if (c < 1 || static_cast<std::size_t>(c) > b->values.size())
      throw ShapeError("table map applied past its value list");
    return b->values[static_cast<std::size_t>(c - 1)];
  }
  if (std::get_if<SuccNat>(&body)) return ChainElement::num(x.as_num() + 1);
  if (std::get_if<PredClampNat>(&body))
    return ChainElement::num(std::max<long long>(1, x.as_num() - 1));
  if (const auto* b = std::get_if<StepThreshold>(&body))
    return elem_le(source, x, b->pivot) ? b->low : b->high;
  if (const auto* b = std::get_if<GuardedCompose>(&body))
    return below_bound(source, x, b->guard) ? b->fallback : b->inner->apply(x);
  if (const auto* b = std::get_if<CutSplit>(&body))
    return below_bound(source, x, b->at) ? b->low->apply(x) : b->high->apply(x);
  if (const auto* b = std::get_if<SumPiece>(&body)) {
    if (!path_matches(x, b->at)) throw ShapeError("element off the dispatching sum");
    ChainElement at = strip_path(x, b->at);
    if (!at.is_sum()) throw ShapeError("sum piece dispatch expects a side tag");
    return at.as_sum().side == Side::L ? b->left->apply(x) : b->right->apply(x);
  }
  if (const auto* b = std::get_if<Project>(&body)) {
    if (!path_matches(x, b->at)) throw ShapeError("element off the projected summand");
    return strip_path(x, b->at);
  }
  if (const auto* b = std::get_if<ExtendIdentity>(&body)) {
    const auto& s = x.as_sum();
    if (s.side != b->side) return x;
    return ChainElement::in_side(s.side, b->inner->apply(*s.sub));
  }
  if (const auto* b = std::get_if<Power>(&body)) {
    ChainElement cur = x;
    for (unsigned i = 0; i < b->exponent; ++i) cur = b->inner->apply(cur);
    return cur;
  }
  if (const auto* b = std::get_if<DenseIso>(&body)) return b->table->map(x, b->dir);
  if (const auto* b = std::get_if<CollapseToPoint>(&body)) {
    bool inside = (!b->lo || !below_bound(source, x, *b->lo)) &&
                  (!b->hi || below_bound(source, x, *b->hi));
    return inside ? b->point : x;
  }
  if (const auto* b = std::get_if<Staircase>(&body))
    return wrap_path(b->spec.target_path, ChainElement::num(b->spec.rung_of(x)));
  if (const auto* b = std::get_if<StairSection>(&body)) {
    if (!path_matches(x, b->spec.target_path)) throw ShapeError("element off the rung summand");
    long long k = strip_path(x, b->spec.target_path).as_num();
    return wrap_path(b->spec.source_path(), ChainElement::rat(b->spec.section_coord(k)));
  }
  if (const auto* b = std::get_if<PreimageChoice>(&body)) {
    std::lock_guard<std::mutex> lock(b->memo->mu);
    auto it = b->memo->found.find(x);
    if (it != b->memo->found.end()) return it->second;
    const ChainPtr& dom = b->surjection->source;
    bool avoid_here = b->moved_point && elem_eq(source, x, *b->moved_point);
    for (std::uint64_t i = 0; i < b->budget; ++i) {
      ChainElement cand = ChainElement::num(0);
      try {
        cand = enumerate(dom, i);
      } catch (const std::out_of_range&) {
        throw std::invalid_argument("preimage choice: map is not surjective at " +
                                    element_text(x));
      }
      if (avoid_here && elem_eq(dom, cand, *b->moved_point)) continue;
      if (elem_eq(source, b->surjection->apply(cand), x)) {
        b->memo->found.emplace(x, cand);
        return cand;
      }
    }
    throw BudgetError("preimage search budget exceeded");
  }
  if (const auto* b = std::get_if<Dual>(&body)) {
    ChainElement flipped = reverse_element(source, x);
    ChainElement mapped = b->inner->apply(flipped);
    return reverse_element(b->inner->target, mapped);
  }
  throw std::logic_error("unhandled program node");
}

// ---------------------------------------------------------------------------
// factories

namespace {

ProgPtr make_prog(ChainPtr source, ChainPtr target, EndoProgram::Body body) {
  auto p = std::make_shared<EndoProgram>();
  p->source = std::move(source);
  p->target = std::move(target);
  p->body = std::move(body);
  return p;
}

void require_equal_chain(const ChainPtr& a, const ChainPtr& b, const char* what) {
  if (!equal(a, b)) throw std::invalid_argument(std::string("chain mismatch: ") + what);
}

}  // namespace

ProgPtr prog_identity(ChainPtr e) { return make_prog(e, e, EndoProgram::Identity{}); }

ProgPtr prog_const(ChainPtr source, ChainPtr target, ChainElement value) {
  validate_element(target, value);
  return make_prog(std::move(source), std::move(target), EndoProgram::Const{std::move(value)});
}

ProgPtr prog_compose(ProgPtr first, ProgPtr second) {
  require_equal_chain(first->target, second->source, "composition seam");
  ChainPtr s = first->source, t = second->target;
  return make_prog(std::move(s), std::move(t),
                   EndoProgram::Compose{std::move(first), std::move(second)});
}

ProgPtr prog_table(ChainPtr source, ChainPtr target, SumPath path,
                   std::vector<ChainElement> values) {
  ChainPtr sub = subtree_at(source, path);
  if (sub->kind == ChainKind::Finite) {
    if (values.size() != sub->count)
      throw std::invalid_argument("table map must cover the finite summand");
  } else if (sub->kind != ChainKind::Nat) {
    throw std::invalid_argument("table map needs a finite or N summand");
  }
  for (const auto& v : values) validate_element(target, v);
  return make_prog(std::move(source), std::move(target),
                   EndoProgram::TableMap{std::move(path), std::move(values)});
}

ProgPtr prog_succ_nat() {
  ChainPtr n = ChainExpr::nat();
  return make_prog(n, n, EndoProgram::SuccNat{});
}

ProgPtr prog_pred_clamp_nat() {
  ChainPtr n = ChainExpr::nat();
  return make_prog(n, n, EndoProgram::PredClampNat{});
}

ProgPtr prog_step_threshold(ChainPtr source, ChainPtr target, ChainElement pivot,
                            ChainElement low, ChainElement high) {
  validate_element(source, pivot);
  validate_element(target, low);
  validate_element(target, high);
  return make_prog(std::move(source), std::move(target),
                   EndoProgram::StepThreshold{std::move(pivot), std::move(low), std::move(high)});
}

ProgPtr prog_guarded(ChainPtr source, ChainPtr target, Bound guard, ProgPtr inner,
                     ChainElement fallback) {
  require_equal_chain(inner->source, source, "guarded inner source");
  require_equal_chain(inner->target, target, "guarded inner target");
  validate_element(source, guard.anchor);
  validate_element(target, fallback);
  return make_prog(std::move(source), std::move(target),
                   EndoProgram::GuardedCompose{std::move(guard), std::move(inner),
                                               std::move(fallback)});
}

ProgPtr prog_cut_split(Bound at, ProgPtr low, ProgPtr high) {
  require_equal_chain(low->source, high->source, "split sources");
  require_equal_chain(low->target, high->target, "split targets");
  validate_element(low->source, at.anchor);
  ChainPtr s = low->source, t = low->target;
  return make_prog(std::move(s), std::move(t),
                   EndoProgram::CutSplit{std::move(at), std::move(low), std::move(high)});
}

ProgPtr prog_sum_piece(SumPath at, ProgPtr left, ProgPtr right) {
  require_equal_chain(left->source, right->source, "piece sources");
  require_equal_chain(left->target, right->target, "piece targets");
  if (subtree_at(left->source, at)->kind != ChainKind::Sum)
    throw std::invalid_argument("sum piece dispatch path must reach a sum");
  ChainPtr s = left->source, t = left->target;
  return make_prog(std::move(s), std::move(t),
                   EndoProgram::SumPiece{std::move(at), std::move(left), std::move(right)});
}

ProgPtr prog_project(ChainPtr source, SumPath at) {
  ChainPtr t = subtree_at(source, at);
  return make_prog(std::move(source), std::move(t), EndoProgram::Project{std::move(at)});
}

ProgPtr prog_extend_identity(ChainPtr sum_chain, Side side, ProgPtr inner) {
  if (sum_chain->kind != ChainKind::Sum)
    throw std::invalid_argument("extend-identity needs a sum chain");
  const ChainPtr& part = side == Side::L ? sum_chain->left : sum_chain->right;
  require_equal_chain(inner->source, part, "extended summand");
  require_equal_chain(inner->target, part, "extended summand image");
  return make_prog(sum_chain, sum_chain, EndoProgram::ExtendIdentity{side, std::move(inner)});
}

ProgPtr prog_power(ProgPtr inner, unsigned exponent) {
  if (exponent < 1) throw std::invalid_argument("power needs exponent >= 1");
  require_equal_chain(inner->source, inner->target, "power of a non-endomorphism");
  ChainPtr s = inner->source;
  return make_prog(s, s, EndoProgram::Power{std::move(inner), exponent});
}

ProgPtr prog_dense_iso(Region a, Region b, IsoDirection dir) {
  auto table = std::make_shared<DenseIsoTable>(std::move(a), std::move(b));
  return prog_dense_iso_shared(std::move(table), dir);
}

ProgPtr prog_dense_iso_shared(std::shared_ptr<DenseIsoTable> table, IsoDirection dir) {
  ChainPtr s = dir == IsoDirection::Forward ? table->region_a().expr : table->region_b().expr;
  ChainPtr t = dir == IsoDirection::Forward ? table->region_b().expr : table->region_a().expr;
  return make_prog(std::move(s), std::move(t), EndoProgram::DenseIso{std::move(table), dir});
}

ProgPtr prog_collapse(ChainPtr e, std::optional<Bound> lo, std::optional<Bound> hi,
                      ChainElement point) {
  validate_element(e, point);
  if (lo) validate_element(e, lo->anchor);
  if (hi) validate_element(e, hi->anchor);
  return make_prog(e, e,
                   EndoProgram::CollapseToPoint{std::move(lo), std::move(hi), std::move(point)});
}

ProgPtr prog_staircase(StairSpec spec) {
  spec.validate();
  ChainPtr s = spec.source, t = spec.target;
  return make_prog(std::move(s), std::move(t), EndoProgram::Staircase{std::move(spec)});
}

ProgPtr prog_stair_section(StairSpec spec) {
  spec.validate();
  ChainPtr s = spec.target, t = spec.source;
  return make_prog(std::move(s), std::move(t), EndoProgram::StairSection{std::move(spec)});
}

ProgPtr prog_preimage_choice(ProgPtr surjection, std::optional<ChainElement> moved_point,
                             std::size_t budget) {
  ChainPtr s = surjection->target, t = surjection->source;
  if (moved_point) validate_element(s, *moved_point);
  auto memo = std::make_shared<EndoProgram::PreimageMemo>(s);
  return make_prog(std::move(s), std::move(t),
                   EndoProgram::PreimageChoice{std::move(surjection), std::move(moved_point),
                                               budget, std::move(memo)});
}

ProgPtr prog_dual(ChainPtr source, ChainPtr target, ProgPtr inner) {
  require_equal_chain(inner->source, normalize(ChainExpr::rev(source)), "dual source");
  require_equal_chain(inner->target, normalize(ChainExpr::rev(target)), "dual target");
  return make_prog(std::move(source), std::move(target), EndoProgram::Dual{std::move(inner)});
}

ProgPtr with_declared_image(ProgPtr p, std::vector<EndoProgram::ImagePiece> pieces) {
  auto q = std::make_shared<EndoProgram>(*p);
  q->declared_image = std::move(pieces);
  return q;
}

// ---------------------------------------------------------------------------
// image descriptors

namespace {

enum class RegionPos { Below, Inside, Above };

RegionPos region_position(const Region& r, const ChainElement& x) {
  if (r.contains(x)) return RegionPos::Inside;
  // off the path: the first diverging side tag decides the order
  const ChainElement* cur = &x;
  for (char c : r.path) {
    if (!cur->is_sum()) break;
    const auto& s = cur->as_sum();
    bool left = s.side == Side::L;
    if ((c == 'L') != left) return left ? RegionPos::Below : RegionPos::Above;
    cur = s.sub.get();
  }
  if (r.lo && below_bound(r.expr, x, *r.lo)) return RegionPos::Below;
  return RegionPos::Above;
}

std::optional<ChainElement> region_max(const Region& r) {
  if (r.hi && r.hi->mode == BoundMode::Weak) return r.hi->anchor;
  return std::nullopt;  // unbounded above or open cut: no attained maximum
}

std::optional<ChainElement> region_min(const Region& r) {
  if (r.lo && r.lo->mode == BoundMode::Strict) return r.lo->anchor;
  return std::nullopt;
}

}  // namespace

bool ImageQuery::contains(const ChainPtr& e, const ChainElement& x) const {
  for (const auto& piece : pieces) {
    if (piece.point && elem_eq(e, *piece.point, x)) return true;
    if (piece.region && piece.region->contains(x)) return true;
  }
  return false;
}

std::optional<ChainElement> ImageQuery::max_at_or_below(const ChainPtr& e,
                                                        const ChainElement& x) const {
  // pieces ascend; the topmost piece meeting x's down-set decides
  for (std::size_t i = pieces.size(); i-- > 0;) {
    const auto& piece = pieces[i];
    if (piece.point) {
      if (elem_le(e, *piece.point, x)) return *piece.point;
      continue;
    }
    switch (region_position(*piece.region, x)) {
      case RegionPos::Inside:
        return x;  // image regions are full intervals
      case RegionPos::Above:
        return region_max(*piece.region);  // nullopt: supremum not attained
      case RegionPos::Below:
        continue;
    }
  }
  return std::nullopt;
}

std::optional<ChainElement> ImageQuery::min_at_or_above(const ChainPtr& e,
                                                        const ChainElement& x) const {
  for (const auto& piece : pieces) {
    if (piece.point) {
      if (elem_le(e, x, *piece.point)) return *piece.point;
      continue;
    }
    switch (region_position(*piece.region, x)) {
      case RegionPos::Inside:
        return x;
      case RegionPos::Below:
        return region_min(*piece.region);
      case RegionPos::Above:
        continue;
    }
  }
  return std::nullopt;
}

ImageQuery image_of(const ProgPtr& p) {
  ImageQuery q;
  if (p->declared_image) {
    q.known = true;
    q.pieces = *p->declared_image;
    return q;
  }
  auto point = [](ChainElement x) {
    EndoProgram::ImagePiece piece;
    piece.point = std::move(x);
    return piece;
  };
  auto region = [](Region r) {
    EndoProgram::ImagePiece piece;
    piece.region = std::move(r);
    return piece;
  };
  if (std::get_if<EndoProgram::Identity>(&p->body) ||
      std::get_if<EndoProgram::PredClampNat>(&p->body)) {
    q.known = true;
    q.pieces.push_back(region(Region{p->target, "", std::nullopt, std::nullopt}));
    return q;
  }
  if (const auto* b = std::get_if<EndoProgram::Const>(&p->body)) {
    q.known = true;
    q.pieces.push_back(point(b->value));
    return q;
  }
  if (std::get_if<EndoProgram::SuccNat>(&p->body)) {
    q.known = true;
    q.pieces.push_back(region(
        Region{p->target, "", Bound::strict(ChainElement::num(2)), std::nullopt}));
    return q;
  }
  if (const auto* b = std::get_if<EndoProgram::Power>(&p->body)) {
    if (std::get_if<EndoProgram::SuccNat>(&b->inner->body)) {
      q.known = true;
      q.pieces.push_back(region(Region{
          p->target, "",
          Bound::strict(ChainElement::num(static_cast<long long>(b->exponent) + 1)),
          std::nullopt}));
      return q;
    }
    return q;
  }
  if (const auto* b = std::get_if<EndoProgram::TableMap>(&p->body)) {
    std::vector<ChainElement> vals = b->values;
    std::sort(vals.begin(), vals.end(), ElementLess{p->target});
    vals.erase(std::unique(vals.begin(), vals.end(),
                           [&](const ChainElement& u, const ChainElement& v) {
                             return elem_eq(p->target, u, v);
                           }),
               vals.end());
    q.known = true;
    for (auto& v : vals) q.pieces.push_back(point(std::move(v)));
    return q;
  }
  if (const auto* b = std::get_if<EndoProgram::StepThreshold>(&p->body)) {
    q.known = true;
    q.pieces.push_back(point(b->low));
    if (!elem_eq(p->target, b->low, b->high)) q.pieces.push_back(point(b->high));
    return q;
  }
  if (const auto* b = std::get_if<EndoProgram::DenseIso>(&p->body)) {
    q.known = true;
    q.pieces.push_back(region(b->dir == IsoDirection::Forward ? b->table->region_b()
                                                              : b->table->region_a()));
    return q;
  }
  return q;  // unknown
}

// ---------------------------------------------------------------------------
// serialization

namespace {

nlohmann::json bound_json(const Bound& b) {
  nlohmann::json j;
  j["anchor"] = element_text(b.anchor);
  j["mode"] = b.mode == BoundMode::Weak ? "weak" : b.mode == BoundMode::Strict ? "strict" : "sqrt2";
  if (b.mode == BoundMode::Sqrt2) j["coeff"] = rational_text(b.sqrt2_coeff);
  return j;
}

Bound bound_from_json(const ChainPtr& e, const nlohmann::json& j) {
  Bound b;
  b.anchor = parse_element(e, j.at("anchor").get<std::string>());
  std::string mode = j.at("mode").get<std::string>();
  if (mode == "weak")
    b.mode = BoundMode::Weak;
  else if (mode == "strict")
    b.mode = BoundMode::Strict;
  else if (mode == "sqrt2") {
    b.mode = BoundMode::Sqrt2;
    b.sqrt2_coeff = parse_rational(j.at("coeff").get<std::string>());
  } else {
    throw std::invalid_argument("unknown bound mode: " + mode);
  }
  return b;
}

nlohmann::json region_json(const Region& r) {
  nlohmann::json j;
  j["expr"] = print_chain(r.expr);
  j["path"] = r.path;
  if (r.lo) j["lo"] = bound_json(*r.lo);
  if (r.hi) j["hi"] = bound_json(*r.hi);
  return j;
}

Region region_from_json(const nlohmann::json& j) {
  Region r;
  r.expr = parse_chain(j.at("expr").get<std::string>());
  r.path = j.at("path").get<std::string>();
  if (j.contains("lo")) r.lo = bound_from_json(r.expr, j.at("lo"));
  if (j.contains("hi")) r.hi = bound_from_json(r.expr, j.at("hi"));
  return r;
}

nlohmann::json stair_json(const StairSpec& s) {
  nlohmann::json j;
  j["source"] = print_chain(s.source);
  j["target"] = print_chain(s.target);
  j["lo"] = bound_json(s.lo);
  j["hi"] = bound_json(s.hi);
  j["onto"] = s.kind == StairKind::OntoNat ? "N" : s.kind == StairKind::OntoNatStar ? "N*" : "Z";
  j["target_path"] = s.target_path;
  return j;
}

StairSpec stair_from_json(const nlohmann::json& j) {
  StairSpec s;
  s.source = parse_chain(j.at("source").get<std::string>());
  s.target = parse_chain(j.at("target").get<std::string>());
  s.lo = bound_from_json(s.source, j.at("lo"));
  s.hi = bound_from_json(s.source, j.at("hi"));
  std::string onto = j.at("onto").get<std::string>();
  s.kind = onto == "N" ? StairKind::OntoNat : onto == "N*" ? StairKind::OntoNatStar
                                                           : StairKind::OntoInt;
  s.target_path = j.at("target_path").get<std::string>();
  return s;
}

}  // namespace

nlohmann::json EndoProgram::to_json() const {
  nlohmann::json j;
  j["source"] = print_chain(source);
  j["target"] = print_chain(target);
  if (std::get_if<Identity>(&body)) j["kind"] = "identity";
  if (const auto* b = std::get_if<Const>(&body)) {
    j["kind"] = "const";
    j["value"] = element_text(b->value);
  }
  if (const auto* b = std::get_if<Compose>(&body)) {
    j["kind"] = "compose";
    j["first"] = b->first->to_json();
    j["second"] = b->second->to_json();
  }
  if (const auto* b = std::get_if<TableMap>(&body)) {
    j["kind"] = "table";
    j["path"] = b->path;
    nlohmann::json vals = nlohmann::json::array();
    for (const auto& v : b->values) vals.push_back(element_text(v));
    j["values"] = vals;
  }
  if (std::get_if<SuccNat>(&body)) j["kind"] = "succ";
  if (std::get_if<PredClampNat>(&body)) j["kind"] = "pred_clamp";
  if (const auto* b = std::get_if<StepThreshold>(&body)) {
    j["kind"] = "step";
    j["pivot"] = element_text(b->pivot);
    j["low"] = element_text(b->low);
    j["high"] = element_text(b->high);
  }
  if (const auto* b = std::get_if<GuardedCompose>(&body)) {
    j["kind"] = "guarded";
    j["guard"] = bound_json(b->guard);
    j["inner"] = b->inner->to_json();
    j["fallback"] = element_text(b->fallback);
  }
  if (const auto* b = std::get_if<CutSplit>(&body)) {
    j["kind"] = "split";
    j["at"] = bound_json(b->at);
    j["low"] = b->low->to_json();
    j["high"] = b->high->to_json();
  }
  if (const auto* b = std::get_if<SumPiece>(&body)) {
    j["kind"] = "sum_piece";
    j["at"] = b->at;
    j["left"] = b->left->to_json();
    j["right"] = b->right->to_json();
  }
  if (const auto* b = std::get_if<Project>(&body)) {
    j["kind"] = "project";
    j["at"] = b->at;
  }
  if (const auto* b = std::get_if<ExtendIdentity>(&body)) {
    j["kind"] = "extend_identity";
    j["side"] = b->side == Side::L ? "L" : "R";
    j["inner"] = b->inner->to_json();
  }
  if (const auto* b = std::get_if<Power>(&body)) {
    j["kind"] = "power";
    j["exponent"] = b->exponent;
    j["inner"] = b->inner->to_json();
  }
  if (const auto* b = std::get_if<DenseIso>(&body)) {
    j["kind"] = "dense_iso";
    j["a"] = region_json(b->table->region_a());
    j["b"] = region_json(b->table->region_b());
    j["dir"] = b->dir == IsoDirection::Forward ? "fwd" : "bwd";
  }
  if (const auto* b = std::get_if<CollapseToPoint>(&body)) {
    j["kind"] = "collapse";
    if (b->lo) j["lo"] = bound_json(*b->lo);
    if (b->hi) j["hi"] = bound_json(*b->hi);
    j["point"] = element_text(b->point);
  }
  if (const auto* b = std::get_if<Staircase>(&body)) {
    j["kind"] = "staircase";
    j["spec"] = stair_json(b->spec);
  }
  if (const auto* b = std::get_if<StairSection>(&body)) {
    j["kind"] = "stair_section";
    j["spec"] = stair_json(b->spec);
  }
  if (const auto* b = std::get_if<PreimageChoice>(&body)) {
    j["kind"] = "preimage_choice";
    j["surjection"] = b->surjection->to_json();
    if (b->moved_point) j["moved_point"] = element_text(*b->moved_point);
    j["budget"] = b->budget;
  }
  if (const auto* b = std::get_if<Dual>(&body)) {
    j["kind"] = "dual";
    j["inner"] = b->inner->to_json();
  }
  if (declared_image) {
    nlohmann::json pieces = nlohmann::json::array();
    for (const auto& piece : *declared_image) {
      nlohmann::json pj;
      if (piece.point) pj["point"] = element_text(*piece.point);
      if (piece.region) pj["region"] = region_json(*piece.region);
      pieces.push_back(pj);
    }
    j["image"] = pieces;
  }
  return j;
}

ProgPtr EndoProgram::from_json(const nlohmann::json& j) {
  ChainPtr source = parse_chain(j.at("source").get<std::string>());
  ChainPtr target = parse_chain(j.at("target").get<std::string>());
  std::string kind = j.at("kind").get<std::string>();
  ProgPtr p;
  if (kind == "identity") {
    p = prog_identity(source);
  } else if (kind == "const") {
    p = prog_const(source, target, parse_element(target, j.at("value").get<std::string>()));
  } else if (kind == "compose") {
    p = prog_compose(from_json(j.at("first")), from_json(j.at("second")));
  } else if (kind == "table") {
    std::vector<ChainElement> values;
    for (const auto& v : j.at("values")) values.push_back(parse_element(target, v.get<std::string>()));
    p = prog_table(source, target, j.at("path").get<std::string>(), std::move(values));
  } else if (kind == "succ") {
    p = prog_succ_nat();
  } else if (kind == "pred_clamp") {
    p = prog_pred_clamp_nat();
  } else if (kind == "step") {
    p = prog_step_threshold(source, target,
                            parse_element(source, j.at("pivot").get<std::string>()),
                            parse_element(target, j.at("low").get<std::string>()),
                            parse_element(target, j.at("high").get<std::string>()));
  } else if (kind == "guarded") {
    p = prog_guarded(source, target, bound_from_json(source, j.at("guard")),
                     from_json(j.at("inner")),
                     parse_element(target, j.at("fallback").get<std::string>()));
  } else if (kind == "split") {
    ProgPtr low = from_json(j.at("low"));
    p = prog_cut_split(bound_from_json(low->source, j.at("at")), low, from_json(j.at("high")));
  } else if (kind == "sum_piece") {
    p = prog_sum_piece(j.at("at").get<std::string>(), from_json(j.at("left")),
                       from_json(j.at("right")));
  } else if (kind == "project") {
    p = prog_project(source, j.at("at").get<std::string>());
  } else if (kind == "extend_identity") {
    p = prog_extend_identity(source, j.at("side").get<std::string>() == "L" ? Side::L : Side::R,
                             from_json(j.at("inner")));
  } else if (kind == "power") {
    p = prog_power(from_json(j.at("inner")), j.at("exponent").get<unsigned>());
  } else if (kind == "dense_iso") {
    p = prog_dense_iso(region_from_json(j.at("a")), region_from_json(j.at("b")),
                       j.at("dir").get<std::string>() == "fwd" ? IsoDirection::Forward
                                                               : IsoDirection::Backward);
  } else if (kind == "collapse") {
    std::optional<Bound> lo, hi;
    if (j.contains("lo")) lo = bound_from_json(source, j.at("lo"));
    if (j.contains("hi")) hi = bound_from_json(source, j.at("hi"));
    p = prog_collapse(source, std::move(lo), std::move(hi),
                      parse_element(target, j.at("point").get<std::string>()));
  } else if (kind == "staircase") {
    p = prog_staircase(stair_from_json(j.at("spec")));
  } else if (kind == "stair_section") {
    p = prog_stair_section(stair_from_json(j.at("spec")));
  } else if (kind == "preimage_choice") {
    std::optional<ChainElement> moved;
    if (j.contains("moved_point"))
      moved = parse_element(source, j.at("moved_point").get<std::string>());
    p = prog_preimage_choice(from_json(j.at("surjection")), std::move(moved),
                             j.at("budget").get<std::size_t>());
  } else if (kind == "dual") {
    p = prog_dual(source, target, from_json(j.at("inner")));
  } else {
    throw std::invalid_argument("unknown program kind: " + kind);
  }
  if (j.contains("image")) {
    std::vector<EndoProgram::ImagePiece> pieces;
    for (const auto& pj : j.at("image")) {
      EndoProgram::ImagePiece piece;
      if (pj.contains("point"))
        piece.point = parse_element(target, pj.at("point").get<std::string>());
      if (pj.contains("region")) piece.region = region_from_json(pj.at("region"));
      pieces.push_back(std::move(piece));
    }
    p = with_declared_image(p, std::move(pieces));
  }
  return p;
}

}  // namespace chainmon
