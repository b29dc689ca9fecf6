#include "chainmon/shiftability.hpp"

#include <algorithm>

namespace chainmon {

std::string answer_text(Answer a) {
  switch (a) {
    case Answer::Yes:
      return "Yes";
    case Answer::No:
      return "No";
    default:
      return "Unknown";
  }
}

nlohmann::json RuleTrace::to_json() const {
  nlohmann::json j;
  j["rule"] = rule;
  j["citation"] = citation;
  nlohmann::json kids = nlohmann::json::array();
  for (const auto& c : children) kids.push_back(c.to_json());
  j["children"] = kids;
  return j;
}

nlohmann::json Verdict::to_json() const {
  nlohmann::json j;
  j["answer"] = answer_text(answer);
  j["side"] = side == Side::L ? "min" : "max";
  j["trace"] = trace.to_json();
  if (witness) j["witness"] = witness->to_json();
  return j;
}

namespace {

bool is_fin(const ChainPtr& e) { return e->kind == ChainKind::Finite; }
bool is_kind(const ChainPtr& e, ChainKind k) { return e->kind == k; }

// the bounded discrete blocks D for which D + R is min-shiftable: finite
// chains and the chains with both endpoints built from one copy of N, N*
// or Z (finite padding is absorbed by isomorphism)
bool bounded_discrete_block(const std::vector<ChainPtr>& sp) {
  if (sp.empty()) return false;
  if (sp.size() == 1) return is_fin(sp[0]);
  if (sp.size() == 2) {
    if (is_kind(sp[0], ChainKind::Nat) && is_fin(sp[1])) return true;           // N + m
    if (is_fin(sp[0]) && is_kind(sp[1], ChainKind::NatStar)) return true;       // k + N*
    return false;
  }
  if (sp.size() == 3) {
    if (is_fin(sp[0]) && is_kind(sp[1], ChainKind::Nat) && is_fin(sp[2])) return true;
    if (is_fin(sp[0]) && is_kind(sp[1], ChainKind::NatStar) && is_fin(sp[2])) return true;
    if (is_fin(sp[0]) && is_kind(sp[1], ChainKind::Int) && is_fin(sp[2])) return true;
    return false;
  }
  return false;
}

// chains isomorphic to one of their proper terminal segments
bool terminal_self_similar(const ChainPtr& e) {
  auto sp = sum_spine(e);
  if (sp.size() == 1 && is_kind(sp[0], ChainKind::Nat)) return true;
  if (sp.size() == 2 && is_fin(sp[0]) && is_kind(sp[1], ChainKind::Nat)) return true;
  if (sp.size() == 2 && is_fin(sp[0]) && sp[0]->count == 1 &&
      (is_kind(sp[1], ChainKind::Rat) || is_kind(sp[1], ChainKind::Real)))
    return true;
  return false;
}

// the rigid shapes: 1+Z, 1+Z+1, 1+Z+R, 1+Z+R+Z+1 (finite padding absorbed)
bool rigid_negative_pattern(const std::vector<ChainPtr>& sp) {
  auto k = [&](std::size_t i, ChainKind kk) { return is_kind(sp[i], kk); };
  if (sp.size() == 2) return is_fin(sp[0]) && k(1, ChainKind::Int);
  if (sp.size() == 3) {
    if (is_fin(sp[0]) && k(1, ChainKind::Int) && is_fin(sp[2])) return true;
    if (is_fin(sp[0]) && k(1, ChainKind::Int) && k(2, ChainKind::Real)) return true;
    return false;
  }
  if (sp.size() == 5)
    return is_fin(sp[0]) && k(1, ChainKind::Int) && k(2, ChainKind::Real) &&
           k(3, ChainKind::Int) && is_fin(sp[4]);
  return false;
}

RuleTrace leaf(std::string rule, std::string citation) {
  return RuleTrace{std::move(rule), std::move(citation), {}};
}

Verdict yes(Side side, RuleTrace t) { return Verdict{Answer::Yes, side, std::move(t), std::nullopt}; }
Verdict no(Side side, RuleTrace t) { return Verdict{Answer::No, side, std::move(t), std::nullopt}; }

Verdict min_shiftable_norm(const ChainPtr& e);

// R3: some proper initial block of the sum is already min-shiftable
std::optional<Verdict> try_prefix_rule(const ChainPtr& e, const std::vector<ChainPtr>& sp) {
  for (std::size_t j = 1; j < sp.size(); ++j) {
    ChainPtr prefix = sum_of(std::vector<ChainPtr>(sp.begin(), sp.begin() + j));
    Verdict sub = min_shiftable_norm(prefix);
    if (sub.answer == Answer::Yes) {
      RuleTrace t = leaf("prefix-shift",
                         "a sum with a min-shiftable initial block is min-shiftable");
      t.children.push_back(sub.trace);
      return yes(Side::L, std::move(t));
    }
  }
  return std::nullopt;
}

Verdict min_shiftable_norm(const ChainPtr& e) {
  Attributes a = attributes(e);
  if (!a.has_min)
    return no(Side::L, leaf("no-minimum", "a chain without a least element cannot shift it"));
  if (a.cardinality == Card::Finite)
    return no(Side::L,
              leaf("finite", "a finite chain is not a quotient of a strictly shorter one"));
  if (a.well_ordered)
    return yes(Side::L, leaf("well-ordered", "infinite well-ordered chains are min-shiftable"));
  if (a.cardinality == Card::CountablyInfinite && !a.scattered)
    return yes(Side::L, leaf("countable-dense",
                             "countable non-scattered chains with a least element are "
                             "min-shiftable"));

  auto sp = sum_spine(e);
  if (auto v = try_prefix_rule(e, sp)) return *v;

  if (sp.size() >= 2 && is_fin(sp[0])) {
    ChainPtr rest = sum_of(std::vector<ChainPtr>(sp.begin() + 1, sp.end()));
    if (attributes(rest).has_min) {
      Verdict sub = min_shiftable_norm(rest);
      RuleTrace t = leaf("finite-prefix",
                         "a finite prefix transfers min-shiftability to and from the rest");
      t.children.push_back(sub.trace);
      return Verdict{sub.answer, Side::L, std::move(t), std::nullopt};
    }
  }

  if (sp.size() >= 2 && is_kind(sp.back(), ChainKind::Real) &&
      bounded_discrete_block(std::vector<ChainPtr>(sp.begin(), sp.end() - 1)))
    return yes(Side::L, leaf("real-tail",
                             "a discrete block with both endpoints followed by the reals is "
                             "min-shiftable"));

  if (e->kind == ChainKind::LexProd) {
    Attributes la = attributes(e->left), ra = attributes(e->right);
    if (la.has_min && ra.has_min) {
      Verdict sub = min_shiftable_norm(e->right);
      if (sub.answer == Answer::Yes) {
        RuleTrace t = leaf("product-right",
                           "a lexicographic product with min-shiftable second factor is "
                           "min-shiftable");
        t.children.push_back(sub.trace);
        return yes(Side::L, std::move(t));
      }
      if (terminal_self_similar(e->left))
        return yes(Side::L, leaf("product-left",
                                 "a first factor isomorphic to a proper tail of itself shifts "
                                 "the product"));
    }
  }

  if (rigid_negative_pattern(sp))
    return no(Side::L, leaf("rigid-tail",
                            "the shapes 1+Z, 1+Z+1, 1+Z+R and 1+Z+R+Z+1 admit no quotient "
                            "from a proper tail"));

  return Verdict{Answer::Unknown, Side::L,
                 leaf("no-rule", "no decision rule covers this shape"), std::nullopt};
}

}  // namespace

Verdict min_shiftable(const ChainPtr& e) { return min_shiftable_norm(normalize(e)); }

Verdict max_shiftable(const ChainPtr& e) {
  Verdict v = min_shiftable_norm(normalize(ChainExpr::rev(e)));
  RuleTrace t = leaf("dualized", "max-shiftability is min-shiftability of the reversed chain");
  t.children.push_back(v.trace);
  return Verdict{v.answer, Side::R, std::move(t), std::nullopt};
}

Verdict endpoint_shiftable(const ChainPtr& e) {
  Verdict lo = min_shiftable(e);
  Verdict hi = max_shiftable(e);
  Answer combined;
  if (lo.answer == Answer::Yes || hi.answer == Answer::Yes)
    combined = Answer::Yes;
  else if (lo.answer == Answer::No && hi.answer == Answer::No)
    combined = Answer::No;
  else
    combined = Answer::Unknown;
  RuleTrace t = leaf("endpoint", "an endpoint shift on either side suffices");
  t.children.push_back(lo.trace);
  t.children.push_back(hi.trace);
  return Verdict{combined, lo.answer == Answer::Yes ? Side::L : Side::R, std::move(t),
                 std::nullopt};
}

// ---------------------------------------------------------------------------
// witnesses

namespace {

WitnessPair witness_nat() {
  WitnessPair w;
  w.chain = ChainExpr::nat();
  w.side = Side::L;
  w.z = ChainElement::num(1);
  w.alpha = prog_succ_nat();
  w.beta = prog_pred_clamp_nat();
  w.alpha = with_declared_image(
      w.alpha, {EndoProgram::ImagePiece{
                   std::nullopt,
                   Region{w.chain, "", Bound::strict(ChainElement::num(2)), std::nullopt}}});
  return w;
}

// witness for Sum(N, D): shift the leading copy of N, fix D pointwise
WitnessPair witness_nat_head(const ChainPtr& e) {
  WitnessPair w;
  w.chain = e;
  w.side = Side::L;
  w.z = ChainElement::in_side(Side::L, ChainElement::num(1));
  w.alpha = prog_extend_identity(e, Side::L, prog_succ_nat());
  w.beta = prog_extend_identity(e, Side::L, prog_pred_clamp_nat());
  return w;
}

ChainElement fin_el(Side, long long) = delete;

// the finite-part ladders shared by the k+Q, k+N*+Q and k+Z+Q witnesses:
// alpha pushes (L,i) to (L,i+1) with (L,k) overflowing to `overflow`,
// beta pulls (L,i) back down with (L,1) fixed
std::vector<ChainElement> alpha_ladder_values(std::uint64_t k, const ChainElement& overflow) {
  std::vector<ChainElement> vals;
  for (std::uint64_t i = 1; i < k; ++i)
    vals.push_back(ChainElement::in_side(Side::L, ChainElement::num(static_cast<long long>(i + 1))));
  vals.push_back(overflow);
  return vals;
}

std::vector<ChainElement> beta_ladder_values(std::uint64_t k) {
  std::vector<ChainElement> vals;
  vals.push_back(ChainElement::in_side(Side::L, ChainElement::num(1)));
  for (std::uint64_t i = 2; i <= k; ++i)
    vals.push_back(ChainElement::in_side(Side::L, ChainElement::num(static_cast<long long>(i - 1))));
  return vals;
}

// k + Q: collapse everything at or below a pivot onto the finite part and
// map the rest isomorphically; the right unit embeds into the tail
WitnessPair witness_fin_rat(const ChainPtr& e, std::uint64_t k) {
  ChainElement pivot = ChainElement::in_side(Side::R, ChainElement::rat(Rational(0)));
  ChainElement top = ChainElement::in_side(Side::L, ChainElement::num(static_cast<long long>(k)));
  Region above{e, "R", Bound::weak(pivot), std::nullopt};
  Region whole{e, "R", std::nullopt, std::nullopt};
  auto table = std::make_shared<DenseIsoTable>(above, whole);
  ProgPtr iso_fwd = prog_dense_iso_shared(table, IsoDirection::Forward);
  ProgPtr iso_bwd = prog_dense_iso_shared(table, IsoDirection::Backward);

  ProgPtr beta = prog_sum_piece(
      "", prog_table(e, e, "L", beta_ladder_values(k)),
      prog_cut_split(Bound::weak(pivot), prog_const(e, e, top), iso_fwd));
  ProgPtr alpha = prog_sum_piece("", prog_table(e, e, "L", alpha_ladder_values(k, pivot)), iso_bwd);

  std::vector<EndoProgram::ImagePiece> image;
  for (std::uint64_t i = 2; i <= k; ++i)
    image.push_back(EndoProgram::ImagePiece{
        ChainElement::in_side(Side::L, ChainElement::num(static_cast<long long>(i))),
        std::nullopt});
  image.push_back(EndoProgram::ImagePiece{
      std::nullopt, Region{e, "R", Bound::strict(pivot), std::nullopt}});
  alpha = with_declared_image(alpha, std::move(image));

  WitnessPair w;
  w.chain = e;
  w.side = Side::L;
  w.z = ChainElement::in_side(Side::L, ChainElement::num(1));
  w.alpha = alpha;
  w.beta = beta;
  return w;
}

// k + N* + Q and k + Z + Q: the discrete middle is covered by a staircase
// quotient of a rational interval; the tail beyond the interval maps onto
// the whole dense part
WitnessPair witness_fin_discrete_rat(const ChainPtr& e, std::uint64_t k, StairKind kind) {
  auto rat_point = [&](Rational q) {
    return ChainElement::in_side(Side::R,
                                 ChainElement::in_side(Side::R, ChainElement::rat(std::move(q))));
  };
  ChainElement u = rat_point(Rational(0));
  ChainElement top = ChainElement::in_side(Side::L, ChainElement::num(static_cast<long long>(k)));

  Bound interval_top = kind == StairKind::OntoNatStar ? Bound::weak(rat_point(Rational(1)))
                                                      : Bound::sqrt2(u, Rational(1));
  StairSpec spec{e, e, Bound::weak(u), interval_top, kind, "RL"};
  ProgPtr stair = prog_staircase(spec);
  ProgPtr section = prog_stair_section(spec);

  Region beyond{e, "RR", interval_top, std::nullopt};
  Region whole{e, "RR", std::nullopt, std::nullopt};
  auto table = std::make_shared<DenseIsoTable>(beyond, whole);
  ProgPtr iso_fwd = prog_dense_iso_shared(table, IsoDirection::Forward);
  ProgPtr iso_bwd = prog_dense_iso_shared(table, IsoDirection::Backward);

  ProgPtr q_piece_beta = prog_cut_split(
      Bound::weak(u), prog_const(e, e, top),
      prog_cut_split(interval_top, stair, iso_fwd));
  ProgPtr beta = prog_sum_piece(
      "", prog_table(e, e, "L", beta_ladder_values(k)),
      prog_sum_piece("R", prog_const(e, e, top), q_piece_beta));

  ProgPtr alpha = prog_sum_piece(
      "", prog_table(e, e, "L", alpha_ladder_values(k, u)),
      prog_sum_piece("R", section, iso_bwd));

  WitnessPair w;
  w.chain = e;
  w.side = Side::L;
  w.z = ChainElement::in_side(Side::L, ChainElement::num(1));
  w.alpha = alpha;
  w.beta = beta;
  return w;
}

// k + C': push the finite part along the orbit of z' under alpha', and act
// by alpha'^(k+1) beyond it; beta inverts via the matching interval splits
WitnessPair orbit_extend(const ChainPtr& e, std::uint64_t k, const WitnessPair& inner) {
  const ChainPtr& tail = e->right;
  std::vector<ChainElement> orbit;  // t_1 .. t_{k+1}
  ChainElement cur = inner.z;
  for (std::uint64_t i = 0; i <= k; ++i) {
    cur = inner.alpha->apply(cur);
    orbit.push_back(cur);
  }

  std::vector<ChainElement> alpha_vals;
  for (std::uint64_t i = 0; i < k; ++i)
    alpha_vals.push_back(ChainElement::in_side(Side::R, orbit[i]));
  ProgPtr alpha = prog_sum_piece(
      "", prog_table(e, e, "L", std::move(alpha_vals)),
      prog_extend_identity(e, Side::R, prog_power(inner.alpha, static_cast<unsigned>(k + 1))));

  ProgPtr acc = prog_extend_identity(e, Side::R, prog_power(inner.beta, static_cast<unsigned>(k + 1)));
  for (std::uint64_t j = k + 1; j >= 2; --j) {
    ChainElement split = ChainElement::in_side(Side::R, orbit[j - 1]);  // t_j
    ChainElement value =
        ChainElement::in_side(Side::L, ChainElement::num(static_cast<long long>(j - 1)));
    acc = prog_cut_split(Bound::strict(split), prog_const(e, e, value), acc);
  }
  ProgPtr beta = prog_sum_piece(
      "", prog_const(e, e, ChainElement::in_side(Side::L, ChainElement::num(1))), acc);
  (void)tail;

  WitnessPair w;
  w.chain = e;
  w.side = Side::L;
  w.z = ChainElement::in_side(Side::L, ChainElement::num(1));
  w.alpha = alpha;
  w.beta = beta;
  return w;
}

WitnessPair build_min_witness(const ChainPtr& e) {
  if (contains_real(e))
    throw std::invalid_argument("witness construction needs an R-free chain");
  if (e->kind == ChainKind::Nat) return witness_nat();

  auto sp = sum_spine(e);
  if (sp.size() >= 2 && is_kind(sp[0], ChainKind::Nat)) return witness_nat_head(e);

  if (sp.size() == 2 && is_fin(sp[0]) && is_kind(sp[1], ChainKind::Rat))
    return witness_fin_rat(e, sp[0]->count);
  if (sp.size() == 3 && is_fin(sp[0]) && is_kind(sp[1], ChainKind::NatStar) &&
      is_kind(sp[2], ChainKind::Rat))
    return witness_fin_discrete_rat(e, sp[0]->count, StairKind::OntoNatStar);
  if (sp.size() == 3 && is_fin(sp[0]) && is_kind(sp[1], ChainKind::Int) &&
      is_kind(sp[2], ChainKind::Rat))
    return witness_fin_discrete_rat(e, sp[0]->count, StairKind::OntoInt);

  if (sp.size() >= 2 && is_fin(sp[0])) {
    ChainPtr rest = sum_of(std::vector<ChainPtr>(sp.begin() + 1, sp.end()));
    if (attributes(rest).has_min)
      return orbit_extend(e, sp[0]->count, build_min_witness(rest));
  }
  throw std::invalid_argument(
      "no constructive witness for this shape (supported: N and N-headed sums, k+Q, "
      "k+N*+Q, k+Z+Q, and finite prefixes of supported shapes)");
}

}  // namespace

WitnessPair build_witness(const ChainPtr& raw, Side side) {
  ChainPtr e = normalize(raw);
  if (side == Side::L) {
    if (min_shiftable(e).answer != Answer::Yes)
      throw std::invalid_argument("witness requires a Yes verdict on the min side");
    return build_min_witness(e);
  }
  ChainPtr f = normalize(ChainExpr::rev(e));
  if (min_shiftable(f).answer != Answer::Yes)
    throw std::invalid_argument("witness requires a Yes verdict on the max side");
  WitnessPair inner = build_min_witness(f);
  WitnessPair w;
  w.chain = e;
  w.side = Side::R;
  w.z = reverse_element(f, inner.z);
  w.alpha = prog_dual(e, e, inner.alpha);
  w.beta = prog_dual(e, e, inner.beta);
  return w;
}

ShiftForms forms_from_surjection(const ChainPtr& e, const ChainElement& z, ProgPtr beta) {
  validate_element(e, z);
  ProgPtr alpha = prog_preimage_choice(beta, z);
  ChainElement moved = ChainElement::num(0);
  try {
    moved = alpha->apply(z);
  } catch (const std::exception&) {
    throw std::invalid_argument("the z-preimage of the surjection is only {z}");
  }
  return ShiftForms{std::move(beta), std::move(alpha), std::move(moved)};
}

ShiftForms forms_from_right_unit(const ChainPtr& e, const ChainElement& z, ProgPtr alpha,
                                 ProgPtr beta) {
  validate_element(e, z);
  if (!beta) throw std::invalid_argument("inverse query unsupported: supply a right inverse");
  ChainElement moved = alpha->apply(z);
  if (elem_eq(e, moved, z))
    throw std::invalid_argument("the map fixes z; it witnesses no endpoint shift");
  return ShiftForms{std::move(beta), std::move(alpha), std::move(moved)};
}

std::vector<RuleFire> probe_min_rules(const ChainPtr& raw) {
  ChainPtr e = normalize(raw);
  Attributes a = attributes(e);
  std::vector<RuleFire> fires;
  if (!a.has_min) fires.push_back({"no-minimum", Answer::No});
  if (a.cardinality == Card::Finite) fires.push_back({"finite", Answer::No});
  if (a.cardinality != Card::Finite && a.well_ordered)
    fires.push_back({"well-ordered", Answer::Yes});
  if (a.cardinality == Card::CountablyInfinite && !a.scattered && a.has_min)
    fires.push_back({"countable-dense", Answer::Yes});

  auto sp = sum_spine(e);
  for (std::size_t j = 1; j < sp.size(); ++j) {
    ChainPtr prefix = sum_of(std::vector<ChainPtr>(sp.begin(), sp.begin() + j));
    if (min_shiftable(prefix).answer == Answer::Yes) {
      fires.push_back({"prefix-shift", Answer::Yes});
      break;
    }
  }
  if (sp.size() >= 2 && is_fin(sp[0])) {
    ChainPtr rest = sum_of(std::vector<ChainPtr>(sp.begin() + 1, sp.end()));
    if (attributes(rest).has_min) {
      Answer sub = min_shiftable(rest).answer;
      if (sub != Answer::Unknown) fires.push_back({"finite-prefix", sub});
    }
  }
  if (sp.size() >= 2 && is_kind(sp.back(), ChainKind::Real) &&
      bounded_discrete_block(std::vector<ChainPtr>(sp.begin(), sp.end() - 1)))
    fires.push_back({"real-tail", Answer::Yes});
  if (e->kind == ChainKind::LexProd) {
    Attributes la = attributes(e->left), ra = attributes(e->right);
    if (la.has_min && ra.has_min &&
        (min_shiftable(e->right).answer == Answer::Yes || terminal_self_similar(e->left)))
      fires.push_back({"product", Answer::Yes});
  }
  if (rigid_negative_pattern(sp)) fires.push_back({"rigid-tail", Answer::No});
  return fires;
}

}  // namespace chainmon
