#include "chainmon/classifier.hpp"

#include <algorithm>
#include <random>

namespace chainmon {

nlohmann::json DiameterReport::to_json() const {
  nlohmann::json j;
  j["left"] = left;
  if (right)
    j["right"] = *right;
  else {
    j["right"] = nullptr;
    j["right_in"] = "{2,3}";
  }
  j["basis"] = basis.to_json();
  return j;
}

DiameterReport diameters(const ChainPtr& raw) {
  ChainPtr e = normalize(raw);
  Attributes a = attributes(e);
  DiameterReport r;
  if (a.cardinality == Card::Finite && a.finite_count <= 1) {
    r.left = 0;
    r.right = 0;
    r.basis = RuleTrace{"trivial", "the endomorphism monoid of a chain with at most one point "
                                   "is trivial", {}};
    return r;
  }
  if (a.cardinality == Card::Finite) {
    r.left = 1;
    r.right = 1;
    r.basis = RuleTrace{"finite", "finite nontrivial monoids have left and right diameter 1", {}};
    return r;
  }
  r.left = 2;
  Verdict ep = endpoint_shiftable(e);
  RuleTrace basis{"infinite", "infinite chains have left diameter 2 and right diameter 2 or 3, "
                              "with 2 exactly for endpoint-shiftable chains", {}};
  basis.children.push_back(ep.trace);
  r.basis = std::move(basis);
  switch (ep.answer) {
    case Answer::Yes:
      r.right = 2;
      break;
    case Answer::No:
      r.right = 3;
      break;
    case Answer::Unknown:
      r.right = std::nullopt;
      break;
  }
  return r;
}

FiniteLink left_constant_link(const EndMonoid& em, std::size_t theta, std::size_t phi,
                              std::size_t x) {
  const FiniteMonoid& s = em.monoid;
  std::size_t one = em.identity();
  std::size_t cx = em.constant(x);
  FiniteLink link;
  link.side = CongSide::Left;
  link.gens = {one, cx};
  if (theta != phi) {
    // theta = theta 1, theta c_x = phi c_x (both collapse to c_x), phi 1 = phi
    link.seq = {{one, cx, theta}, {cx, one, phi}};
  }
  link.valid = validate_usequence(s, PairSet::from_subset(link.gens), CongSide::Left, theta, phi,
                                  link.seq);
  return link;
}

FiniteLink right_threshold_link(const EndMonoid& em, std::size_t theta, std::size_t phi,
                                std::size_t x, std::size_t y) {
  if (!(1 <= x && x < y && y <= em.n))
    throw std::invalid_argument("threshold link needs points 1 <= x < y <= n");
  const FiniteMonoid& s = em.monoid;
  std::size_t one = em.identity();
  std::size_t cx = em.constant(x), cy = em.constant(y);

  bool swapped = em.apply(theta, x) > em.apply(phi, x);
  std::size_t lo = swapped ? phi : theta, hi = swapped ? theta : phi;

  // the two-level map: x-theta below the threshold, x-phi above it
  std::vector<std::uint8_t> vals(em.n);
  for (std::size_t w = 1; w <= em.n; ++w)
    vals[w - 1] = static_cast<std::uint8_t>(w <= x ? em.apply(lo, x) : em.apply(hi, x));
  std::size_t gamma = em.index_of(vals);

  std::vector<USeqTriple> seq = {{one, cx, lo}, {cx, cy, gamma}, {cx, one, hi}};
  if (swapped) {
    std::reverse(seq.begin(), seq.end());
    for (auto& t : seq) std::swap(t.u, t.v);
  }

  FiniteLink link;
  link.side = CongSide::Right;
  link.gens = {one, cx, cy};
  link.seq = std::move(seq);
  link.valid = validate_usequence(s, PairSet::from_subset(link.gens), CongSide::Right, theta, phi,
                                  link.seq);
  return link;
}

SampledLink right_witness_link(const ChainPtr& e, const ProgPtr& theta, const WitnessPair& w,
                               const SampleSpec& spec) {
  if (!equal(theta->source, e) || !equal(theta->target, e) || !equal(w.chain, e))
    throw std::invalid_argument("witness link needs endomorphisms of the witness chain");
  if (w.side != Side::L)
    throw std::invalid_argument("witness link is built from a min-side witness");
  ChainElement za = w.alpha->apply(w.z);
  ProgPtr gamma =
      prog_guarded(e, e, Bound::strict(za), prog_compose(w.beta, theta), w.z);

  SampledLink out;
  out.gamma = gamma;
  out.constant_preserved = elem_eq(e, gamma->apply(w.z), w.z);
  CheckReport rep;
  rep.what = "theta factors as alpha gamma";
  SampleSpec s = spec;
  std::mt19937_64 rng(s.seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, s.max_index);
  for (std::size_t i = 0; i < s.count; ++i) {
    ChainElement x = enumerate(e, s.exhaustive ? s.range_begin + i : dist(rng));
    ChainElement lhs = theta->apply(x);
    ChainElement rhs = gamma->apply(w.alpha->apply(x));
    ++rep.checked;
    if (!elem_eq(e, lhs, rhs)) {
      if (rep.violations.size() < 8)
        rep.violations.push_back({"mismatch at " + element_text(x)});
      else
        break;
    }
  }
  out.factoring = std::move(rep);
  return out;
}

}  // namespace chainmon
