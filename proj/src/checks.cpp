#include "chainmon/checks.hpp"

#include <algorithm>
#include <random>

namespace chainmon {

namespace {

std::uint64_t index_cap(const ChainPtr& e, std::uint64_t max_index) {
  auto sz = finite_size(e);
  if (sz && *sz > 0 && *sz - 1 < max_index) return *sz - 1;
  return max_index;
}

std::vector<std::uint64_t> draw_indices(const ChainPtr& e, const SampleSpec& spec,
                                        std::size_t per_sample) {
  std::vector<std::uint64_t> out;
  if (spec.exhaustive) {
    for (std::uint64_t i = spec.range_begin; i < spec.range_end; ++i) out.push_back(i);
    return out;
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<std::uint64_t> dist(0, index_cap(e, spec.max_index));
  out.reserve(spec.count * per_sample);
  for (std::size_t i = 0; i < spec.count * per_sample; ++i) out.push_back(dist(rng));
  return out;
}

}  // namespace

CheckReport check_monotone(const ProgPtr& p, const SampleSpec& spec) {
  CheckReport r;
  r.what = "monotone";
  auto idx = draw_indices(p->source, spec, 2);
  for (std::size_t i = 0; i + 1 < idx.size(); i += 2) {
    ChainElement x = enumerate(p->source, idx[i]);
    ChainElement y = enumerate(p->source, idx[i + 1]);
    if (compare(p->source, x, y) == Ordering::GT) std::swap(x, y);
    ChainElement fx = p->apply(x), fy = p->apply(y);
    ++r.checked;
    if (compare(p->target, fx, fy) == Ordering::GT) {
      if (r.violations.size() < 8)
        r.violations.push_back({"order reversed at " + element_text(x) + " <= " +
                                element_text(y) + ": " + element_text(fx) + " > " +
                                element_text(fy)});
      else
        break;
    }
  }
  return r;
}

CheckReport check_right_inverse(const ProgPtr& alpha, const ProgPtr& beta,
                                const SampleSpec& spec) {
  if (!equal(alpha->target, beta->source) || !equal(alpha->source, beta->target))
    throw std::invalid_argument("right-inverse check needs alpha: C->D, beta: D->C");
  CheckReport r;
  r.what = "right inverse";
  for (std::uint64_t i : draw_indices(alpha->source, spec, 1)) {
    ChainElement x = enumerate(alpha->source, i);
    ChainElement back = beta->apply(alpha->apply(x));
    ++r.checked;
    if (!elem_eq(alpha->source, back, x)) {
      if (r.violations.size() < 8)
        r.violations.push_back(
            {element_text(x) + " maps back to " + element_text(back)});
      else
        break;
    }
  }
  return r;
}

nlohmann::json WitnessPair::to_json() const {
  nlohmann::json j;
  j["chain"] = print_chain(chain);
  j["side"] = side == Side::L ? "min" : "max";
  j["z"] = element_text(z);
  j["alpha"] = alpha->to_json();
  j["beta"] = beta->to_json();
  return j;
}

WitnessPair WitnessPair::from_json(const nlohmann::json& j) {
  WitnessPair w;
  w.chain = parse_chain(j.at("chain").get<std::string>());
  w.side = j.at("side").get<std::string>() == "min" ? Side::L : Side::R;
  w.z = parse_element(w.chain, j.at("z").get<std::string>());
  w.alpha = EndoProgram::from_json(j.at("alpha"));
  w.beta = EndoProgram::from_json(j.at("beta"));
  return w;
}

WitnessReport verify_witness(const WitnessPair& w, const SampleSpec& spec) {
  WitnessReport r;
  r.alpha_monotone = check_monotone(w.alpha, spec);
  r.beta_monotone = check_monotone(w.beta, spec);
  r.right_inverse = check_right_inverse(w.alpha, w.beta, spec);
  Ordering shift = compare(w.chain, w.alpha->apply(w.z), w.z);
  r.endpoint_shifted = w.side == Side::L ? shift == Ordering::GT : shift == Ordering::LT;
  return r;
}

namespace {

std::vector<long long> finite_value_table(const ProgPtr& alpha, std::size_t n) {
  std::vector<long long> vals(n);
  for (std::size_t x = 1; x <= n; ++x)
    vals[x - 1] = alpha->apply(ChainElement::num(static_cast<long long>(x))).as_num();
  return vals;
}

std::size_t finite_domain(const ProgPtr& alpha) {
  if (alpha->source->kind != ChainKind::Finite || !equal(alpha->source, alpha->target))
    throw std::invalid_argument("finite-chain check needs a self-map of a finite chain");
  if (alpha->source->count == 0) throw std::invalid_argument("empty chain");
  return alpha->source->count;
}

}  // namespace

bool is_regular_finite(const ProgPtr& alpha) {
  const std::size_t n = finite_domain(alpha);
  auto vals = finite_value_table(alpha, n);
  std::vector<long long> im = vals;
  std::sort(im.begin(), im.end());
  im.erase(std::unique(im.begin(), im.end()), im.end());

  // bounded-below / bounded-above images must attain their extremes; a
  // finite image always does, so read the conditions off directly
  bool attained_min = !im.empty();
  bool attained_max = !im.empty();
  if (!attained_min || !attained_max) return false;

  for (long long x = 1; x <= static_cast<long long>(n); ++x) {
    if (std::binary_search(im.begin(), im.end(), x)) continue;
    bool below_all = x < im.front(), above_all = x > im.back();
    if (below_all || above_all) continue;  // bounds of the image are exempt
    bool has_max_below = std::any_of(im.begin(), im.end(), [&](long long t) { return t < x; });
    bool has_min_above = std::any_of(im.begin(), im.end(), [&](long long t) { return t > x; });
    if (!has_max_below && !has_min_above) return false;
  }
  return true;
}

bool is_right_unit_finite(const ProgPtr& alpha) {
  const std::size_t n = finite_domain(alpha);
  auto vals = finite_value_table(alpha, n);
  std::vector<long long> sorted = vals;
  std::sort(sorted.begin(), sorted.end());
  bool injective = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  return injective && is_regular_finite(alpha);
}

bool right_inverse_value_check(const ProgPtr& alpha, const ProgPtr& beta,
                               const ChainElement& x) {
  const ChainPtr& e = alpha->source;
  ImageQuery im = image_of(alpha);
  if (!im.known)
    throw std::domain_error("image of alpha is not structurally computable");
  ChainElement v = alpha->apply(beta->apply(x));
  Ordering c = compare(e, v, x);
  bool ok = true;
  if (c != Ordering::GT) {
    auto m = im.max_at_or_below(e, x);
    ok = ok && m && elem_eq(e, v, *m);
  }
  if (c != Ordering::LT) {
    auto m = im.min_at_or_above(e, x);
    ok = ok && m && elem_eq(e, v, *m);
  }
  return ok;
}

ProgPtr construct_left_inverse(const ProgPtr& beta, std::size_t budget) {
  return prog_preimage_choice(beta, std::nullopt, budget);
}

namespace {

// nested cut splits sending [points[i], points[i+1]) to values[i+1] and
// everything below points[0] to values[0]
ProgPtr ladder(const ChainPtr& source, const ChainPtr& target,
               const std::vector<ChainElement>& anchors,
               const std::vector<ChainElement>& values) {
  ProgPtr acc = prog_const(source, target, values.back());
  for (std::size_t i = anchors.size(); i-- > 0;)
    acc = prog_cut_split(Bound::strict(anchors[i]), prog_const(source, target, values[i]), acc);
  return acc;
}

}  // namespace

ProgPtr build_shifting_hom(const ChainPtr& c, const ChainPtr& d, const ChainPtr& e,
                           const std::vector<ChainElement>& k_points,
                           const std::vector<ChainElement>& l_points) {
  if (contains_real(d)) throw std::invalid_argument("middle chain must be R-free");
  Attributes da = attributes(d);
  if (da.cardinality == Card::Finite) throw std::invalid_argument("middle chain must be infinite");
  bool c_empty = attributes(c).is_empty;
  bool e_empty = attributes(e).is_empty;
  if (!c_empty)
    for (const auto& p : k_points) validate_element(c, p);
  if (!e_empty)
    for (const auto& p : l_points) validate_element(e, p);
  if (c_empty && e_empty) return prog_identity(d);

  // pick the pivot and spare points from a fixed sample of D
  const std::size_t need = std::max(k_points.size(), l_points.size());
  const std::size_t w = 2 * (k_points.size() + l_points.size()) + 8 + 2 * need;
  std::vector<ChainElement> sample;
  for (std::size_t i = 0; i < w; ++i) sample.push_back(enumerate(d, i));
  std::sort(sample.begin(), sample.end(), ElementLess{d});
  const std::size_t mid = w / 2;
  ChainElement pivot = sample[mid];
  std::vector<ChainElement> below(sample.begin() + (mid - k_points.size() - 1),
                                  sample.begin() + mid);
  std::vector<ChainElement> above(sample.begin() + mid + 1,
                                  sample.begin() + mid + 2 + l_points.size());

  auto sorted = [&](const ChainPtr& chain, std::vector<ChainElement> pts) {
    std::sort(pts.begin(), pts.end(), ElementLess{chain});
    return pts;
  };

  if (!c_empty && !e_empty) {
    ChainPtr inner_sum = ChainExpr::sum(d, e);
    ChainPtr source = ChainExpr::sum(c, inner_sum);
    std::vector<ChainElement> ks = sorted(c, k_points);
    std::vector<ChainElement> anchors_c;
    for (auto& k : ks) anchors_c.push_back(ChainElement::in_side(Side::L, k));
    ProgPtr c_piece = ladder(source, d, anchors_c, below);
    ProgPtr d_piece = prog_const(source, d, pivot);
    std::vector<ChainElement> ls = sorted(e, l_points);
    std::vector<ChainElement> anchors_e;
    for (auto& l : ls)
      anchors_e.push_back(ChainElement::in_side(Side::R, ChainElement::in_side(Side::R, l)));
    ProgPtr e_piece = ladder(source, d, anchors_e, above);
    return prog_sum_piece("", c_piece, prog_sum_piece("R", d_piece, e_piece));
  }

  if (c_empty) {
    ChainPtr source = ChainExpr::sum(d, e);
    ProgPtr d_piece;
    if (!da.has_min) {
      // fix the lower part pointwise so the image stays unbounded below
      ChainElement pivot_in = ChainElement::in_side(Side::L, pivot);
      d_piece = prog_cut_split(Bound::weak(pivot_in), prog_project(source, "L"),
                               prog_const(source, d, pivot));
    } else {
      d_piece = prog_const(source, d, pivot);
    }
    std::vector<ChainElement> ls = sorted(e, l_points);
    std::vector<ChainElement> anchors_e;
    for (auto& l : ls) anchors_e.push_back(ChainElement::in_side(Side::R, l));
    ProgPtr e_piece = ladder(source, d, anchors_e, above);
    return prog_sum_piece("", d_piece, e_piece);
  }

  // e_empty
  ChainPtr source = ChainExpr::sum(c, d);
  std::vector<ChainElement> ks = sorted(c, k_points);
  std::vector<ChainElement> anchors_c;
  for (auto& k : ks) anchors_c.push_back(ChainElement::in_side(Side::L, k));
  ProgPtr c_piece = ladder(source, d, anchors_c, below);
  ProgPtr d_piece;
  if (!da.has_max) {
    ChainElement pivot_in = ChainElement::in_side(Side::R, pivot);
    d_piece = prog_cut_split(Bound::weak(pivot_in), prog_const(source, d, pivot),
                             prog_project(source, "R"));
  } else {
    d_piece = prog_const(source, d, pivot);
  }
  return prog_sum_piece("", c_piece, d_piece);
}

}  // namespace chainmon
