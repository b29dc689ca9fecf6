#pragma once

#include "chainmon/congruence.hpp"
#include "chainmon/shiftability.hpp"

namespace chainmon {

/// Left and right diameters of the endomorphism monoid of a chain.
/// Trivial and finite chains are settled directly; for infinite chains
/// the left value is 2 and the right value is 2 or 3 according to
/// endpoint-shiftability (unknown verdicts leave it in {2,3}).
struct DiameterReport {
  int left = 0;
  std::optional<int> right;  // nullopt: undecided, known to lie in {2,3}
  RuleTrace basis;

  nlohmann::json to_json() const;
};

DiameterReport diameters(const ChainPtr& e);

/// A derivation between two elements of End(n), with the generating subset
/// it draws from and its engine validation.
struct FiniteLink {
  std::vector<USeqTriple> seq;
  std::vector<std::size_t> gens;
  CongSide side = CongSide::Right;
  bool valid = false;
};

/// Left derivation of length <= 2 between theta and phi through the
/// constant map at x: both composites with c_x collapse to c_x.
FiniteLink left_constant_link(const EndMonoid& em, std::size_t theta, std::size_t phi,
                              std::size_t x);

/// Right derivation of length <= 3 between theta and phi over {1, c_x, c_y}
/// via the two-level threshold map agreeing with theta at x and phi at y.
FiniteLink right_threshold_link(const EndMonoid& em, std::size_t theta, std::size_t phi,
                                std::size_t x, std::size_t y);

/// Right derivation of length 1 from theta to the constant at z over
/// {alpha, c_z}, built from an endpoint-shift witness: gamma plays beta
/// then theta above the shifted point and parks everything else at z.
struct SampledLink {
  ProgPtr gamma;
  CheckReport factoring;      // theta == alpha . gamma on samples
  bool constant_preserved = false;  // z gamma == z, exact
};

SampledLink right_witness_link(const ChainPtr& e, const ProgPtr& theta, const WitnessPair& w,
                               const SampleSpec& spec = {});

}  // namespace chainmon
