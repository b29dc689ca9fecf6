#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chainmon/program.hpp"

namespace chainmon {

/// Deterministic sampling plan over the canonical enumeration. With
/// exhaustive set, indices range_begin..range_end are visited in order;
/// otherwise `count` indices are drawn from [0, max_index] with the seed.
struct SampleSpec {
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  std::uint64_t max_index = 10000;
  bool exhaustive = false;
  std::uint64_t range_begin = 0;
  std::uint64_t range_end = 0;
};

struct Violation {
  std::string detail;
};

/// Sampling verdicts are "no counterexample found", never proofs.
struct CheckReport {
  std::string what;
  std::size_t checked = 0;
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

/// Draws element pairs and checks x <= y implies p(x) <= p(y).
CheckReport check_monotone(const ProgPtr& p, const SampleSpec& spec = {});

/// Checks beta(alpha(x)) == x on sampled x (alpha then beta is identity).
CheckReport check_right_inverse(const ProgPtr& alpha, const ProgPtr& beta,
                                const SampleSpec& spec = {});

/// A right unit alpha, a right inverse beta, and the endpoint they shift.
struct WitnessPair {
  ChainPtr chain;
  Side side = Side::L;  // L = min witness, R = max witness
  ChainElement z;
  ProgPtr alpha, beta;

  nlohmann::json to_json() const;
  static WitnessPair from_json(const nlohmann::json& j);
};

struct WitnessReport {
  CheckReport alpha_monotone, beta_monotone, right_inverse;
  bool endpoint_shifted = false;
  bool ok() const {
    return alpha_monotone.ok() && beta_monotone.ok() && right_inverse.ok() && endpoint_shifted;
  }
};

WitnessReport verify_witness(const WitnessPair& w, const SampleSpec& spec = {});

/// Regularity of an order-preserving self-map of the finite chain k, read
/// off its image: attained infimum/supremum where bounded, and for every
/// omitted interior point a neighbour in the image on at least one side.
bool is_regular_finite(const ProgPtr& alpha);

/// Right units of End(k) are the injective regular maps; on a finite chain
/// this forces the identity.
bool is_right_unit_finite(const ProgPtr& alpha);

/// Checks the two-sided preimage formula at x: with v = x beta alpha,
/// v == max(im alpha interesected with x-down) when v <= x, and
/// v == min(im alpha intersected with x-up) when v >= x.
/// Throws std::domain_error when alpha's image is not structurally known.
bool right_inverse_value_check(const ProgPtr& alpha, const ProgPtr& beta, const ChainElement& x);

/// For a surjection beta, the pointwise choice of preimages of least
/// canonical enumeration index; alpha-then-beta is the identity.
ProgPtr construct_left_inverse(const ProgPtr& beta, std::size_t budget = 100000);

/// A homomorphism C+D+E -> D that is injective on the marked finite sets
/// K (in C) and L (in E); with C empty and D unbounded below its image is
/// unbounded below, and dually. D must be infinite and R-free.
ProgPtr build_shifting_hom(const ChainPtr& c, const ChainPtr& d, const ChainPtr& e,
                           const std::vector<ChainElement>& k_points,
                           const std::vector<ChainElement>& l_points);

}  // namespace chainmon
