#pragma once

#include "chainmon/checks.hpp"

namespace chainmon {

enum class Answer : std::uint8_t { Yes, No, Unknown };

std::string answer_text(Answer a);

/// One step of a decision derivation: a rule id plus the mathematical fact
/// the step relies on, with sub-derivations.
struct RuleTrace {
  std::string rule;
  std::string citation;
  std::vector<RuleTrace> children;

  nlohmann::json to_json() const;
};

struct Verdict {
  Answer answer = Answer::Unknown;
  Side side = Side::L;  // L = min, R = max (endpoint checks carry both traces)
  RuleTrace trace;
  std::optional<WitnessPair> witness;

  nlohmann::json to_json() const;
};

/// Decides whether the chain maps onto itself from the tail above its
/// minimum. Fixed rule order; Unknown is a first-class outcome.
Verdict min_shiftable(const ChainPtr& e);

/// The dual decision, answered on the reversed chain.
Verdict max_shiftable(const ChainPtr& e);

/// Yes when either endpoint can be shifted, No when both sides say No.
Verdict endpoint_shiftable(const ChainPtr& e);

/// Builds the executable witness for a Yes verdict reached through a
/// constructive rule on a countable R-free chain. Supported shapes:
/// N (and sums N + D), finite prefixes of supported shapes, and the
/// families k+Q, k+N*+Q, k+Z+Q; duals on the max side. Throws
/// std::invalid_argument elsewhere.
WitnessPair build_witness(const ChainPtr& e, Side side);

/// The three equivalent forms of an endpoint shift at z: a quotient map
/// from the chain minus z, a surjection with an extra preimage at z, and
/// a right unit moving z.
struct ShiftForms {
  ProgPtr surjection;   // extends the quotient map by fixing z
  ProgPtr right_unit;   // moves z
  ChainElement moved_to;  // where the right unit sends z
};

/// From form 2 (a surjection whose z-preimage is not just {z}).
ShiftForms forms_from_surjection(const ChainPtr& e, const ChainElement& z, ProgPtr beta);

/// From form 3 (a right unit moving z, with a right inverse supplied).
ShiftForms forms_from_right_unit(const ChainPtr& e, const ChainElement& z, ProgPtr alpha,
                                 ProgPtr beta);

/// Every decision rule evaluated independently of the fixed order, for
/// consistency testing; rules that do not apply are omitted.
struct RuleFire {
  std::string rule;
  Answer answer;
};
std::vector<RuleFire> probe_min_rules(const ChainPtr& e);

}  // namespace chainmon
