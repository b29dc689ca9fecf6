#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "chainmon/finite_monoid.hpp"

namespace chainmon {

enum class CongSide : std::uint8_t { Left, Right };

/// Generating pairs for a one-sided congruence: an explicit list of ordered
/// pairs, or the designated full relation S x S. from_subset(V) gives V x V,
/// the usual "generated by a subset" shorthand.
class PairSet {
 public:
  static PairSet full() {
    PairSet p;
    p.full_ = true;
    return p;
  }
  static PairSet of_pairs(std::vector<std::pair<std::size_t, std::size_t>> pairs) {
    PairSet p;
    p.pairs_ = std::move(pairs);
    return p;
  }
  static PairSet from_subset(const std::vector<std::size_t>& v) {
    PairSet p;
    for (std::size_t a : v)
      for (std::size_t b : v) p.pairs_.push_back({a, b});
    return p;
  }

  bool is_full() const { return full_; }
  const std::vector<std::pair<std::size_t, std::size_t>>& pairs() const { return pairs_; }
  std::vector<std::pair<std::size_t, std::size_t>> materialize(std::size_t m) const;
  bool contains(std::size_t a, std::size_t b) const;  // ordered membership

 private:
  bool full_ = false;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
};

struct Partition {
  std::vector<std::size_t> block;  // block ids, numbered by first occurrence
  std::size_t block_count = 0;

  bool same(std::size_t a, std::size_t b) const { return block[a] == block[b]; }
  bool universal() const { return block_count <= 1; }
  std::vector<std::vector<std::size_t>> blocks() const;
};

/// Smallest one-sided congruence containing U: union-find closed under
/// translation on the acting side, iterated to fixpoint.
Partition congruence_closure(const FiniteMonoid& S, const PairSet& U, CongSide side);

/// Shortest derivation length between a and b: BFS in the graph with an
/// edge {u s, v s} for each generating pair and each s (translations on the
/// congruence side). nullopt when a and b fall in different closure blocks.
/// Throws BudgetError when |S| exceeds max_size.
std::optional<unsigned> distance(const FiniteMonoid& S, const PairSet& U, CongSide side,
                                 std::size_t a, std::size_t b, std::size_t max_size = 1000);

/// Supremum of distance over all pairs; nullopt when the closure is not
/// universal.
std::optional<unsigned> diameter(const FiniteMonoid& S, const PairSet& U, CongSide side,
                                 std::size_t max_size = 1000);

/// Whether {(u s, v s) : (u,v) in U, s in S} covers all of S x S, i.e. U
/// generates the diagonal right act in one step.
bool diagonal_act_generated(const FiniteMonoid& S, const PairSet& U);

struct USeqTriple {
  std::size_t u, v, s;
};

/// Checks a derivation a = u1 s1, v1 s1 = u2 s2, ..., vn sn = b where each
/// (u_i, v_i) or (v_i, u_i) lies in U; products put the translation on the
/// right for the right side, on the left for the left side. The empty
/// derivation is valid exactly when a == b.
bool validate_usequence(const FiniteMonoid& S, const PairSet& U, CongSide side, std::size_t a,
                        std::size_t b, const std::vector<USeqTriple>& seq);

/// Validation mode: exact minimum, over subsets V of S whose V x V closure
/// is universal, of the V x V diameter. Exponential; |S| <= 10 enforced.
std::optional<unsigned> min_diameter_over_subsets(const FiniteMonoid& S, CongSide side);

}  // namespace chainmon
