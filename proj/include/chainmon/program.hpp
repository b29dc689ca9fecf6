#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chainmon/bound.hpp"

namespace chainmon {

class EndoProgram;
using ProgPtr = std::shared_ptr<const EndoProgram>;

enum class IsoDirection : std::uint8_t { Forward, Backward };
enum class StairKind : std::uint8_t { OntoNat, OntoNatStar, OntoInt };

/// Shared state of a back-and-forth isomorphism between two dense unbounded
/// intervals of Q summands. Pairs are matched lazily in a fixed global step
/// order (even steps consume region A's enumeration, odd steps region B's;
/// the inserted partner is the simplest rational in the admissible gap), so
/// the function computed is independent of query order. Extension is
/// serialized by a mutex.
class DenseIsoTable {
 public:
  DenseIsoTable(Region a, Region b);

  const Region& region_a() const { return a_; }
  const Region& region_b() const { return b_; }

  ChainElement map(const ChainElement& x, IsoDirection dir) const;

 private:
  Region a_, b_;
  mutable std::mutex mu_;
  mutable std::map<ChainElement, ChainElement, ElementLess> fwd_, bwd_;
  mutable std::uint64_t cursor_a_ = 0, cursor_b_ = 0;
  mutable std::size_t steps_ = 0;

  void extend_once() const;
  void match_next(const Region& from, const Region& to,
                  std::map<ChainElement, ChainElement, ElementLess>& fwd,
                  std::map<ChainElement, ChainElement, ElementLess>& bwd,
                  std::uint64_t& cursor) const;
};

/// Rung geometry of a quotient staircase: a half-open interval of a Q
/// summand mapped onto a discrete summand (N, N* or Z) of the target chain.
/// Rung cuts are fixed dyadic subdivisions, so the map and its canonical
/// section are closed-form and exact.
struct StairSpec {
  ChainPtr source;      // ambient chain carrying the interval
  ChainPtr target;      // ambient chain carrying the discrete summand
  Bound lo, hi;         // interval cuts; lo open (Weak), hi open unless OntoNatStar
  StairKind kind;
  SumPath target_path;  // selects the Nat/NatStar/Int summand of target

  void validate() const;
  bool in_domain(const ChainElement& x) const;
  long long rung_of(const ChainElement& x) const;      // staircase value (carrier)
  Rational section_coord(long long k) const;           // canonical rung representative
  SumPath source_path() const;                         // Q summand carrying the interval
};

/// An executable endomorphism (or homomorphism) of term chains: a closed
/// syntax tree with a total evaluable denotation on its declared domain.
/// Compose applies the left factor first, matching the composition
/// convention used everywhere in this library.
class EndoProgram {
 public:
  struct Identity {};
  struct Const {
    ChainElement value;
  };
  struct Compose {
    ProgPtr first, second;
  };
  struct TableMap {
    SumPath path;  // selects a finite (or initial-segment-of-N) summand of source
    std::vector<ChainElement> values;
  };
  struct SuccNat {};
  struct PredClampNat {};
  struct StepThreshold {
    ChainElement pivot;
    ChainElement low, high;
  };
  struct GuardedCompose {
    Bound guard;  // at-or-below the cut -> fallback, above -> inner
    ProgPtr inner;
    ChainElement fallback;
  };
  struct CutSplit {
    Bound at;
    ProgPtr low, high;
  };
  struct SumPiece {
    SumPath at;  // dispatch on the side tag of the sum subtree at this path
    ProgPtr left, right;
  };
  struct Project {
    SumPath at;  // unwraps the summand: source restricted to the path
  };
  struct ExtendIdentity {
    Side side;  // applies inner on this summand, identity elsewhere
    ProgPtr inner;
  };
  struct Power {
    ProgPtr inner;
    unsigned exponent;  // >= 1
  };
  struct DenseIso {
    std::shared_ptr<DenseIsoTable> table;
    IsoDirection dir;
  };
  struct CollapseToPoint {
    std::optional<Bound> lo, hi;  // interval collapsed to the point; identity elsewhere
    ChainElement point;
  };
  struct Staircase {
    StairSpec spec;
  };
  struct StairSection {
    StairSpec spec;  // discrete summand -> canonical rung representatives
  };
  struct PreimageMemo;
  struct PreimageChoice {
    ProgPtr surjection;  // this program is a pointwise choice of preimages
    std::optional<ChainElement> moved_point;  // at this point choose a preimage != the point
    std::size_t budget = 100000;
    std::shared_ptr<PreimageMemo> memo;  // created by the factory
  };
  struct Dual {
    ProgPtr inner;  // acts on the reversed chains; conjugated by reversal
  };

  using Body = std::variant<Identity, Const, Compose, TableMap, SuccNat, PredClampNat,
                            StepThreshold, GuardedCompose, CutSplit, SumPiece, Project,
                            ExtendIdentity, Power, DenseIso, CollapseToPoint, Staircase,
                            StairSection, PreimageChoice, Dual>;

  ChainPtr source, target;
  Body body;

  /// Image description: a finite ascending list of full intervals and
  /// isolated points; empty/absent means not structurally known.
  struct ImagePiece {
    std::optional<ChainElement> point;  // set for point pieces
    std::optional<Region> region;       // set for interval pieces
  };
  std::optional<std::vector<ImagePiece>> declared_image;

  ChainElement apply(const ChainElement& x) const;

  nlohmann::json to_json() const;
  static ProgPtr from_json(const nlohmann::json& j);
};

// Factories; each validates shapes and static side conditions.
ProgPtr prog_identity(ChainPtr e);
ProgPtr prog_const(ChainPtr source, ChainPtr target, ChainElement value);
ProgPtr prog_compose(ProgPtr first, ProgPtr second);
ProgPtr prog_table(ChainPtr source, ChainPtr target, SumPath path,
                   std::vector<ChainElement> values);
ProgPtr prog_succ_nat();
ProgPtr prog_pred_clamp_nat();
ProgPtr prog_step_threshold(ChainPtr source, ChainPtr target, ChainElement pivot,
                            ChainElement low, ChainElement high);
ProgPtr prog_guarded(ChainPtr source, ChainPtr target, Bound guard, ProgPtr inner,
                     ChainElement fallback);
ProgPtr prog_cut_split(Bound at, ProgPtr low, ProgPtr high);
ProgPtr prog_sum_piece(SumPath at, ProgPtr left, ProgPtr right);
ProgPtr prog_project(ChainPtr source, SumPath at);
ProgPtr prog_extend_identity(ChainPtr sum_chain, Side side, ProgPtr inner);
ProgPtr prog_power(ProgPtr inner, unsigned exponent);
ProgPtr prog_dense_iso(Region a, Region b, IsoDirection dir);
ProgPtr prog_dense_iso_shared(std::shared_ptr<DenseIsoTable> table, IsoDirection dir);
ProgPtr prog_collapse(ChainPtr e, std::optional<Bound> lo, std::optional<Bound> hi,
                      ChainElement point);
ProgPtr prog_staircase(StairSpec spec);
ProgPtr prog_stair_section(StairSpec spec);
ProgPtr prog_preimage_choice(ProgPtr surjection, std::optional<ChainElement> moved_point,
                             std::size_t budget = 100000);
ProgPtr prog_dual(ChainPtr source, ChainPtr target, ProgPtr inner);

/// Attaches a constructor-reported image description (used by the witness
/// builders, whose constructions fix their images exactly).
ProgPtr with_declared_image(ProgPtr p, std::vector<EndoProgram::ImagePiece> pieces);

struct ImageQuery {
  bool known = false;
  std::vector<EndoProgram::ImagePiece> pieces;

  bool contains(const ChainPtr& e, const ChainElement& x) const;
  std::optional<ChainElement> max_at_or_below(const ChainPtr& e, const ChainElement& x) const;
  std::optional<ChainElement> min_at_or_above(const ChainPtr& e, const ChainElement& x) const;
};

/// Structural image descriptor; unknown descriptors make dependent checks
/// throw rather than guess.
ImageQuery image_of(const ProgPtr& p);

}  // namespace chainmon
