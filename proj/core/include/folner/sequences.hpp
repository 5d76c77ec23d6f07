#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "folner/common.hpp"
#include "folner/groups.hpp"

namespace folner {

/// A total rule j ↦ coded finite set, tested on a finite horizon. Returning
/// nothing at some j is a totality failure, reported as SequenceTotalityError.
using SequenceProgram =
    std::function<std::optional<std::vector<Int>>(long long j)>;

/// The tested rule was undefined at index j.
struct SequenceTotalityError : std::runtime_error {
  explicit SequenceTotalityError(long long j_)
      : std::runtime_error("sequence program is undefined at index " +
                           std::to_string(j_)),
        j(j_) {}
  long long j;
};

/// Outcome of the finite-horizon invariance check for one (x, n) cell:
/// the least l with every k in [l, horizon] strictly 1/n-invariant, or a
/// failure (no such l) when the horizon index itself violates.
struct SequenceCell {
  Int x;
  long long n = 0;
  std::optional<long long> least_l;
  std::vector<long long> violations;  ///< every violating k on [0, horizon]
};

struct SequenceHorizonReport {
  long long horizon = 0;
  std::vector<SequenceCell> cells;  ///< x-major, then n = 1..n_max
};

/// Checks, for each x in x_set and each n ≤ n_max, which tail of the finite
/// sequence F_0..F_horizon is strictly 1/n-invariant under x. Only a
/// finite-stage report — membership of the full sequence property is never
/// claimed. Per-k checks are independent (parallelizable); the report order
/// is fixed.
SequenceHorizonReport verify_sequence_horizon(const Group& g,
                                              const SequenceProgram& prog,
                                              long long horizon,
                                              const std::vector<Int>& x_set,
                                              long long n_max);

/// Description of one enumerable witness set W ⊆ ℕ in the tiny total
/// language the reduction models: empty, all of ℕ, an explicit finite list,
/// an arithmetic progression, or the initial segment {0..n} (depending on
/// the index n the set is attached to).
struct WSpec {
  enum class Kind { Empty, All, Finite, Progression, Initial };
  Kind kind = Kind::Empty;
  std::vector<long long> elems;  ///< Finite
  long long start = 0;           ///< Progression
  long long step = 1;            ///< Progression, > 0

  bool contains(long long n, long long x) const;
  bool infinite() const { return kind == Kind::All || kind == Kind::Progression; }
};

/// Indexed family {W_n : n ≥ 1} with a fallback for unlisted indices, plus
/// the fixed repetition-free fair pair enumeration of {(n, x) : x ∈ W_n}
/// (antidiagonal stages d = n + x, inner index n ascending, 1-based).
struct CeFamilyModel {
  std::map<long long, WSpec> w;
  WSpec fallback;

  const WSpec& spec(long long n) const;
  /// s-th pair of the fixed enumeration (s ≥ 1), or nothing when the family
  /// holds fewer than s pairs in total.
  std::optional<std::pair<long long, long long>> pair_at(long long s) const;
  /// Least n with infinite W_n, if any.
  std::optional<long long> designated_infinite() const;
};

/// Finite product set in the direct sum: coordinate i+1 carries the finite
/// exponent set factors[i]; all later coordinates are pinned to 0.
struct ProductSet {
  std::vector<std::vector<long long>> factors;

  Int size() const;
  /// Exact boundary ratio under the translation with exponent shift[c] on
  /// coordinate c (coordinates the set has no extent in contribute total
  /// loss). Computed factor-wise, never materialized.
  Rat defect(const std::map<long long, long long>& shift) const;
  /// Element codes of the full product (guarded by a size cap) — intended
  /// for small cross-checks against the generic set operations.
  std::vector<Int> to_codes(const Group& direct_sum) const;
};

/// Stage-s set of the reduction: factors {0, ±1, …, ±s} on coordinates
/// 1..s, with the short factor {0, ±1} at coordinate n_s when the s-th
/// enumerated pair (n_s, x_s) exists and n_s ≤ s.
struct ReductionSet {
  long long s = 0;
  /// 0 when the enumeration holds fewer than s pairs (no short factor).
  long long n_s = 0;
  long long x_s = 0;
  ProductSet set;
};

/// Stage-s reduction set; requires the s-th enumerated pair to exist.
ReductionSet build_reduction_set(const CeFamilyModel& model, long long s);

/// One (coordinate, n) cell of the case study, same tail semantics as
/// SequenceCell over stages s in [1, horizon].
struct CaseCell {
  long long coord = 0;
  long long n = 0;
  std::optional<long long> least_l;
  std::vector<long long> violations;
};

struct CaseStudyReport {
  bool has_infinite = false;     ///< some W_n is infinite
  long long designated_n = 0;    ///< least such n when has_infinite
  bool behaves_as_folner = false;
  /// Stages s ≤ horizon whose set fails the strict 1/4 check for the
  /// designated coordinate (filled when has_infinite).
  std::vector<long long> failure_indices;
  /// Tail thresholds for sample coordinate shifts (filled otherwise).
  std::vector<CaseCell> thresholds;
};

/// Runs the reduction sequence to the horizon and reports either the
/// ever-growing failure list for the designated coordinate (some W infinite)
/// or the recorded invariance thresholds (all W finite). Stages whose pair
/// is missing use the plain full product.
CaseStudyReport reduction_case_study(const CeFamilyModel& model,
                                     long long horizon);

}  // namespace folner
