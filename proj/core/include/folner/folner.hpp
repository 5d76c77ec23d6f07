#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "folner/common.hpp"
#include "folner/groups.hpp"

namespace folner {

/// Certificate that the coded set F is 1/n-Følner with respect to D: every
/// x ∈ D moves at most a 1/n-fraction of ν(F) out of itself.
struct FolnerWitness {
  std::vector<Int> codes;      ///< sorted, de-duplicated member codes
  long long n = 1;             ///< tolerance certified (defects ≤ 1/n)
  std::map<Int, Rat> defects;  ///< x ∈ D ↦ |ν(F) ∖ ν(x)ν(F)| / |ν(F)|
  bool injective = false;      ///< |F| = |ν(F)| (codes hit distinct elements)
};

/// First D-element whose defect exceeds the tolerance.
struct FolnerRefusal {
  Int x;
  Rat defect;
};

/// A bounded search ran out of candidates before finding a witness.
struct SearchExhausted {
  long long examined = 0;
};

/// Exact boundary defect |ν(F) ∖ ν(x)ν(F)| / |ν(F)| (duplicates in ν(F)
/// collapse first). Throws std::invalid_argument on empty F.
Rat defect(const Group& g, const std::vector<Int>& F, const Int& x);

/// Companion overlap ratio |ν(F) ∩ ν(x)ν(F)| / |ν(F)|; always equals
/// 1 − defect(g, F, x).
Rat intersection_ratio(const Group& g, const std::vector<Int>& F,
                       const Int& x);

/// Witness iff defect(F, x) ≤ 1/n for every x ∈ D; otherwise the refusal
/// carries the first violating x (in D order) and its defect.
std::variant<FolnerWitness, FolnerRefusal> is_folner(
    const Group& g, const std::vector<Int>& F, const std::vector<Int>& D,
    long long n);

/// Enumerates all finite nonempty subsets of ℕ in the fixed canonical order:
/// by maximum element, then by size, then lexicographically on the ascending
/// tuple. The first sets are {0}, {1}, {0,1}, {2}, {0,2}, {1,2}, {0,1,2}, …
class CanonicalSetEnumerator {
 public:
  /// The next finite set (ascending codes). The reference stays valid until
  /// the following call.
  const std::vector<Int>& next();

 private:
  long long max_ = 0;
  long long size_ = 1;
  std::vector<long long> comb_;  // size_ − 1 chosen members below max_
  bool first_ = true;
  std::vector<Int> current_;
};

/// Scans finite code sets in the canonical order and returns the first
/// injective witness; SearchExhausted after `budget` candidates.
std::variant<FolnerWitness, SearchExhausted> search_folner(
    const Group& g, long long n, const std::vector<Int>& D, long long budget);

/// Result of the bounded Følner-function computation.
struct FolnerFunctionResult {
  /// Least |F| over qualifying subsets of the radius-`search_bound` ball;
  /// empty when no subset of the ball qualifies. Any returned value is exact
  /// within the ball and an upper estimate for the unrestricted minimum.
  std::optional<long long> value;
  bool pool_exhausted = false;  ///< true iff no qualifying subset was found
  long long pool_size = 0;      ///< number of distinct elements scanned
  std::optional<FolnerWitness> witness;  ///< a minimum-size witness
};

/// min{|F| : F ⊆ ball(search_bound), F ∈ Føl(n, D)} by ascending-size scan.
FolnerFunctionResult folner_function(const Group& g, long long n,
                                     const std::vector<Int>& D,
                                     long long search_bound);

}  // namespace folner
