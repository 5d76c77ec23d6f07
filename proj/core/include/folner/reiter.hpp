#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "folner/common.hpp"
#include "folner/folner.hpp"
#include "folner/groups.hpp"

namespace folner {

/// Finitely supported function ℕ → ℚ with strictly positive values on its
/// support (the key set).
struct ReiterFunction {
  std::map<Int, Rat> values;
};

/// Throws std::invalid_argument unless the support is nonempty and every
/// value is strictly positive.
void validate_reiter(const ReiterFunction& f);

/// Exact ℓ¹ norm (sum of values).
Rat l1_norm(const ReiterFunction& f);

/// Class sums of f over the fibers of ν: h(g) = Σ { f(i) : ν(i) = g }.
std::map<CanonicalElement, Rat> pushforward(const Group& g,
                                            const ReiterFunction& f);

/// ‖h − ₓh‖₁ / ‖h‖₁ for h the pushforward of f and x translating on the
/// left: (ₓh)(y) = h(ν(x)⁻¹ y).
Rat pushforward_ratio(const Group& g, const ReiterFunction& f, const Int& x);

/// Strict invariance test: pushforward_ratio(f, x) < 1/n for every x ∈ D.
bool is_reiter(const Group& g, const ReiterFunction& f,
               const std::vector<Int>& D, long long n);

/// Mergeable partition of the working set W = supp(f) ∪ ⋃_{x∈D} (x⋆supp ∪
/// x⁻¹⋆supp), starting from code singletons. Tracks, per class C and per
/// x ∈ D, the f-mass of C and the f-mass x pushes into C, so each invariance
/// ratio is maintained incrementally under merges.
class PartitionState {
 public:
  PartitionState(const ReiterFunction& f, const std::vector<Int>& D);

  const std::vector<Int>& working_set() const { return w_; }
  std::size_t class_count() const { return classes_; }

  /// Σ_C |mass(C) − shifted-mass_x(C)| / ‖f‖₁ at the current partition.
  Rat m_ratio(const Int& x) const;
  /// All ratios, keyed by the D codes.
  std::map<Int, Rat> ratios() const;
  bool all_within(const Rat& bound) const;

  bool same_class(const Int& a, const Int& b) const;
  /// Unites two classes; returns false when already united.
  bool merge(const Int& a, const Int& b);

 private:
  int find(int v) const;
  int index_of(const Int& code) const;

  std::vector<Int> w_;
  std::map<Int, int> index_;
  std::vector<Int> dcodes_;  // distinct D codes, first-occurrence order
  std::map<Int, int> dslot_;
  mutable std::vector<int> parent_;
  std::vector<int> rank_;
  std::vector<Rat> weight_;           // per root: f-mass of the class
  std::vector<std::vector<Rat>> m2_;  // per D slot, per root: shifted mass
  std::vector<Rat> s_;                // per D slot: Σ_C |weight − shifted|
  Rat norm_;
  std::size_t classes_ = 0;
};

/// Free-function form of PartitionState::m_ratio.
Rat m_ratio(const PartitionState& state, const Int& x);

/// All ratios of the current partition are ≤ 1/n.
struct KappaCertified {
  std::map<Int, Rat> ratios;
  long long queries = 0;
  long long merges = 0;
};

/// Every pair of working-set codes was decided, the partition is the full
/// ν-partition, and some ratio still exceeds 1/n.
struct KappaRefuted {
  std::map<Int, Rat> ratios;
  long long queries = 0;
};

/// Ran out of budget with the partition still refinable.
struct KappaExhausted {
  PartitionState state;
  long long queries = 0;
};

using KappaVerdict = std::variant<KappaCertified, KappaRefuted, KappaExhausted>;

struct KappaOptions {
  /// Treat equality as merely semi-decidable: consume the fair equality-pair
  /// enumeration instead of querying pairs directly, and never refute.
  bool ce_only = false;
};

/// Incremental certification that f is 1/n-invariant with respect to D:
/// starts at the code-singleton partition of the working set, merges
/// confirmed-equal codes, and stops as soon as every ratio is ≤ 1/n.
/// `budget` caps equality queries (pairs consumed when ce_only).
KappaVerdict kappa_verify(const Group& g, long long n,
                          const std::vector<Int>& D, const ReiterFunction& f,
                          long long budget, const KappaOptions& options = {});

struct ReiterTriple {
  long long n = 1;
  std::vector<Int> D;
  ReiterFunction f;
};

/// Runs the fixed triple stream through dovetailed verifier instances
/// (step c: one move in each live instance c, c−1, …, 1) and returns the
/// triples certified within `budget` total moves, in certification order,
/// de-duplicated. Deterministic.
std::vector<ReiterTriple> enumerate_reiter(const Group& g, long long budget);

/// Searches for a characteristic function χ_F that is 1/n-invariant with
/// respect to D (strict), dovetailing the verifier over a fixed stream of
/// finite code sets. `budget` caps total moves.
std::variant<ReiterFunction, SearchExhausted> compute_reiter(
    const Group& g, long long n, const std::vector<Int>& D, long long budget);

/// Level-set extraction: scans the distinct values of the pushforward of h
/// in descending order and returns the support codes of the first level set
/// whose every defect is < |D|/(2n). Throws std::logic_error if none
/// qualifies (the input was not strictly |D|/(2n)-summable upstream).
std::vector<Int> extract_folner(const Group& g, const ReiterFunction& h,
                                const std::vector<Int>& D, long long n);

/// Σ-style search: finds f with strict invariance 1/m for m = ⌈n·|D|/2⌉ and
/// extracts a certified subset, so F′ ⊆ F = supp(f) has defects ≤ 1/n.
struct SigmaResult {
  std::vector<Int> F;    ///< support codes of f, ascending
  ReiterFunction f;      ///< the invariance certificate
  long long m = 1;       ///< the strictness index used
  std::optional<std::vector<Int>> F_prime;  ///< extracted Følner subset
};

std::variant<SigmaResult, SearchExhausted> sigma_search(
    const Group& g, long long n, const std::vector<Int>& D, long long budget);

}  // namespace folner
