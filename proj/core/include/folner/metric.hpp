#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "folner/common.hpp"
#include "folner/folner.hpp"
#include "folner/groups.hpp"
#include "folner/matching.hpp"
#include "folner/sequences.hpp"
#include "folner/wp.hpp"

namespace folner {

/// An edge of a comparison graph stayed undecided at the deepest precision
/// refinement the procedure allows.
struct PrecisionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Right-invariant exact metric (bounded by 1) on a zoo group: the arc
/// metric on the circle family, the {0,1}-metric on every discrete family.
class MetricGroup {
 public:
  explicit MetricGroup(std::shared_ptr<const Group> g);

  const Group& group() const { return *group_; }
  std::shared_ptr<const Group> group_ptr() const { return group_; }
  bool arc_metric() const { return arc_; }

  /// d(a, b), exact.
  Rat dist(const CanonicalElement& a, const CanonicalElement& b) const;
  /// d(ν(i), ν(j)), exact.
  Rat dist_codes(const Int& i, const Int& j) const;

 private:
  std::shared_ptr<const Group> group_;
  bool arc_ = false;
};

/// Interval query: returns some ℓ with d(ν(i), ν(j)) ∈ [ℓ, ℓ+ε).
using DistanceOracle =
    std::function<Rat(const Int& i, const Int& j, const Rat& eps)>;

/// Oracle view of the exact metric with answers snapped down to the grid
/// ε·ℤ, so answers at nested precisions are consistent and ball membership
/// at a rational radius always resolves after finitely many refinements.
DistanceOracle exact_distance_oracle(const MetricGroup& mg);

/// Comparison graph of two element lists at open-ball radius q, with its
/// matching number and both certificates. The edge (x, y) is present iff
/// y·x⁻¹ lies in B_{<q}, equivalently d(y, x) < q by right invariance.
struct MatchingInstance {
  std::vector<CanonicalElement> f1;
  std::vector<CanonicalElement> f2;
  Rat q;
  BipartiteGraph graph;  ///< left indexes f1, right indexes f2
  MatchingCertificate certificate;
  std::size_t mu = 0;
};

/// Decides every edge through the oracle, halving the precision until the
/// returned interval avoids q (PrecisionFailure after 64 halvings — cannot
/// happen for grid-snapped exact oracles), then computes the maximum
/// matching with its deficiency certificate.
MatchingInstance matching_number(const MetricGroup& mg,
                                 const std::vector<CanonicalElement>& f1,
                                 const std::vector<CanonicalElement>& f2,
                                 const Rat& q, const DistanceOracle& oracle);

/// Maximal partial injection φ : F → gF moving every matched point strictly
/// less than eps; maximality is certified by the Hall deficiency.
struct EpsMatching {
  std::vector<CanonicalElement> gf;  ///< left translate, aligned with F
  std::vector<std::pair<std::size_t, std::size_t>>
      pairs;                    ///< (index into F, index into gf)
  std::size_t domain_size = 0;  ///< |dom φ| = matching number
  std::size_t deficiency = 0;   ///< |F| − domain_size, dual-certified
};

EpsMatching eps_matching(const MetricGroup& mg,
                         const std::vector<CanonicalElement>& F,
                         const CanonicalElement& g, const Rat& eps,
                         const DistanceOracle& oracle);

/// Metric Følner test at tolerance (m, n): per D-element matching numbers
/// μ(ν(F), ν(e)ν(F), B_{<1/m}), each compared exactly against
/// (n−1)/n · |ν(F)| (as μ·n ≥ (n−1)·|ν(F)|).
struct MetricFolnerReport {
  bool ok = false;
  std::size_t set_size = 0;  ///< |ν(F)| (distinct values)
  long long m = 0;
  long long n = 0;
  std::vector<std::pair<Int, std::size_t>> per_e_mu;  ///< in D order
  std::optional<Int> violator;  ///< first e below the bound
  std::optional<std::size_t> violator_mu;
};

MetricFolnerReport is_metric_folner(const MetricGroup& mg,
                                    const std::vector<Int>& F,
                                    const std::vector<Int>& D, long long m,
                                    long long n);

/// Outcome of the fact-driven semi-decision: certified with the surviving
/// representative set, or not-yet with the consumed-fact count. Never a
/// refutation.
struct ThetaHatOutcome {
  bool certified = false;
  std::vector<Int> certified_set;  ///< representatives of ν(F) inside F
  long long facts_consumed = 0;
  std::vector<std::size_t> final_mu;  ///< per D element, known edges only
};

/// Semi-decides the metric Følner property from enumerated distance facts:
/// fixes representatives of the value classes of F ∪ D·F (the least code,
/// preferring codes in F so the representative set restricted to F carries
/// exactly the values of ν(F)), then consumes the fixed fair enumeration of
/// the true facts d(ν(a), ν(b)) < q over representative pairs and rationals
/// q ∈ (0,1), re-checking after every fact whether the edges known so far
/// already witness μ ≥ (n−1)/n · |F₀ ∩ F| for every e ∈ D. Known-edge
/// matching numbers never decrease along the enumeration (asserted).
ThetaHatOutcome theta_hat(const MetricGroup& mg, long long m, long long n,
                          const std::vector<Int>& D, const std::vector<Int>& F,
                          long long budget);

/// Search result: the first canonical-order code set that passes the metric
/// Følner test injectively, with the precision-1/ℓ distance assignment on
/// all ordered code pairs.
struct MetricSearchResult {
  std::vector<Int> codes;
  MetricFolnerReport report;
  std::map<std::pair<Int, Int>, Rat> assignment;  ///< d ∈ [q, q+1/ℓ)
  long long examined = 0;
};

std::variant<MetricSearchResult, SearchExhausted> search_metric_folner(
    const MetricGroup& mg, long long ell, long long m, long long n,
    const std::vector<Int>& D, long long budget);

/// Følner-set source with a distance assignment, as a callable: given
/// (ℓ, m, n, D) it yields an injectively coded set satisfying the metric
/// Følner bound for every element of D, plus q values with
/// d(ν(i), ν(j)) ∈ [q, q+1/ℓ) for all i, j in the set.
struct CaResult {
  std::vector<Int> codes;
  std::map<std::pair<Int, Int>, Rat> assignment;
};
using CaOracle = std::function<CaResult(
    long long ell, long long m, long long n, const std::vector<Int>& D)>;

/// Exact-overlap source for the circle family: the finite cyclic subgroup
/// generated by the requested elements (every translate is the set itself).
CaOracle circle_ca_oracle(const MetricGroup& mg);

/// Same interface backed by the canonical-order search (small instances).
CaOracle search_ca_oracle(const MetricGroup& mg, long long budget);

/// Distance estimate from a Følner source: the true distance lies in
/// [q0, q0 + eps).
struct DistanceEstimate {
  Rat q0;
  Rat eps;
  long long ell = 0;
  long long m = 0;
  long long n = 0;
  std::vector<Int> folner_codes;
  long long confirmations = 0;  ///< facts consumed before both matchings
  Int shared_f;                 ///< common matched element (code)
};

/// Estimates d(ν(n1), ν(n2)) within eps using only a Følner source and the
/// confirmation stream of the facts d(ν(nᵢ·f), ν(f′)) < 1/m (consumed in
/// ascending order of exact distance): stops once both known-edge matching
/// numbers reach (n−1)/n of the set, takes a common matched element, reads
/// the assignment value q on its two partners, and returns
/// q0 = max(0, q − 1/m). The window property is re-checked against the
/// exact metric before returning.
DistanceEstimate estimate_distance(const MetricGroup& mg, const Int& n1,
                                   const Int& n2, const Rat& eps,
                                   const CaOracle& oracle);

/// Finite-horizon report for the metric Følner-sequence condition: cell
/// (x, n) records every stage k ≤ horizon with
/// μ(ν(F_k), ν(x)ν(F_k), B_{<1/n}) · n < (n−1) · |ν(F_k)|, and the least l
/// from which no violation occurs up to the horizon. Finite-stage evidence
/// only — membership of the full sequence property is never claimed.
SequenceHorizonReport verify_metric_sequence_horizon(
    const MetricGroup& mg, const SequenceProgram& prog, long long horizon,
    const std::vector<Int>& x_set, long long n_max);

}  // namespace folner
