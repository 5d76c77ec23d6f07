#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "folner/common.hpp"

namespace folner {

/// No tail flip can separate the means by more than one half.
struct DiscontinuityRefusal : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Symmetric two-sided 0/1 sequence x with x(-i) = x(i), in one of two
/// shapes: explicit values 0..N with an eventually periodic tail (total,
/// limit mean = tail density), or a run-length segment table produced by
/// build_x0 (defined up to a finite radius, limit mean 0 by construction).
class BinarySeqZ {
 public:
  struct Run {
    long long lo = 0;
    long long hi = 0;  ///< inclusive
    int bit = 0;
  };

  /// The zero sequence (total, limit mean 0).
  BinarySeqZ() = default;

  /// head holds x(0..N); tail_period repeats from position N+1 on.
  static BinarySeqZ explicit_symmetric(std::vector<int> head,
                                       std::vector<int> tail_period);
  /// Segment table covering positions 1..radius contiguously; x(0) = 1.
  static BinarySeqZ from_runs(std::vector<Run> runs);

  bool constructed() const { return constructed_; }
  int at(long long i) const;  ///< throws outside the defined radius
  /// Largest defined |i| for segment tables; nothing when total.
  std::optional<long long> defined_radius() const;
  /// Ones on [1, j] (exact).
  long long ones_to(long long j) const;
  /// Exact window mean (x(0) + 2·ones_to(j)) / (2j+1).
  Rat mean_at(long long j) const;
  /// Limit of the window means (tail density; 0 for segment tables).
  Rat limit_mean() const;
  /// Bits x(0..j) as a plain array.
  std::vector<int> materialize(long long j) const;
  /// Explicit values x(0..N); total sequences only.
  const std::vector<int>& head() const;
  /// Repeating tail bits from position N+1 on; total sequences only.
  const std::vector<int>& period() const;

 private:
  bool constructed_ = false;
  std::vector<int> head_{0};
  std::vector<int> period_{0};
  std::vector<Run> runs_;
  std::vector<long long> ones_before_;  ///< ones in runs before each run
};

/// One inductive stage of the x0 construction: the refined index i_prime,
/// the stopping index t_k, the new radius i_k = f(k) + t_k, and the one
/// count after the stage (= 2 f(k) + previous count).
struct X0Stage {
  long long k = 0;
  long long f_k = 0;
  long long i_prev = 0;
  long long i_prime = 0;
  long long t_k = 0;
  long long i_k = 0;
  long long ones = 0;
};

struct X0Construction {
  BinarySeqZ x;
  long long i2 = 5;  ///< base radius; bits 0,0,0,1,1 at positions 1..5
  std::vector<X0Stage> stages;
};

/// Runs the inductive window construction for stages 3..k_max against the
/// rate function f. Every stage's bracketing inequalities are re-verified
/// with exact rationals; their failure (provably impossible) throws
/// std::logic_error.
X0Construction build_x0(const std::function<long long(long long)>& f,
                        long long k_max);

/// Per-k row of the modulus report over [0, horizon]: j_min is the least j
/// such that every later window mean up to the horizon deviates from the
/// limit by strictly less than 1/k (undetermined when the horizon itself
/// deviates); f_violation is the least j > f(k) whose deviation reaches
/// 1/k, when one exists up to the horizon.
struct ModulusRow {
  long long k = 0;
  std::optional<long long> j_min;
  std::optional<long long> f_violation;
};

struct ModulusTable {
  Rat mean;
  long long horizon = 0;
  std::vector<ModulusRow> rows;  ///< k = 1..k_max
};

/// Scans the window means once and reports, for each k ≤ k_max, the
/// horizon-relative stability index and the least witness that f fails as
/// a convergence modulus. Absence of a witness up to the horizon is only
/// "undetermined", never a validity claim.
ModulusTable modulus_table(const BinarySeqZ& x,
                           const std::function<long long(long long)>& f,
                           long long k_max, long long horizon);

/// Pairwise variant (no limit value consulted): least j such that every two
/// window means with indices in (j, horizon] differ by strictly less than
/// 1/k. Both indices are required to exceed j.
long long pairwise_modulus_index(const BinarySeqZ& x, long long k,
                                 long long horizon);

/// Exact double sum Σ_{i≤n} Σ_{j≤n} g_i(j) over the listed prefix of an
/// enumeration (i capped at the list length); eventually dominates every
/// listed function. Values must be nonnegative.
Int dominator(const std::vector<std::function<long long(long long)>>& gs,
              long long n);

/// Partial sum of the first `digits` binary digits of x along the fixed
/// window-order enumeration of the integers 0, -1, 1, -2, 2, …
Rat real_embed(const BinarySeqZ& x, long long digits);

/// Exact limit of real_embed for total sequences (geometric tail).
Rat limit_real(const BinarySeqZ& x);

/// Nearby real with a far-away mean: x truncated after `digits` window-order
/// digits, tail filled constantly (0 when the mean exceeds 1/2, else 1).
struct DiscontinuityWitness {
  BinarySeqZ x_prime;
  long long digits = 0;
  Rat r;
  Rat r_prime;
  Rat mean;
  Rat mean_prime;
};

/// Builds the witness for a total x whose embedded real lies strictly
/// inside (q, q_prime): |r - r'| < eps with both reals inside the interval,
/// and |mean - mean'| > 1/2. Throws DiscontinuityRefusal when the mean is
/// exactly 1/2 (no constant tail separates by more than one half).
DiscontinuityWitness discontinuity_witness(const BinarySeqZ& x, const Rat& q,
                                           const Rat& q_prime, const Rat& eps);

}  // namespace folner
