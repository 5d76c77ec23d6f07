#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "folner/common.hpp"
#include "folner/groups.hpp"

namespace folner {

/// A bounded enumeration ran out before reaching its goal.
struct BudgetExhaustedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Produces, for a tolerance index n and a finite code set D, a coded set F
/// with ν(F) 1/n-Følner with respect to D and |F| = |ν(F)|.
using FolnerOracle =
    std::function<std::vector<Int>(long long n, const std::vector<Int>& D)>;

/// Instrumentation of one equality decision.
struct WpStats {
  long long oracle_requests = 0;
  /// (n, |D|) of every oracle request — the procedure only ever uses (3, 2).
  std::vector<std::pair<long long, std::size_t>> request_shapes;
  long long confirmations = 0;  ///< enumerator emissions consumed
  long long set_size = 0;       ///< |F| returned by the oracle
};

/// Semi-decidable view of the equal-words set, restricted to the finite
/// announced rectangle {m₀, m₁} × F × F: emits, in a fixed fair round-robin
/// order (by F index, alternating sides), every confirmed fact
/// "mᵢ · f names the same element as f′" with f, f′ ∈ F. The consumer sees
/// confirmations only — never a decidable equality oracle.
class CeView {
 public:
  CeView(const Group& g, const std::array<Int, 2>& multipliers,
         const std::vector<Int>& F);

  struct Confirmation {
    int side = 0;  ///< which multiplier
    Int f;
    Int f_prime;
  };

  /// Next confirmation, or nothing once the finite rectangle is exhausted.
  std::optional<Confirmation> next();

  long long emitted() const { return emitted_; }

 private:
  std::vector<Confirmation> facts_;
  std::size_t cursor_ = 0;
  long long emitted_ = 0;
};

/// Decides ν(n₁) = ν(n₂) from an amenability oracle: requests a ⅓-Følner set
/// for {n₁, n₂}, consumes equality confirmations until each side's partial
/// matching covers ≥ ⅔ of the set, and compares the two images of the least
/// common left element. Consults only the confirmation enumerator; `budget`
/// caps the confirmations consumed (throws BudgetExhaustedError).
bool decide_equal_via_folner(const Group& g, const Int& n1, const Int& n2,
                             const FolnerOracle& oracle, long long budget,
                             WpStats* stats = nullptr);

/// Oracle for the integers: an interval of g₀-powers of length n·max|shift|.
FolnerOracle interval_oracle(const Group& z);

/// Oracle for ℤᵈ: a box with per-axis length n·d·max|coordinate|.
FolnerOracle box_oracle(const Group& zd, int d);

/// Oracle for ⊕ℤ: a box over the coordinates D touches.
FolnerOracle direct_sum_oracle(const Group& ds);

/// Oracle for lamp groups, by case: a cyclic block when the two codes agree,
/// the span of the lamp configurations for shiftless inputs, a shift interval
/// for lampless inputs, and an adaptively sized coupled window (head in
/// [0, N), lamps anywhere in the M positions behind the head) in general.
FolnerOracle lamplighter_oracle(const Group& lamp);

/// Oracle for the integer Heisenberg group: boxes [−L,L]² × [−L²,L²] with L
/// grown until the exact defect bound holds.
FolnerOracle heisenberg_oracle(const Group& h);

/// Oracle for finite groups: the whole group (all defects vanish).
FolnerOracle whole_group_oracle(const Group& finite);

/// Oracle for the rationals modulo 1: the cyclic subgroup generated by
/// 1/lcm(denominators of ν(D)), which every ν(D) translation permutes.
FolnerOracle subgroup_oracle(const Group& circle);

/// Family dispatch over the built-in zoo.
FolnerOracle default_folner_oracle(const Group& g);

}  // namespace folner
