#pragma once

#include <array>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "folner/codes.hpp"
#include "folner/common.hpp"
#include "folner/words.hpp"

namespace folner {

/// Lamp-group element: finitely many lit lamps on ℤ plus a head position.
struct LampElement {
  std::set<long long> lamps;
  long long shift = 0;

  friend bool operator==(const LampElement&, const LampElement&) = default;
  friend bool operator<(const LampElement& a, const LampElement& b) {
    if (a.shift != b.shift) return a.shift < b.shift;
    return a.lamps < b.lamps;
  }
};

/// Element of a finite group given by its multiplication table.
struct FiniteElement {
  int value = 0;

  friend bool operator==(const FiniteElement&, const FiniteElement&) = default;
  friend bool operator<(const FiniteElement& a, const FiniteElement& b) {
    return a.value < b.value;
  }
};

/// Family-specific unique normal form; equality of values is equality in G.
using CanonicalElement =
    std::variant<long long,                      // Z
                 std::vector<long long>,         // Zd
                 std::map<long long, long long>, // direct sum of copies of Z
                 LampElement,                    // lamplighter
                 std::array<long long, 3>,       // Heisenberg
                 FiniteElement,                  // finite table group
                 Rat>;                           // rationals of the circle

/// A numbered group (G, ν): ν maps code n to eval(decode_word(n)), a
/// homomorphism from the enumerated free group fixed by the generator images.
class Group {
 public:
  virtual ~Group() = default;

  virtual std::string name() const = 0;
  virtual CanonicalElement identity() const = 0;
  virtual CanonicalElement generator(long long i) const = 0;
  virtual CanonicalElement mul(const CanonicalElement& a,
                               const CanonicalElement& b) const = 0;
  virtual CanonicalElement inverse(const CanonicalElement& a) const = 0;
  virtual std::string render(const CanonicalElement& a) const = 0;

  /// The family's standard ball of the given radius: interval {−r..r} in ℤ,
  /// box {−r..r}^d in ℤᵈ, reduced fractions with denominator ≤ r on the
  /// circle, the whole group for finite families, and documented windows for
  /// the remaining families. Used to bound exhaustive searches.
  virtual std::vector<CanonicalElement> ball(long long radius) const;

  /// A normal-form spelling of the element as a word in the generators.
  virtual Word element_word(const CanonicalElement& a) const;

  /// Code of the normal-form spelling (a ν-preimage of the element).
  Int element_code(const CanonicalElement& a) const;

  /// a^k by binary exponentiation (k may be negative).
  CanonicalElement power(const CanonicalElement& a, long long k) const;

  /// Homomorphic image of a reduced word.
  CanonicalElement eval(const Word& w) const;

  /// ν(code): image of the coded word.
  CanonicalElement eval_code(const Int& code) const;
};

/// All generators map to 1 ∈ ℤ.
std::shared_ptr<Group> make_z();
/// Generator i maps to the unit vector e_{i mod d} in ℤ^d.
std::shared_ptr<Group> make_zd(int d);
/// Generator i maps to the unit vector e_i in the direct sum ⊕ℤ.
std::shared_ptr<Group> make_direct_sum_z();
/// Lamplighter: g0 is the shift, every other generator toggles the lamp at 0.
std::shared_ptr<Group> make_lamplighter();
/// Heisenberg: g0, g1 are the two standard generators, the rest are central.
std::shared_ptr<Group> make_heisenberg();
/// Finite group from a multiplication table (validated); generator i maps to
/// element (i+1) mod k so that the numbering is onto.
std::shared_ptr<Group> make_finite(const std::vector<std::vector<int>>& table);
/// Cyclic group of order k as a finite table group (g0 maps to 1).
std::shared_ptr<Group> make_cyclic(int k);
/// Rationals modulo 1; generator i maps to 1/(i+1) mod 1 (dense image).
std::shared_ptr<Group> make_circle_rationals();

/// Decidable equality of coded elements: ν(a) = ν(b).
bool equal(const Group& g, const Int& a, const Int& b);

/// First `budget` pairs of the fixed fair enumeration of
/// {(a, b) : ν(a) = ν(b)} (ordered by code sum, then lexicographically).
std::vector<std::pair<Int, Int>> equality_pairs(const Group& g,
                                                std::size_t budget);

/// Memoizing view of ν for hot loops.
class NuCache {
 public:
  explicit NuCache(const Group& g) : group_(g) {}

  const CanonicalElement& operator()(const Int& code);
  const Group& group() const { return group_; }

 private:
  const Group& group_;
  std::map<Int, CanonicalElement> memo_;
};

/// Enumerates the codes that are the least code of their group element, in
/// ascending order — an injective (bijective onto ν(ℕ)) sub-numbering.
class LeastCodeEnumerator {
 public:
  explicit LeastCodeEnumerator(const Group& g) : group_(g) {}

  /// Next least-code representative (starts at code 0).
  Int next();

 private:
  const Group& group_;
  Int cursor_{0};
  std::set<CanonicalElement> seen_;
};

}  // namespace folner
