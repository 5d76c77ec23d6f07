#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace folner {

/// Bipartite graph on index sets {0..left-1} and {0..right-1}.
struct BipartiteGraph {
  std::size_t left = 0;
  std::size_t right = 0;
  std::vector<std::vector<std::size_t>> adj;  ///< adj[i] = right neighbors of i
};

/// Maximum matching together with a dual optimality certificate: a left
/// subset S whose deficiency |S| − |N(S)| equals left − mu, the largest value
/// any subset attains, so mu = left − (|S| − |N(S)|).
struct MatchingCertificate {
  std::size_t mu = 0;
  std::vector<std::optional<std::size_t>> match_left;   ///< left i ↦ right j
  std::vector<std::optional<std::size_t>> match_right;  ///< right j ↦ left i
  std::vector<std::size_t> deficiency_set;           ///< S, ascending left ids
  std::vector<std::size_t> deficiency_neighborhood;  ///< N(S), ascending
};

/// Augmenting-path maximum matching. The deficiency certificate is read off
/// the final alternating-reachability cut; its optimality identity and the
/// neighborhood equation are re-verified before returning. Deterministic for
/// a fixed adjacency order.
MatchingCertificate maximum_matching(const BipartiteGraph& g);

/// max{|S| − |N(S)| : S ⊆ left} by exhaustive subset scan; requires
/// left ≤ 20 and right ≤ 64 (cross-check use only).
std::size_t hall_deficiency_exhaustive(const BipartiteGraph& g);

}  // namespace folner
