#include "folner/matching.hpp"

#include <algorithm>
#include <stdexcept>

namespace folner {

namespace {

bool augment(std::size_t i, const BipartiteGraph& g, std::vector<char>& seen,
             std::vector<std::optional<std::size_t>>& match_right) {
  for (std::size_t j : g.adj[i]) {
    if (seen[j]) continue;
    seen[j] = 1;
    if (!match_right[j] || augment(*match_right[j], g, seen, match_right)) {
      match_right[j] = i;
      return true;
    }
  }
  return false;
}

void validate(const BipartiteGraph& g) {
  if (g.adj.size() != g.left) {
    throw std::invalid_argument("adjacency list size must equal left");
  }
  for (const auto& row : g.adj) {
    for (std::size_t j : row) {
      if (j >= g.right) {
        throw std::invalid_argument("right neighbor index out of range");
      }
    }
  }
}

}  // namespace

MatchingCertificate maximum_matching(const BipartiteGraph& g) {
  validate(g);
  MatchingCertificate cert;
  cert.match_left.assign(g.left, std::nullopt);
  cert.match_right.assign(g.right, std::nullopt);
  std::vector<char> seen;
  for (std::size_t i = 0; i < g.left; ++i) {
    seen.assign(g.right, 0);
    if (augment(i, g, seen, cert.match_right)) ++cert.mu;
  }
  for (std::size_t j = 0; j < g.right; ++j) {
    if (cert.match_right[j]) cert.match_left[*cert.match_right[j]] = j;
  }

  // alternating-reachability cut from the unmatched left vertices
  std::vector<char> in_left(g.left, 0), in_right(g.right, 0);
  std::vector<std::size_t> queue;
  for (std::size_t i = 0; i < g.left; ++i) {
    if (!cert.match_left[i]) {
      in_left[i] = 1;
      queue.push_back(i);
    }
  }
  while (!queue.empty()) {
    const std::size_t i = queue.back();
    queue.pop_back();
    for (std::size_t j : g.adj[i]) {
      if (in_right[j]) continue;
      in_right[j] = 1;
      // j must be matched, or an augmenting path was missed
      if (!cert.match_right[j]) {
        throw std::logic_error("unmatched right vertex reached at maximality");
      }
      const std::size_t partner = *cert.match_right[j];
      if (!in_left[partner]) {
        in_left[partner] = 1;
        queue.push_back(partner);
      }
    }
  }
  for (std::size_t i = 0; i < g.left; ++i) {
    if (in_left[i]) cert.deficiency_set.push_back(i);
  }
  for (std::size_t j = 0; j < g.right; ++j) {
    if (in_right[j]) cert.deficiency_neighborhood.push_back(j);
  }

  // re-verify the certificate: N(S) is exactly the recorded neighborhood,
  // and the deficiency attains left − mu
  for (std::size_t i : cert.deficiency_set) {
    for (std::size_t j : g.adj[i]) {
      if (!in_right[j]) {
        throw std::logic_error("deficiency neighborhood is not closed");
      }
    }
  }
  if (cert.deficiency_set.size() - cert.deficiency_neighborhood.size() !=
      g.left - cert.mu) {
    throw std::logic_error("deficiency certificate does not match mu");
  }
  return cert;
}

std::size_t hall_deficiency_exhaustive(const BipartiteGraph& g) {
  validate(g);
  if (g.left > 20 || g.right > 64) {
    throw std::invalid_argument("exhaustive scan limited to 20 x 64 graphs");
  }
  std::vector<unsigned long long> nbr(g.left, 0);
  for (std::size_t i = 0; i < g.left; ++i) {
    for (std::size_t j : g.adj[i]) nbr[i] |= 1ULL << j;
  }
  std::size_t best = 0;  // the empty set attains 0
  for (unsigned long long mask = 0; mask < (1ULL << g.left); ++mask) {
    unsigned long long un = 0;
    std::size_t size = 0;
    for (std::size_t i = 0; i < g.left; ++i) {
      if (mask >> i & 1) {
        un |= nbr[i];
        ++size;
      }
    }
    const std::size_t n_size =
        static_cast<std::size_t>(__builtin_popcountll(un));
    if (size > n_size) best = std::max(best, size - n_size);
  }
  return best;
}

}  // namespace folner
