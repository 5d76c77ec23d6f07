#include "folner/folner.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace folner {

namespace {

/// Distinct canonical forms of a coded set.
std::set<CanonicalElement> canonical_set(const Group& g,
                                         const std::vector<Int>& F) {
  if (F.empty()) throw std::invalid_argument("empty set has no defect");
  std::set<CanonicalElement> s;
  for (const Int& i : F) s.insert(g.eval_code(i));
  return s;
}

long long boundary_count(const Group& g, const std::set<CanonicalElement>& s,
                         const CanonicalElement& x) {
  std::set<CanonicalElement> shifted;
  for (const CanonicalElement& e : s) shifted.insert(g.mul(x, e));
  long long out = 0;
  for (const CanonicalElement& e : s) out += shifted.count(e) ? 0 : 1;
  return out;
}

}  // namespace

Rat defect(const Group& g, const std::vector<Int>& F, const Int& x) {
  auto s = canonical_set(g, F);
  long long leaving = boundary_count(g, s, g.eval_code(x));
  return Rat(leaving, static_cast<long long>(s.size()));
}

Rat intersection_ratio(const Group& g, const std::vector<Int>& F,
                       const Int& x) {
  auto s = canonical_set(g, F);
  long long leaving = boundary_count(g, s, g.eval_code(x));
  return Rat(static_cast<long long>(s.size()) - leaving,
             static_cast<long long>(s.size()));
}

std::variant<FolnerWitness, FolnerRefusal> is_folner(
    const Group& g, const std::vector<Int>& F, const std::vector<Int>& D,
    long long n) {
  if (n <= 0) throw std::invalid_argument("tolerance index must be positive");
  auto s = canonical_set(g, F);
  Rat bound(1, n);
  FolnerWitness w;
  w.n = n;
  w.codes.assign(F.begin(), F.end());
  std::sort(w.codes.begin(), w.codes.end());
  w.codes.erase(std::unique(w.codes.begin(), w.codes.end()), w.codes.end());
  w.injective = w.codes.size() == s.size();
  for (const Int& x : D) {
    Rat d(boundary_count(g, s, g.eval_code(x)),
          static_cast<long long>(s.size()));
    if (d > bound) return FolnerRefusal{x, d};
    w.defects.emplace(x, d);
  }
  return w;
}

const std::vector<Int>& CanonicalSetEnumerator::next() {
  if (first_) {
    first_ = false;
  } else {
    // Advance comb_ to the next (size_−1)-combination of [0, max_), in
    // lexicographic order on ascending tuples; roll size, then max.
    long long k = size_ - 1;
    long long i = k - 1;
    while (i >= 0 &&
           comb_[static_cast<size_t>(i)] == max_ - (k - i)) {
      --i;
    }
    if (i >= 0) {
      ++comb_[static_cast<size_t>(i)];
      for (long long j = i + 1; j < k; ++j) {
        comb_[static_cast<size_t>(j)] = comb_[static_cast<size_t>(j - 1)] + 1;
      }
    } else {
      ++size_;
      if (size_ > max_ + 1) {
        ++max_;
        size_ = 1;
      }
      comb_.resize(static_cast<size_t>(size_ - 1));
      for (long long j = 0; j < size_ - 1; ++j) {
        comb_[static_cast<size_t>(j)] = j;
      }
    }
  }
  current_.clear();
  for (long long c : comb_) current_.emplace_back(c);
  current_.emplace_back(max_);
  return current_;
}

std::variant<FolnerWitness, SearchExhausted> search_folner(
    const Group& g, long long n, const std::vector<Int>& D, long long budget) {
  if (n <= 0) throw std::invalid_argument("tolerance index must be positive");
  CanonicalSetEnumerator sets;
  for (long long examined = 0; examined < budget;) {
    const std::vector<Int>& F = sets.next();
    ++examined;
    auto verdict = is_folner(g, F, D, n);
    if (auto* w = std::get_if<FolnerWitness>(&verdict); w && w->injective) {
      return std::move(*w);
    }
  }
  return SearchExhausted{budget};
}

FolnerFunctionResult folner_function(const Group& g, long long n,
                                     const std::vector<Int>& D,
                                     long long search_bound) {
  if (n <= 0) throw std::invalid_argument("tolerance index must be positive");
  // Pool: one code per distinct element of the family ball, ascending codes.
  std::set<CanonicalElement> seen;
  std::vector<Int> pool;
  for (const CanonicalElement& e : g.ball(search_bound)) {
    if (seen.insert(e).second) pool.push_back(g.element_code(e));
  }
  std::sort(pool.begin(), pool.end());

  FolnerFunctionResult result;
  result.pool_size = static_cast<long long>(pool.size());
  size_t m = pool.size();
  std::vector<Int> subset;
  for (size_t k = 1; k <= m; ++k) {
    std::vector<size_t> idx(k);
    for (size_t j = 0; j < k; ++j) idx[j] = j;
    for (;;) {
      subset.clear();
      for (size_t j : idx) subset.push_back(pool[j]);
      auto verdict = is_folner(g, subset, D, n);
      if (auto* w = std::get_if<FolnerWitness>(&verdict)) {
        result.value = static_cast<long long>(k);
        result.witness = std::move(*w);
        return result;
      }
      // next k-combination of [0, m)
      size_t i = k;
      while (i > 0 && idx[i - 1] == m - (k - (i - 1))) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  result.pool_exhausted = true;
  return result;
}

}  // namespace folner
