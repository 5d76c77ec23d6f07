#include "folner/wp.hpp"

#include <algorithm>
#include <cstdlib>
#include <iterator>
#include <numeric>
#include <set>
#include <string>

namespace folner {

namespace {

constexpr long long kOracleSizeCap = 1LL << 22;

long long ll_abs(long long v) { return v < 0 ? -v : v; }

void check_tolerance(long long n) {
  if (n <= 0) throw std::invalid_argument("tolerance index must be positive");
}

}  // namespace

CeView::CeView(const Group& g, const std::array<Int, 2>& multipliers,
               const std::vector<Int>& F) {
  std::map<CanonicalElement, Int> to_code;
  std::vector<CanonicalElement> values;
  values.reserve(F.size());
  for (const Int& f : F) {
    CanonicalElement v = g.eval_code(f);
    auto [it, fresh] = to_code.emplace(v, f);
    if (!fresh) {
      throw std::invalid_argument("oracle set is not injectively coded");
    }
    values.push_back(it->first);
  }
  const std::array<CanonicalElement, 2> mv{g.eval_code(multipliers[0]),
                                           g.eval_code(multipliers[1])};
  for (std::size_t k = 0; k < F.size(); ++k) {
    for (int side = 0; side < 2; ++side) {
      auto it = to_code.find(g.mul(mv[static_cast<std::size_t>(side)],
                                   values[k]));
      if (it != to_code.end()) {
        facts_.push_back(Confirmation{side, F[k], it->second});
      }
    }
  }
}

std::optional<CeView::Confirmation> CeView::next() {
  if (cursor_ == facts_.size()) return std::nullopt;
  ++emitted_;
  return facts_[cursor_++];
}

bool decide_equal_via_folner(const Group& g, const Int& n1, const Int& n2,
                             const FolnerOracle& oracle, long long budget,
                             WpStats* stats) {
  const std::vector<Int> d{n1, n2};
  const std::vector<Int> f_codes = oracle(3, d);
  if (stats) {
    ++stats->oracle_requests;
    stats->request_shapes.emplace_back(3, d.size());
    stats->set_size = static_cast<long long>(f_codes.size());
  }
  CeView view(g, {n1, n2}, f_codes);
  const std::size_t m = f_codes.size();
  std::array<std::map<Int, Int>, 2> sigma;
  while (3 * sigma[0].size() < 2 * m || 3 * sigma[1].size() < 2 * m) {
    if (view.emitted() >= budget) {
      throw BudgetExhaustedError(
          "confirmation budget exhausted before both matchings covered "
          "two thirds of the set");
    }
    auto c = view.next();
    if (!c) {
      throw BudgetExhaustedError(
          "confirmations ran out before both matchings covered two thirds "
          "of the set: the oracle's output was not a valid witness");
    }
    sigma[static_cast<std::size_t>(c->side)].emplace(c->f, c->f_prime);
  }
  if (stats) stats->confirmations = view.emitted();
  for (const auto& [f, fp] : sigma[0]) {
    auto it = sigma[1].find(f);
    if (it != sigma[1].end()) return fp == it->second;
  }
  throw std::logic_error(
      "two matchings each covering two thirds share no left element");
}

FolnerOracle interval_oracle(const Group& z) {
  return [&z](long long n, const std::vector<Int>& D) {
    check_tolerance(n);
    long long maxabs = 1;
    for (const Int& d : D) {
      maxabs = std::max(maxabs, ll_abs(std::get<long long>(z.eval_code(d))));
    }
    const long long len = n * maxabs;
    std::vector<Int> codes;
    codes.reserve(static_cast<std::size_t>(len));
    for (long long k = 0; k < len; ++k) codes.push_back(z.element_code(k));
    return codes;
  };
}

FolnerOracle box_oracle(const Group& zd, int d) {
  if (d <= 0) throw std::invalid_argument("dimension must be positive");
  return [&zd, d](long long n, const std::vector<Int>& D) {
    check_tolerance(n);
    std::vector<long long> len(static_cast<std::size_t>(d), 1);
    for (const Int& code : D) {
      const auto v = std::get<std::vector<long long>>(zd.eval_code(code));
      for (std::size_t i = 0; i < len.size(); ++i) {
        len[i] = std::max(len[i], n * d * ll_abs(v[i]));
      }
    }
    long long size = 1;
    for (long long li : len) {
      size *= li;
      if (size > kOracleSizeCap) {
        throw std::invalid_argument("witness box would be too large");
      }
    }
    std::vector<Int> codes;
    codes.reserve(static_cast<std::size_t>(size));
    std::vector<long long> v(len.size(), 0);
    while (true) {
      codes.push_back(zd.element_code(v));
      std::size_t i = 0;
      while (i < v.size() && ++v[i] == len[i]) v[i++] = 0;
      if (i == v.size()) break;
    }
    return codes;
  };
}

FolnerOracle direct_sum_oracle(const Group& ds) {
  return [&ds](long long n, const std::vector<Int>& D) {
    check_tolerance(n);
    std::map<long long, long long> len;  // coordinate -> box length
    for (const Int& code : D) {
      const auto v = std::get<std::map<long long, long long>>(ds.eval_code(code));
      for (const auto& [coord, val] : v) {
        long long& li = len[coord];
        li = std::max(li, ll_abs(val));
      }
    }
    std::vector<long long> coords;
    std::vector<long long> bound;
    const long long touched = static_cast<long long>(len.size());
    long long size = 1;
    for (auto& [coord, maxabs] : len) {
      coords.push_back(coord);
      bound.push_back(std::max<long long>(1, n * touched * maxabs));
      size *= bound.back();
      if (size > kOracleSizeCap) {
        throw std::invalid_argument("witness box would be too large");
      }
    }
    std::vector<Int> codes;
    codes.reserve(static_cast<std::size_t>(size));
    std::vector<long long> v(coords.size(), 0);
    while (true) {
      std::map<long long, long long> elem;
      for (std::size_t i = 0; i < coords.size(); ++i) {
        if (v[i] != 0) elem[coords[i]] = v[i];
      }
      codes.push_back(ds.element_code(elem));
      std::size_t i = 0;
      while (i < v.size() && ++v[i] == bound[i]) v[i++] = 0;
      if (i == v.size()) break;
    }
    return codes;
  };
}

namespace {

/// Exact count of window heads j in [0, N) whose whole lamp fibre survives
/// left translation by (lamps, shift): the head must stay in the window and
/// the translating lamps must land inside the M positions behind the new head.
long long good_heads(const LampElement& x, long long heads, long long depth) {
  long long good = 0;
  for (long long j = 0; j < heads; ++j) {
    const long long nj = x.shift + j;
    if (nj < 0 || nj >= heads) continue;
    if (!x.lamps.empty()) {
      const long long lo = *x.lamps.begin();
      const long long hi = *x.lamps.rbegin();
      if (hi > nj - 1 || lo < nj - depth) continue;
    }
    ++good;
  }
  return good;
}

std::vector<Int> lamp_window(const Group& g, long long heads, long long depth) {
  if (depth >= 22 || heads << depth > kOracleSizeCap) {
    throw std::invalid_argument("witness window would be too large");
  }
  std::vector<Int> codes;
  codes.reserve(static_cast<std::size_t>(heads << depth));
  for (long long j = 0; j < heads; ++j) {
    for (long long mask = 0; mask < (1LL << depth); ++mask) {
      LampElement e;
      e.shift = j;
      for (long long b = 0; b < depth; ++b) {
        if ((mask >> b) & 1) e.lamps.insert(j - depth + b);
      }
      codes.push_back(g.element_code(e));
    }
  }
  return codes;
}

}  // namespace

FolnerOracle lamplighter_oracle(const Group& lamp) {
  return [&lamp](long long n, const std::vector<Int>& D) -> std::vector<Int> {
    check_tolerance(n);
    if (D.size() != 2) {
      throw std::invalid_argument("lamp oracle expects exactly two codes");
    }
    const auto x1 = std::get<LampElement>(lamp.eval_code(D[0]));
    const auto x2 = std::get<LampElement>(lamp.eval_code(D[1]));

    if (x1 == x2) {
      // Cyclic block {x^k : k < n}; collapses to the full finite cyclic
      // subgroup when x has finite order, so every defect is at most 1/n.
      std::set<CanonicalElement> seen;
      std::vector<Int> codes;
      CanonicalElement cur = lamp.identity();
      for (long long k = 0; k < n; ++k) {
        if (!seen.insert(cur).second) break;
        codes.push_back(lamp.element_code(std::get<LampElement>(cur)));
        cur = lamp.mul(cur, CanonicalElement{x1});
      }
      return codes;
    }
    if (x1.shift == 0 && x2.shift == 0) {
      // Shiftless inputs generate a finite lamp-configuration span, which
      // both translations permute: all defects vanish.
      std::set<LampElement> span{x1, x2};
      LampElement both;
      std::set_symmetric_difference(x1.lamps.begin(), x1.lamps.end(),
                                    x2.lamps.begin(), x2.lamps.end(),
                                    std::inserter(both.lamps, both.lamps.end()));
      span.insert(both);
      span.insert(LampElement{});
      std::vector<Int> codes;
      for (const LampElement& e : span) codes.push_back(lamp.element_code(e));
      return codes;
    }
    if (x1.lamps.empty() && x2.lamps.empty()) {
      // Lampless inputs translate the shift coordinate only: an interval of
      // shift powers of length n·max|shift| keeps every defect at most 1/n.
      const long long maxabs =
          std::max({ll_abs(x1.shift), ll_abs(x2.shift), 1LL});
      std::vector<Int> codes;
      for (long long j = 0; j < n * maxabs; ++j) {
        LampElement e;
        e.shift = j;
        codes.push_back(lamp.element_code(e));
      }
      return codes;
    }
    // General case: heads in [0, heads) with arbitrary lamps on the `depth`
    // positions behind the head, grown until both exact defects fit.
    long long spread = 0;
    long long smax = 1;
    for (const LampElement* x : {&x1, &x2}) {
      if (!x->lamps.empty()) {
        spread = std::max(spread, *x->lamps.rbegin() - *x->lamps.begin() + 1);
        spread = std::max({spread, ll_abs(*x->lamps.rbegin()) + 1,
                           ll_abs(*x->lamps.begin()) + 1});
      }
      smax = std::max(smax, ll_abs(x->shift));
    }
    long long heads = n * smax;
    while (true) {
      const long long depth = heads + spread + smax;
      if (n * (heads - good_heads(x1, heads, depth)) <= heads &&
          n * (heads - good_heads(x2, heads, depth)) <= heads) {
        return lamp_window(lamp, heads, depth);
      }
      heads *= 2;
      if (heads > 64) {
        throw std::invalid_argument("witness window would be too large");
      }
    }
  };
}

FolnerOracle heisenberg_oracle(const Group& h) {
  return [&h](long long n, const std::vector<Int>& D) {
    check_tolerance(n);
    std::vector<std::array<long long, 3>> xs;
    for (const Int& code : D) {
      xs.push_back(std::get<std::array<long long, 3>>(h.eval_code(code)));
    }
    for (long long len = n;; len *= 2) {
      const long long height = len * len;
      const long long side = 2 * len + 1;
      const long long vert = 2 * height + 1;
      const long long total = side * side * vert;
      if (total > kOracleSizeCap) {
        throw std::invalid_argument("witness box would be too large");
      }
      bool ok = true;
      for (const auto& x : xs) {
        const long long cnt_a = std::max<long long>(0, side - ll_abs(x[0]));
        long long column = 0;
        const long long lo = std::max(-len, -len - x[1]);
        const long long hi = std::min(len, len - x[1]);
        for (long long f2 = lo; f2 <= hi; ++f2) {
          column += std::max<long long>(0, vert - ll_abs(x[2] + x[0] * f2));
        }
        // stays/total ≥ 1 - 1/n, kept exact in integers
        if (n * (total - cnt_a * column) > total) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      std::vector<Int> codes;
      codes.reserve(static_cast<std::size_t>(total));
      for (long long a = -len; a <= len; ++a) {
        for (long long b = -len; b <= len; ++b) {
          for (long long c = -height; c <= height; ++c) {
            codes.push_back(h.element_code(std::array<long long, 3>{a, b, c}));
          }
        }
      }
      return codes;
    }
  };
}

FolnerOracle whole_group_oracle(const Group& finite) {
  return [&finite](long long n, const std::vector<Int>&) {
    check_tolerance(n);
    std::vector<Int> codes;
    for (const CanonicalElement& e : finite.ball(1)) {
      codes.push_back(finite.element_code(e));
    }
    return codes;
  };
}

FolnerOracle subgroup_oracle(const Group& circle) {
  return [&circle](long long n, const std::vector<Int>& D) {
    check_tolerance(n);
    Int m = 1;
    for (const Int& code : D) {
      const Rat v = std::get<Rat>(circle.eval_code(code));
      const Int q = boost::multiprecision::denominator(v);
      m = boost::multiprecision::lcm(m, q);
    }
    const long long order = m.convert_to<long long>();
    if (order > kOracleSizeCap) {
      throw std::invalid_argument("witness subgroup would be too large");
    }
    std::vector<Int> codes;
    codes.reserve(static_cast<std::size_t>(order));
    for (long long k = 0; k < order; ++k) {
      codes.push_back(circle.element_code(Rat(k, order)));
    }
    return codes;
  };
}

FolnerOracle default_folner_oracle(const Group& g) {
  const std::string family = g.name();
  if (family == "Z") return interval_oracle(g);
  if (family == "DirectSumZ") return direct_sum_oracle(g);
  if (family == "Lamplighter") return lamplighter_oracle(g);
  if (family == "Heisenberg") return heisenberg_oracle(g);
  if (family == "CircleRationals") return subgroup_oracle(g);
  if (family.rfind("Finite", 0) == 0) return whole_group_oracle(g);
  if (family.rfind("Z", 0) == 0) {
    const int d = std::atoi(family.c_str() + 1);
    if (d > 0) return box_oracle(g, d);
  }
  throw std::invalid_argument("no built-in amenability oracle for family " +
                              family);
}

}  // namespace folner
