#include "folner/sequences.hpp"

#include <algorithm>
#include <set>

#include "folner/folner.hpp"

namespace folner {

SequenceHorizonReport verify_sequence_horizon(const Group& g,
                                              const SequenceProgram& prog,
                                              long long horizon,
                                              const std::vector<Int>& x_set,
                                              long long n_max) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  // defects[k][xi], evaluated once per (stage, x)
  std::vector<std::vector<Rat>> defects(
      static_cast<std::size_t>(horizon) + 1);
  for (long long k = 0; k <= horizon; ++k) {
    auto set_k = prog(k);
    if (!set_k) throw SequenceTotalityError(k);
    if (set_k->empty()) {
      throw std::invalid_argument("sequence program produced an empty set at index " +
                                  std::to_string(k));
    }
    auto& row = defects[static_cast<std::size_t>(k)];
    row.reserve(x_set.size());
    for (const Int& x : x_set) row.push_back(defect(g, *set_k, x));
  }
  SequenceHorizonReport report;
  report.horizon = horizon;
  for (std::size_t xi = 0; xi < x_set.size(); ++xi) {
    for (long long n = 1; n <= n_max; ++n) {
      SequenceCell cell;
      cell.x = x_set[xi];
      cell.n = n;
      const Rat bound(1, n);
      for (long long k = 0; k <= horizon; ++k) {
        if (defects[static_cast<std::size_t>(k)][xi] >= bound) {
          cell.violations.push_back(k);
        }
      }
      if (cell.violations.empty()) {
        cell.least_l = 0;
      } else if (cell.violations.back() < horizon) {
        cell.least_l = cell.violations.back() + 1;
      }
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

bool WSpec::contains(long long n, long long x) const {
  if (x < 0) return false;
  switch (kind) {
    case Kind::Empty:
      return false;
    case Kind::All:
      return true;
    case Kind::Finite:
      return std::find(elems.begin(), elems.end(), x) != elems.end();
    case Kind::Progression:
      return x >= start && step > 0 && (x - start) % step == 0;
    case Kind::Initial:
      return x <= n;
  }
  return false;
}

const WSpec& CeFamilyModel::spec(long long n) const {
  auto it = w.find(n);
  return it == w.end() ? fallback : it->second;
}

std::optional<std::pair<long long, long long>> CeFamilyModel::pair_at(
    long long s) const {
  if (s < 1) throw std::invalid_argument("pair index must be positive");
  bool unbounded = fallback.infinite() ||
                   fallback.kind == WSpec::Kind::Initial ||
                   (fallback.kind == WSpec::Kind::Finite && !fallback.elems.empty());
  long long d_cap = 0;
  for (const auto& [n, sp] : w) {
    if (sp.infinite()) unbounded = true;
    if (sp.kind == WSpec::Kind::Initial) d_cap = std::max(d_cap, 2 * n);
    if (sp.kind == WSpec::Kind::Finite && !sp.elems.empty()) {
      d_cap = std::max(
          d_cap, n + *std::max_element(sp.elems.begin(), sp.elems.end()));
    }
  }
  long long count = 0;
  for (long long d = 1; unbounded || d <= d_cap; ++d) {
    for (long long n = 1; n <= d; ++n) {
      if (spec(n).contains(n, d - n) && ++count == s) {
        return std::pair<long long, long long>{n, d - n};
      }
    }
  }
  return std::nullopt;
}

std::optional<long long> CeFamilyModel::designated_infinite() const {
  long long max_key = 0;
  for (const auto& [n, sp] : w) max_key = std::max(max_key, n);
  for (long long n = 1; n <= max_key + 1; ++n) {
    if (spec(n).infinite()) return n;
  }
  return std::nullopt;
}

Int ProductSet::size() const {
  Int total = 1;
  for (const auto& f : factors) total *= static_cast<long long>(f.size());
  return total;
}

Rat ProductSet::defect(const std::map<long long, long long>& shift) const {
  Rat stay = 1;
  for (const auto& [coord, k] : shift) {
    if (k == 0) continue;
    if (coord < 1 || coord > static_cast<long long>(factors.size())) {
      return Rat(1);
    }
    const auto& f = factors[static_cast<std::size_t>(coord - 1)];
    if (f.empty()) throw std::invalid_argument("empty factor");
    const std::set<long long> in(f.begin(), f.end());
    long long overlap = 0;
    for (long long e : f) {
      if (in.count(e - k) != 0) ++overlap;
    }
    if (overlap == 0) return Rat(1);
    stay *= Rat(overlap, static_cast<long long>(f.size()));
  }
  return 1 - stay;
}

std::vector<Int> ProductSet::to_codes(const Group& direct_sum) const {
  if (size() > Int(1LL << 20)) {
    throw std::invalid_argument("product set is too large to materialize");
  }
  for (const auto& f : factors) {
    if (f.empty()) throw std::invalid_argument("empty factor");
  }
  std::vector<Int> codes;
  std::vector<std::size_t> idx(factors.size(), 0);
  while (true) {
    std::map<long long, long long> elem;
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const long long e = factors[i][idx[i]];
      if (e != 0) elem[static_cast<long long>(i) + 1] = e;
    }
    codes.push_back(direct_sum.element_code(elem));
    std::size_t i = 0;
    while (i < idx.size() && ++idx[i] == factors[i].size()) idx[i++] = 0;
    if (i == idx.size()) break;
  }
  return codes;
}

namespace {

std::vector<long long> symmetric_range(long long s) {
  std::vector<long long> out;
  for (long long e = -s; e <= s; ++e) out.push_back(e);
  return out;
}

/// Stage-s set, tolerating a missing s-th pair (plain full product then).
ReductionSet stage_set(const CeFamilyModel& model, long long s) {
  if (s < 1) throw std::invalid_argument("stage index must be positive");
  ReductionSet out;
  out.s = s;
  if (auto pair = model.pair_at(s)) {
    out.n_s = pair->first;
    out.x_s = pair->second;
  }
  for (long long i = 1; i <= s; ++i) {
    if (i == out.n_s) {
      out.set.factors.push_back({-1, 0, 1});
    } else {
      out.set.factors.push_back(symmetric_range(s));
    }
  }
  return out;
}

}  // namespace

ReductionSet build_reduction_set(const CeFamilyModel& model, long long s) {
  if (s < 1) throw std::invalid_argument("stage index must be positive");
  if (!model.pair_at(s)) {
    throw std::invalid_argument(
        "the pair enumeration holds fewer than " + std::to_string(s) +
        " pairs");
  }
  return stage_set(model, s);
}

CaseStudyReport reduction_case_study(const CeFamilyModel& model,
                                     long long horizon) {
  if (horizon < 1) throw std::invalid_argument("horizon must be positive");
  CaseStudyReport report;
  const auto designated = model.designated_infinite();
  if (designated) {
    report.has_infinite = true;
    report.designated_n = *designated;
    const Rat bound(1, 4);
    for (long long s = 1; s <= horizon; ++s) {
      const ReductionSet rs = stage_set(model, s);
      if (rs.set.defect({{report.designated_n, 1}}) >= bound) {
        report.failure_indices.push_back(s);
      }
    }
    report.behaves_as_folner = report.failure_indices.empty();
    return report;
  }
  // All W finite: record tail thresholds for the first two coordinate shifts.
  std::vector<std::vector<Rat>> defects;  // defects[s-1][coord-1]
  for (long long s = 1; s <= horizon; ++s) {
    const ReductionSet rs = stage_set(model, s);
    defects.push_back(
        {rs.set.defect({{1, 1}}), rs.set.defect({{2, 1}})});
  }
  bool all_pass = true;
  for (long long coord = 1; coord <= 2; ++coord) {
    for (long long n = 1; n <= 4; ++n) {
      CaseCell cell;
      cell.coord = coord;
      cell.n = n;
      const Rat bound(1, n);
      for (long long s = 1; s <= horizon; ++s) {
        if (defects[static_cast<std::size_t>(s - 1)]
                   [static_cast<std::size_t>(coord - 1)] >= bound) {
          cell.violations.push_back(s);
        }
      }
      if (cell.violations.empty()) {
        cell.least_l = 1;
      } else if (cell.violations.back() < horizon) {
        cell.least_l = cell.violations.back() + 1;
      } else {
        all_pass = false;
      }
      report.thresholds.push_back(std::move(cell));
    }
  }
  report.behaves_as_folner = all_pass;
  return report;
}

}  // namespace folner
