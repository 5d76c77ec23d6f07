#include "folner/metric.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <set>
#include <string>

namespace folner {

namespace {

Rat snap_down(const Rat& d, const Rat& grid) {
  const Rat t = d / grid;
  const Int fl =
      boost::multiprecision::numerator(t) / boost::multiprecision::denominator(t);
  return Rat(fl) * grid;
}

/// Decides d(ν(a), ν(b)) < q through interval queries, halving the precision
/// while the interval straddles q.
bool ball_edge(const Rat& q, const Int& a, const Int& b,
               const DistanceOracle& oracle) {
  Rat eps = q;
  for (int depth = 0; depth < 64; ++depth) {
    const Rat lo = oracle(a, b, eps);
    if (lo + eps <= q) return true;
    if (lo >= q) return false;
    eps /= 2;
  }
  throw PrecisionFailure("ball membership undecided after 64 refinements");
}

Int code_mul(const Int& a, const Int& b) {
  return encode_word(word_mul(decode_word(a), decode_word(b)));
}

long long ceil_rat(const Rat& r) {
  const Int num = boost::multiprecision::numerator(r);
  const Int den = boost::multiprecision::denominator(r);
  Int q = num / den;
  if (q * den < num) ++q;
  return q.convert_to<long long>();
}

long long floor_rat(const Rat& r) {
  return (boost::multiprecision::numerator(r) /
          boost::multiprecision::denominator(r))
      .convert_to<long long>();
}

}  // namespace

MetricGroup::MetricGroup(std::shared_ptr<const Group> g) : group_(std::move(g)) {
  if (!group_) throw std::invalid_argument("group must not be null");
  arc_ = group_->name() == "CircleRationals";
}

Rat MetricGroup::dist(const CanonicalElement& a, const CanonicalElement& b) const {
  if (!arc_) return a == b ? Rat(0) : Rat(1);
  const Rat raw = boost::multiprecision::abs(std::get<Rat>(a) - std::get<Rat>(b));
  return std::min(raw, Rat(1) - raw);
}

Rat MetricGroup::dist_codes(const Int& i, const Int& j) const {
  return dist(group_->eval_code(i), group_->eval_code(j));
}

DistanceOracle exact_distance_oracle(const MetricGroup& mg) {
  const MetricGroup copy = mg;
  return [copy](const Int& i, const Int& j, const Rat& eps) {
    if (eps <= 0) throw std::invalid_argument("precision must be positive");
    return snap_down(copy.dist_codes(i, j), eps);
  };
}

MatchingInstance matching_number(const MetricGroup& mg,
                                 const std::vector<CanonicalElement>& f1,
                                 const std::vector<CanonicalElement>& f2,
                                 const Rat& q, const DistanceOracle& oracle) {
  if (q <= 0) throw std::invalid_argument("ball radius must be positive");
  const Group& g = mg.group();
  MatchingInstance inst;
  inst.f1 = f1;
  inst.f2 = f2;
  inst.q = q;
  std::vector<Int> c1, c2;
  c1.reserve(f1.size());
  c2.reserve(f2.size());
  for (const auto& x : f1) c1.push_back(g.element_code(x));
  for (const auto& y : f2) c2.push_back(g.element_code(y));
  inst.graph.left = f1.size();
  inst.graph.right = f2.size();
  inst.graph.adj.assign(f1.size(), {});
  for (std::size_t i = 0; i < f1.size(); ++i) {
    for (std::size_t j = 0; j < f2.size(); ++j) {
      if (ball_edge(q, c2[j], c1[i], oracle)) inst.graph.adj[i].push_back(j);
    }
  }
  inst.certificate = maximum_matching(inst.graph);
  inst.mu = inst.certificate.mu;
  return inst;
}

EpsMatching eps_matching(const MetricGroup& mg,
                         const std::vector<CanonicalElement>& F,
                         const CanonicalElement& g, const Rat& eps,
                         const DistanceOracle& oracle) {
  EpsMatching out;
  out.gf.reserve(F.size());
  for (const auto& x : F) out.gf.push_back(mg.group().mul(g, x));
  const MatchingInstance inst = matching_number(mg, F, out.gf, eps, oracle);
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (inst.certificate.match_left[i]) {
      out.pairs.emplace_back(i, *inst.certificate.match_left[i]);
    }
  }
  out.domain_size = inst.mu;
  out.deficiency = F.size() - inst.mu;
  return out;
}

MetricFolnerReport is_metric_folner(const MetricGroup& mg,
                                    const std::vector<Int>& F,
                                    const std::vector<Int>& D, long long m,
                                    long long n) {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  if (F.empty()) throw std::invalid_argument("F must be nonempty");
  const Group& g = mg.group();
  std::set<CanonicalElement> distinct;
  for (const Int& f : F) distinct.insert(g.eval_code(f));
  const std::vector<CanonicalElement> values(distinct.begin(), distinct.end());

  MetricFolnerReport rep;
  rep.set_size = values.size();
  rep.m = m;
  rep.n = n;
  rep.ok = true;
  const DistanceOracle oracle = exact_distance_oracle(mg);
  const Rat radius(1, m);
  for (const Int& e : D) {
    const CanonicalElement ve = g.eval_code(e);
    std::vector<CanonicalElement> translated;
    translated.reserve(values.size());
    for (const auto& v : values) translated.push_back(g.mul(ve, v));
    const MatchingInstance inst =
        matching_number(mg, values, translated, radius, oracle);
    rep.per_e_mu.emplace_back(e, inst.mu);
    if (static_cast<long long>(inst.mu) * n <
        (n - 1) * static_cast<long long>(rep.set_size)) {
      if (rep.ok) {
        rep.violator = e;
        rep.violator_mu = inst.mu;
      }
      rep.ok = false;
    }
  }
  return rep;
}

ThetaHatOutcome theta_hat(const MetricGroup& mg, long long m, long long n,
                          const std::vector<Int>& D, const std::vector<Int>& F,
                          long long budget) {
  if (m < 1 || n < 1) throw std::invalid_argument("m and n must be positive");
  if (F.empty()) throw std::invalid_argument("F must be nonempty");
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  const Group& g = mg.group();

  // representatives of the value classes of F ∪ D·F: least code, preferring
  // codes in F, so the representative set restricted to F carries ν(F)
  std::map<CanonicalElement, std::pair<Int, bool>> reps;
  const auto offer = [&](const Int& code, bool in_f) {
    const CanonicalElement v = g.eval_code(code);
    auto it = reps.find(v);
    if (it == reps.end()) {
      reps.emplace(v, std::make_pair(code, in_f));
      return;
    }
    auto& [best, best_in_f] = it->second;
    if (in_f == best_in_f) {
      if (code < best) best = code;
    } else if (in_f) {
      best = code;
      best_in_f = true;
    }
  };
  for (const Int& f : F) offer(f, true);
  for (const Int& d : D) {
    for (const Int& f : F) offer(code_mul(d, f), false);
  }

  // representative table sorted by code; `members` restricted to F
  std::vector<Int> f0;
  std::vector<CanonicalElement> f0_val;
  std::vector<char> in_f;
  {
    std::vector<std::pair<Int, const CanonicalElement*>> order;
    for (const auto& [v, rb] : reps) order.emplace_back(rb.first, &v);
    std::sort(order.begin(), order.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [code, vp] : order) {
      f0.push_back(code);
      f0_val.push_back(*vp);
      in_f.push_back(reps.at(*vp).second ? 1 : 0);
    }
  }
  std::map<CanonicalElement, std::size_t> index_of;
  for (std::size_t i = 0; i < f0.size(); ++i) index_of.emplace(f0_val[i], i);
  std::vector<std::size_t> members;  // indices into f0 of the F-part
  for (std::size_t i = 0; i < f0.size(); ++i) {
    if (in_f[i]) members.push_back(i);
  }

  // per D element, the class of ν(e)·value(b) for every member b
  std::vector<std::vector<std::size_t>> target(D.size());
  for (std::size_t ei = 0; ei < D.size(); ++ei) {
    const CanonicalElement ve = g.eval_code(D[ei]);
    for (std::size_t b : members) {
      target[ei].push_back(index_of.at(g.mul(ve, f0_val[b])));
    }
  }

  // known strict upper bounds on representative pair distances
  std::vector<std::vector<Rat>> ub(f0.size(), std::vector<Rat>(f0.size(), Rat(2)));
  std::vector<std::vector<Rat>> exact(f0.size(), std::vector<Rat>(f0.size()));
  for (std::size_t a = 0; a < f0.size(); ++a) {
    for (std::size_t b = 0; b < f0.size(); ++b) {
      exact[a][b] = mg.dist(f0_val[a], f0_val[b]);
    }
  }

  const Rat radius(1, m);
  ThetaHatOutcome out;
  std::vector<std::size_t> prev_mu(D.size(), 0);
  const auto certified_now = [&]() {
    bool all = true;
    for (std::size_t ei = 0; ei < D.size(); ++ei) {
      BipartiteGraph graph;
      graph.left = members.size();
      graph.right = members.size();
      graph.adj.assign(members.size(), {});
      for (std::size_t ai = 0; ai < members.size(); ++ai) {
        for (std::size_t bi = 0; bi < members.size(); ++bi) {
          const std::size_t t = target[ei][bi];
          const std::size_t a = members[ai];
          if (std::min(ub[t][a], ub[a][t]) <= radius) {
            graph.adj[ai].push_back(bi);
          }
        }
      }
      const std::size_t mu = maximum_matching(graph).mu;
      if (mu < prev_mu[ei]) {
        throw std::logic_error("known-edge matching number decreased");
      }
      prev_mu[ei] = mu;
      if (static_cast<long long>(mu) * n <
          (n - 1) * static_cast<long long>(members.size())) {
        all = false;
      }
    }
    return all;
  };

  for (long long s = 2;; ++s) {
    for (long long p = 1; p < s; ++p) {
      if (std::gcd(p, s) != 1) continue;
      const Rat q(p, s);
      for (std::size_t a = 0; a < f0.size(); ++a) {
        for (std::size_t b = 0; b < f0.size(); ++b) {
          if (!(exact[a][b] < q)) continue;
          if (out.facts_consumed == budget) {
            out.final_mu = prev_mu;
            return out;  // not yet — never a refutation
          }
          ++out.facts_consumed;
          if (q < ub[a][b]) ub[a][b] = q;
          if (certified_now()) {
            out.certified = true;
            for (std::size_t i : members) out.certified_set.push_back(f0[i]);
            out.final_mu = prev_mu;
            return out;
          }
        }
      }
    }
    if (s > 1000000) throw std::logic_error("fact enumeration ran away");
  }
}

std::variant<MetricSearchResult, SearchExhausted> search_metric_folner(
    const MetricGroup& mg, long long ell, long long m, long long n,
    const std::vector<Int>& D, long long budget) {
  if (ell < 1 || m < 1 || n < 1) {
    throw std::invalid_argument("ell, m and n must be positive");
  }
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative");
  const Group& g = mg.group();
  CanonicalSetEnumerator en;
  for (long long t = 0; t < budget; ++t) {
    const std::vector<Int>& F = en.next();
    std::set<CanonicalElement> distinct;
    for (const Int& f : F) distinct.insert(g.eval_code(f));
    if (distinct.size() != F.size()) continue;
    MetricFolnerReport rep = is_metric_folner(mg, F, D, m, n);
    if (!rep.ok) continue;
    MetricSearchResult res;
    res.codes = F;
    res.report = std::move(rep);
    res.examined = t + 1;
    const Rat grid(1, ell);
    for (const Int& i : F) {
      for (const Int& j : F) {
        res.assignment.emplace(std::make_pair(i, j),
                               snap_down(mg.dist_codes(i, j), grid));
      }
    }
    return res;
  }
  return SearchExhausted{budget};
}

CaOracle circle_ca_oracle(const MetricGroup& mg) {
  if (!mg.arc_metric()) {
    throw std::invalid_argument("the exact-overlap source needs the circle");
  }
  const MetricGroup copy = mg;
  return [copy](long long ell, long long m, long long n,
                const std::vector<Int>& D) -> CaResult {
    (void)m;
    (void)n;
    if (ell < 1) throw std::invalid_argument("ell must be positive");
    const Group& g = copy.group();
    Int order = 1;
    for (const Int& d : D) {
      const Rat v = std::get<Rat>(g.eval_code(d));
      order = boost::multiprecision::lcm(
          order, Int(boost::multiprecision::denominator(v)));
    }
    if (order > (1 << 16)) {
      throw std::invalid_argument("cyclic subgroup too large");
    }
    const long long size = order.convert_to<long long>();
    CaResult res;
    std::vector<Rat> points;
    for (long long k = 0; k < size; ++k) {
      points.emplace_back(k, size);
      res.codes.push_back(g.element_code(points.back()));
    }
    const Rat grid(1, ell);
    for (long long i = 0; i < size; ++i) {
      for (long long j = 0; j < size; ++j) {
        res.assignment.emplace(
            std::make_pair(res.codes[i], res.codes[j]),
            snap_down(copy.dist(points[i], points[j]), grid));
      }
    }
    return res;
  };
}

CaOracle search_ca_oracle(const MetricGroup& mg, long long budget) {
  const MetricGroup copy = mg;
  return [copy, budget](long long ell, long long m, long long n,
                        const std::vector<Int>& D) -> CaResult {
    auto r = search_metric_folner(copy, ell, m, n, D, budget);
    if (auto* found = std::get_if<MetricSearchResult>(&r)) {
      return CaResult{std::move(found->codes), std::move(found->assignment)};
    }
    throw BudgetExhaustedError(
        "search exhausted its budget before a qualifying set");
  };
}

DistanceEstimate estimate_distance(const MetricGroup& mg, const Int& n1,
                                   const Int& n2, const Rat& eps,
                                   const CaOracle& oracle) {
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  const Group& g = mg.group();
  const long long ell = std::max(1LL, ceil_rat(Rat(2) / eps));
  const long long m = floor_rat(Rat(4) / eps) + 1;
  const long long n = 3;
  const std::vector<Int> D = {n1, n2};
  CaResult ca = oracle(ell, m, n, D);
  const std::size_t fs = ca.codes.size();
  if (fs == 0) throw std::logic_error("the source produced an empty set");
  std::vector<CanonicalElement> vals;
  std::set<CanonicalElement> distinct;
  for (const Int& c : ca.codes) {
    vals.push_back(g.eval_code(c));
    distinct.insert(vals.back());
  }
  if (distinct.size() != fs) {
    throw std::logic_error("the source set is not injectively coded");
  }

  // every true confirmation d(ν(nᵢ·f), ν(f′)) < 1/m, ascending by distance
  struct Fact {
    Rat d;
    int i;
    std::size_t f;
    std::size_t fp;
  };
  const std::array<CanonicalElement, 2> endpoints = {g.eval_code(n1),
                                                     g.eval_code(n2)};
  const Rat bound(1, m);
  std::vector<Fact> facts;
  for (int i = 0; i < 2; ++i) {
    for (std::size_t f = 0; f < fs; ++f) {
      const CanonicalElement prod = g.mul(endpoints[i], vals[f]);
      for (std::size_t fp = 0; fp < fs; ++fp) {
        const Rat d = mg.dist(prod, vals[fp]);
        if (d < bound) facts.push_back({d, i, f, fp});
      }
    }
  }
  std::sort(facts.begin(), facts.end(), [](const Fact& a, const Fact& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.i != b.i) return a.i < b.i;
    if (a.f != b.f) return a.f < b.f;
    return a.fp < b.fp;
  });

  std::array<BipartiteGraph, 2> graphs;
  for (auto& graph : graphs) {
    graph.left = fs;
    graph.right = fs;
    graph.adj.assign(fs, {});
  }
  std::array<MatchingCertificate, 2> certs;
  DistanceEstimate est;
  bool witnessed = false;
  for (const Fact& fact : facts) {
    graphs[static_cast<std::size_t>(fact.i)].adj[fact.f].push_back(fact.fp);
    ++est.confirmations;
    certs[0] = maximum_matching(graphs[0]);
    certs[1] = maximum_matching(graphs[1]);
    const long long need = (n - 1) * static_cast<long long>(fs);
    if (static_cast<long long>(certs[0].mu) * n >= need &&
        static_cast<long long>(certs[1].mu) * n >= need) {
      witnessed = true;
      break;
    }
  }
  if (!witnessed) {
    throw std::logic_error("the source set failed its own matching bound");
  }

  // a common matched element exists because each domain covers 2/3 of F
  std::optional<std::size_t> shared;
  for (std::size_t f = 0; f < fs; ++f) {
    if (certs[0].match_left[f] && certs[1].match_left[f]) {
      shared = f;
      break;
    }
  }
  if (!shared) throw std::logic_error("matched domains do not intersect");
  const std::size_t fp1 = *certs[0].match_left[*shared];
  const std::size_t fp2 = *certs[1].match_left[*shared];
  const auto it =
      ca.assignment.find(std::make_pair(ca.codes[fp1], ca.codes[fp2]));
  if (it == ca.assignment.end()) {
    throw std::logic_error("the assignment misses a pair of the set");
  }
  Rat q0 = it->second - Rat(1, m);
  if (q0 < 0) q0 = 0;

  est.q0 = q0;
  est.eps = eps;
  est.ell = ell;
  est.m = m;
  est.n = n;
  est.folner_codes = ca.codes;
  est.shared_f = ca.codes[*shared];
  const Rat true_d = mg.dist(endpoints[0], endpoints[1]);
  if (!(q0 <= true_d && true_d < q0 + eps)) {
    throw std::logic_error("estimate window missed the true distance");
  }
  return est;
}

SequenceHorizonReport verify_metric_sequence_horizon(
    const MetricGroup& mg, const SequenceProgram& prog, long long horizon,
    const std::vector<Int>& x_set, long long n_max) {
  if (horizon < 0) throw std::invalid_argument("horizon must be nonnegative");
  if (n_max < 1) throw std::invalid_argument("n_max must be positive");
  const Group& g = mg.group();
  std::vector<std::vector<CanonicalElement>> stage_vals;
  for (long long k = 0; k <= horizon; ++k) {
    const auto fk = prog(k);
    if (!fk) throw SequenceTotalityError(k);
    if (fk->empty()) {
      throw std::invalid_argument("stage " + std::to_string(k) + " is empty");
    }
    std::set<CanonicalElement> distinct;
    for (const Int& c : *fk) distinct.insert(g.eval_code(c));
    stage_vals.emplace_back(distinct.begin(), distinct.end());
  }

  const DistanceOracle oracle = exact_distance_oracle(mg);
  SequenceHorizonReport rep;
  rep.horizon = horizon;
  for (const Int& x : x_set) {
    const CanonicalElement vx = g.eval_code(x);
    std::vector<std::vector<CanonicalElement>> translated;
    for (const auto& stage : stage_vals) {
      std::vector<CanonicalElement> t;
      t.reserve(stage.size());
      for (const auto& v : stage) t.push_back(g.mul(vx, v));
      translated.push_back(std::move(t));
    }
    for (long long n = 1; n <= n_max; ++n) {
      SequenceCell cell;
      cell.x = x;
      cell.n = n;
      for (long long k = 0; k <= horizon; ++k) {
        const auto& stage = stage_vals[static_cast<std::size_t>(k)];
        const MatchingInstance inst = matching_number(
            mg, stage, translated[static_cast<std::size_t>(k)], Rat(1, n),
            oracle);
        if (static_cast<long long>(inst.mu) * n <
            (n - 1) * static_cast<long long>(stage.size())) {
          cell.violations.push_back(k);
        }
      }
      if (cell.violations.empty()) {
        cell.least_l = 0;
      } else if (cell.violations.back() < horizon) {
        cell.least_l = cell.violations.back() + 1;
      }
      rep.cells.push_back(std::move(cell));
    }
  }
  return rep;
}

}  // namespace folner
