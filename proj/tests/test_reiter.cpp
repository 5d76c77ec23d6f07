#include <random>
#include <variant>

#include "doctest.h"
#include "folner/reiter.hpp"

using namespace folner;

namespace {

Int pcode(long long p) {
  if (p == 0) return kIdentityCode;
  return encode_word(Word{{0, p}});
}

ReiterFunction chi(const std::vector<Int>& codes) {
  ReiterFunction f;
  for (const Int& c : codes) f.values.emplace(c, Rat(1));
  return f;
}

ReiterFunction chi_powers(long long lo, long long hi) {
  ReiterFunction f;
  for (long long p = lo; p <= hi; ++p) f.values.emplace(pcode(p), Rat(1));
  return f;
}

/// Merges every ν-equal pair of working-set codes, reaching the finest
/// equality-respecting partition.
void merge_to_canonical(const Group& g, PartitionState& st) {
  NuCache nu(g);
  std::map<CanonicalElement, Int> rep;
  for (const Int& c : st.working_set()) {
    auto [it, fresh] = rep.emplace(nu(c), c);
    if (!fresh) st.merge(it->second, c);
  }
}

ReiterFunction random_function(std::mt19937_64& rng) {
  std::uniform_int_distribution<long long> code_dist(0, 40);
  std::uniform_int_distribution<long long> num_dist(1, 5);
  std::uniform_int_distribution<long long> den_dist(1, 4);
  std::uniform_int_distribution<int> size_dist(1, 6);
  ReiterFunction f;
  int k = size_dist(rng);
  for (int i = 0; i < k; ++i) {
    f.values[Int(code_dist(rng))] = Rat(num_dist(rng), den_dist(rng));
  }
  return f;
}

}  // namespace

TEST_CASE("pushforward collapses fibers and preserves mass") {
  auto z = make_z();
  ReiterFunction f;
  f.values[Int(0)] = Rat(1, 2);  // g0 ↦ 1
  f.values[Int(3)] = Rat(1, 2);  // g1 ↦ 1
  auto h = pushforward(*z, f);
  REQUIRE(h.size() == 1);
  CHECK(h.at(CanonicalElement{1LL}) == Rat(1));

  std::mt19937_64 rng(21);
  for (int t = 0; t < 40; ++t) {
    ReiterFunction r = random_function(rng);
    Rat total = 0;
    for (const auto& [e, v] : pushforward(*z, r)) total += v;
    CHECK(total == l1_norm(r));
  }

  ReiterFunction bad;
  CHECK_THROWS_AS(validate_reiter(bad), std::invalid_argument);
  bad.values[Int(0)] = Rat(0);
  CHECK_THROWS_AS(validate_reiter(bad), std::invalid_argument);
}

TEST_CASE("invariance ratio of an interval and the strict test") {
  auto z = make_z();
  ReiterFunction f = chi_powers(0, 9);
  CHECK(pushforward_ratio(*z, f, Int(0)) == Rat(1, 5));
  CHECK_FALSE(is_reiter(*z, f, {Int(0)}, 5));  // boundary is excluded
  CHECK(is_reiter(*z, f, {Int(0)}, 4));
  CHECK(is_reiter(*z, f, {kIdentityCode}, 100));
}

TEST_CASE("ratio at the finest equality-respecting partition is exact") {
  std::vector<std::shared_ptr<Group>> zoo = {make_z(), make_zd(2),
                                             make_cyclic(6)};
  std::mt19937_64 rng(22);
  for (const auto& g : zoo) {
    for (int t = 0; t < 40; ++t) {
      ReiterFunction f = random_function(rng);
      std::vector<Int> D = {Int(0), Int(2), Int(3)};
      PartitionState st(f, D);
      merge_to_canonical(*g, st);
      for (const Int& x : D) {
        CHECK(st.m_ratio(x) == pushforward_ratio(*g, f, x));
      }
    }
  }
}

TEST_CASE("every merge weakly decreases every ratio") {
  auto z = make_z();
  std::mt19937_64 rng(23);
  for (int t = 0; t < 30; ++t) {
    ReiterFunction f = random_function(rng);
    std::vector<Int> D = {Int(0), Int(2)};
    PartitionState st(f, D);
    std::uniform_int_distribution<size_t> pick(0, st.working_set().size() - 1);
    for (int m = 0; m < 12; ++m) {
      Rat before0 = st.m_ratio(Int(0));
      Rat before2 = st.m_ratio(Int(2));
      Int a = st.working_set()[pick(rng)];
      Int b = st.working_set()[pick(rng)];
      st.merge(a, b);
      CHECK(st.m_ratio(Int(0)) <= before0);
      CHECK(st.m_ratio(Int(2)) <= before2);
    }
  }
}

TEST_CASE("partial equality merges never undercut the true ratio") {
  auto z = make_z();
  // Three masses on the element 1 ∈ ℤ under different spellings, plus the
  // true ratio 20/14; merging a genuinely equal pair must stay above it.
  ReiterFunction f;
  f.values[encode_word(parse_word("g0^2"))] = Rat(5);
  f.values[encode_word(parse_word("g1*g0"))] = Rat(5);
  f.values[Int(0)] = Rat(4);
  Int x(0);
  Rat truth = pushforward_ratio(*z, f, x);
  CHECK(truth == Rat(10, 7));

  PartitionState st(f, {x});
  Rat p0 = st.m_ratio(x);
  CHECK(p0 >= truth);
  REQUIRE(st.merge(Int(0), encode_word(parse_word("g0^-1*g1*g0"))));
  CHECK(st.m_ratio(x) <= p0);
  CHECK(st.m_ratio(x) >= truth);

  // random equal-pair subsets on random functions
  std::mt19937_64 rng(24);
  NuCache nu(*z);
  for (int t = 0; t < 25; ++t) {
    ReiterFunction r = random_function(rng);
    PartitionState state(r, {x});
    Rat target = pushforward_ratio(*z, r, x);
    const auto& W = state.working_set();
    std::uniform_int_distribution<size_t> pick(0, W.size() - 1);
    for (int m = 0; m < 10; ++m) {
      Int a = W[pick(rng)];
      Int b = W[pick(rng)];
      if (nu(a) == nu(b)) state.merge(a, b);
      CHECK(state.m_ratio(x) >= target);
    }
  }
}

TEST_CASE("incremental verifier on pinned instances") {
  auto z = make_z();

  // interval: certified at the singleton partition, ratio exactly 1/5
  auto v1 = kappa_verify(*z, 5, {Int(0)}, chi_powers(0, 9), 1000);
  auto* c1 = std::get_if<KappaCertified>(&v1);
  REQUIRE(c1 != nullptr);
  CHECK(c1->ratios.at(Int(0)) == Rat(1, 5));
  CHECK(c1->queries == 0);

  // point mass in disguise: refuted once every pair is decided
  ReiterFunction point;
  point.values[Int(0)] = Rat(1, 2);
  point.values[Int(3)] = Rat(1, 2);
  auto v2 = kappa_verify(*z, 2, {Int(0)}, point, 1000);
  auto* r2 = std::get_if<KappaRefuted>(&v2);
  REQUIRE(r2 != nullptr);
  CHECK(r2->ratios.at(Int(0)) == Rat(2));

  auto v3 = kappa_verify(*z, 2, {Int(0)}, point, 0);
  CHECK(std::holds_alternative<KappaExhausted>(v3));
}

TEST_CASE("merges can be essential for certification") {
  auto z = make_z();
  // the interval 1..10 spelled through g1, so every point needs a merge
  ReiterFunction f;
  f.values[encode_word(parse_word("g1"))] = Rat(1);
  for (long long k = 2; k <= 10; ++k) {
    Word w = word_mul(parse_word("g1"), Word{{0, k - 1}});
    f.values[encode_word(w)] = Rat(1);
  }
  REQUIRE(pushforward_ratio(*z, f, Int(0)) == Rat(1, 5));

  auto v = kappa_verify(*z, 5, {Int(0)}, f, 5000);
  auto* c = std::get_if<KappaCertified>(&v);
  REQUIRE(c != nullptr);
  CHECK(c->merges >= 9);
  CHECK(c->queries > 0);

  auto tight = kappa_verify(*z, 5, {Int(0)}, f, 3);
  CHECK(std::holds_alternative<KappaExhausted>(tight));
}

TEST_CASE("semi-decidable mode consumes pairs and never refutes") {
  auto z = make_z();
  ReiterFunction point;
  point.values[Int(0)] = Rat(1, 2);
  point.values[Int(3)] = Rat(1, 2);
  KappaOptions ce{true};
  auto v = kappa_verify(*z, 2, {Int(0)}, point, 400, ce);
  auto* e = std::get_if<KappaExhausted>(&v);
  REQUIRE(e != nullptr);
  CHECK(e->queries == 400);

  auto good = kappa_verify(*z, 5, {Int(0)}, chi_powers(0, 9), 400, ce);
  CHECK(std::holds_alternative<KappaCertified>(good));
}

TEST_CASE("sets are certified at 2n exactly when their marker is at n") {
  auto z = make_z();
  std::mt19937_64 rng(25);
  std::uniform_int_distribution<long long> pick(-6, 6);
  std::uniform_int_distribution<long long> nd(1, 4);
  for (int t = 0; t < 30; ++t) {
    std::set<long long> s;
    int size = 1 + static_cast<int>(rng() % 5);
    for (int i = 0; i < size; ++i) s.insert(pick(rng));
    std::vector<Int> F;
    for (long long p : s) F.push_back(pcode(p));
    long long n = nd(rng);
    std::vector<Int> D =
        t % 2 == 0 ? std::vector<Int>{Int(0)} : std::vector<Int>{Int(0),
                                                                 Int(2)};
    auto direct = is_folner(*z, F, D, 2 * n);
    bool folner_side = std::holds_alternative<FolnerWitness>(direct);
    auto kv = kappa_verify(*z, n, D, chi(F), 100000);
    bool kappa_side = std::holds_alternative<KappaCertified>(kv);
    CAPTURE(n);
    CHECK(folner_side == kappa_side);
  }
}

TEST_CASE("certified-triple enumeration is sound and deterministic") {
  auto z = make_z();
  CHECK(enumerate_reiter(*z, 0).empty());

  auto triples = enumerate_reiter(*z, 4000);
  CHECK(!triples.empty());
  for (const auto& t : triples) {
    auto v = kappa_verify(*z, t.n, t.D, t.f, 1000000);
    CHECK(std::holds_alternative<KappaCertified>(v));
  }

  auto again = enumerate_reiter(*z, 4000);
  REQUIRE(again.size() == triples.size());
  for (size_t i = 0; i < triples.size(); ++i) {
    CHECK(again[i].n == triples[i].n);
    CHECK(again[i].D == triples[i].D);
    CHECK(again[i].f.values == triples[i].f.values);
  }
}

TEST_CASE("the ten-point interval triple is eventually enumerated") {
  auto z = make_z();
  // regression-recorded budget for the triple (5, {g0}, χ on powers 0..9)
  auto triples = enumerate_reiter(*z, 60000);
  ReiterFunction want = chi_powers(0, 9);
  bool found = false;
  for (const auto& t : triples) {
    if (t.n == 5 && t.D == std::vector<Int>{Int(0)} &&
        t.f.values == want.values) {
      found = true;
      break;
    }
  }
  CHECK(found);
}

TEST_CASE("characteristic certificates are found and strict") {
  auto z = make_z();
  auto found = compute_reiter(*z, 5, {Int(0)}, 100000);
  auto* f = std::get_if<ReiterFunction>(&found);
  REQUIRE(f != nullptr);
  for (const auto& [code, v] : f->values) CHECK(v == Rat(1));
  CHECK(pushforward(*z, *f).size() >= 10);
  CHECK(is_reiter(*z, *f, {Int(0)}, 5));
  CHECK(std::holds_alternative<KappaCertified>(
      kappa_verify(*z, 5, {Int(0)}, *f, 1000000)));

  auto trivial = compute_reiter(*z, 7, {kIdentityCode}, 1000);
  auto* tf = std::get_if<ReiterFunction>(&trivial);
  REQUIRE(tf != nullptr);
  CHECK(tf->values == std::map<Int, Rat>{{kIdentityCode, Rat(1)}});

  auto starved = compute_reiter(*z, 1000, {Int(0)}, 10);
  CHECK(std::holds_alternative<SearchExhausted>(starved));
}

TEST_CASE("level-set extraction on pinned instances") {
  auto z = make_z();

  ReiterFunction h;
  h.values[Int(0)] = Rat(1);
  h.values[Int(1)] = Rat(1);
  h.values[Int(2)] = Rat(1, 2);
  CHECK(extract_folner(*z, h, {kIdentityCode}, 1) ==
        std::vector<Int>{0, 1});

  // χ of a strictly qualifying set comes back unchanged
  ReiterFunction box = chi_powers(-3, 3);
  std::vector<Int> all;
  for (const auto& [c, v] : box.values) all.push_back(c);
  CHECK(extract_folner(*z, box, {Int(0)}, 1) == all);

  // a deeper level set can be the first qualifying one
  ReiterFunction stack;
  stack.values[kIdentityCode] = Rat(2);
  stack.values[Int(0)] = Rat(2);
  stack.values[Int(4)] = Rat(1);
  std::vector<Int> deep = extract_folner(*z, stack, {Int(0)}, 1);
  CHECK(deep == std::vector<Int>{0, 1, 4});

  ReiterFunction hopeless = chi({kIdentityCode});
  CHECK_THROWS_AS(extract_folner(*z, hopeless, {Int(0)}, 1), std::logic_error);
}

TEST_CASE("two-stage search produces a certified subset") {
  auto z = make_z();
  auto out = sigma_search(*z, 4, {Int(0)}, 100000);
  auto* s = std::get_if<SigmaResult>(&out);
  REQUIRE(s != nullptr);
  CHECK(s->m == 2);
  REQUIRE(s->F_prime.has_value());
  CHECK(*s->F_prime == s->F);  // χ has a single level set
  auto verdict = is_folner(*z, *s->F_prime, {Int(0)}, 4);
  CHECK(std::holds_alternative<FolnerWitness>(verdict));

  auto dry = sigma_search(*z, 1000, {Int(0)}, 5);
  CHECK(std::holds_alternative<SearchExhausted>(dry));
}
