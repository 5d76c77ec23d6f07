#include <functional>
#include <vector>

#include "doctest.h"
#include "folner/means.hpp"

using namespace folner;

namespace {

BinarySeqZ delta() { return BinarySeqZ::explicit_symmetric({1}, {0}); }

BinarySeqZ all_ones() { return BinarySeqZ::explicit_symmetric({1}, {1}); }

BinarySeqZ alternating() { return BinarySeqZ::explicit_symmetric({1}, {0, 1}); }

Rat brute_mean(const BinarySeqZ& x, long long j) {
  long long sum = x.at(0);
  for (long long i = 1; i <= j; ++i) sum += 2 * x.at(i);
  return Rat(sum, 2 * j + 1);
}

long long pow2(long long k) { return 1LL << k; }

}  // namespace

TEST_CASE("window means of explicit sequences are exact") {
  const auto d = delta();
  CHECK(d.at(0) == 1);
  CHECK(d.at(3) == 0);
  CHECK(d.at(-3) == 0);
  CHECK(d.ones_to(10) == 0);
  CHECK(d.mean_at(5) == Rat(1, 11));
  CHECK(d.mean_at(0) == Rat(1));
  CHECK(d.limit_mean() == Rat(0));
  CHECK(!d.defined_radius().has_value());

  const auto base = BinarySeqZ::explicit_symmetric({1, 0, 0, 0, 1, 1}, {0});
  CHECK(base.ones_to(5) == 2);
  CHECK(base.mean_at(3) == Rat(1, 7));
  CHECK(base.mean_at(5) == Rat(5, 11));
  CHECK(base.mean_at(100) == Rat(5, 201));

  const auto ones = all_ones();
  for (long long j : {0LL, 1LL, 7LL, 40LL}) CHECK(ones.mean_at(j) == Rat(1));
  CHECK(ones.limit_mean() == Rat(1));

  const auto alt = alternating();
  CHECK(alt.limit_mean() == Rat(1, 2));
  for (long long j = 0; j <= 60; ++j) {
    CHECK(alt.mean_at(j) == brute_mean(alt, j));
    const Rat dev = boost::multiprecision::abs(alt.mean_at(j) - Rat(1, 2));
    CHECK(dev == Rat(1, 2 * (2 * j + 1)));
  }

  const BinarySeqZ zero;  // default
  CHECK(zero.at(0) == 0);
  CHECK(zero.mean_at(9) == Rat(0));
  CHECK(zero.limit_mean() == Rat(0));

  CHECK_THROWS_AS(BinarySeqZ::explicit_symmetric({}, {0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BinarySeqZ::explicit_symmetric({1}, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BinarySeqZ::explicit_symmetric({2}, {0}),
                  std::invalid_argument);
}

TEST_CASE("segment tables validate coverage and bound the radius") {
  const auto x = BinarySeqZ::from_runs({{1, 3, 0}, {4, 5, 1}});
  CHECK(x.constructed());
  CHECK(x.at(0) == 1);
  CHECK(x.at(2) == 0);
  CHECK(x.at(4) == 1);
  CHECK(x.at(-5) == 1);
  CHECK(x.defined_radius() == 5);
  CHECK(x.ones_to(5) == 2);
  CHECK(x.mean_at(5) == Rat(5, 11));
  CHECK(x.limit_mean() == Rat(0));
  CHECK_THROWS_AS(x.at(6), std::invalid_argument);
  CHECK_THROWS_AS(x.ones_to(6), std::invalid_argument);
  CHECK_THROWS_AS(x.mean_at(6), std::invalid_argument);

  CHECK_THROWS_AS(BinarySeqZ::from_runs({}), std::invalid_argument);
  CHECK_THROWS_AS(BinarySeqZ::from_runs({{2, 4, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(BinarySeqZ::from_runs({{1, 3, 0}, {5, 6, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(BinarySeqZ::from_runs({{1, 0, 0}}), std::invalid_argument);
}

TEST_CASE("inductive construction: pinned stages for doubling rate") {
  const auto built = build_x0([](long long k) { return pow2(k); }, 10);
  REQUIRE(built.stages.size() == 8);
  const X0Stage& s3 = built.stages[0];
  CHECK(s3.k == 3);
  CHECK(s3.f_k == 8);
  CHECK(s3.i_prev == 5);
  CHECK(s3.ones == 21);
  CHECK(s3.i_prime == 13);
  CHECK(s3.t_k == 24);
  CHECK(s3.i_k == 32);

  const auto& x = built.x;
  CHECK(x.at(13) == 0);
  CHECK(x.at(14) == 1);
  CHECK(x.at(21) == 1);
  CHECK(x.at(22) == 0);
  CHECK(x.at(32) == 0);
  CHECK(x.defined_radius() == built.stages.back().i_k);

  // base segment: bits 0,0,0,1,1 at 1..5
  for (long long i = 1; i <= 3; ++i) CHECK(x.at(i) == 0);
  CHECK(x.at(4) == 1);
  CHECK(x.at(5) == 1);
}

TEST_CASE("inductive construction: stage guarantees for several rates") {
  const std::vector<std::function<long long(long long)>> rates = {
      [](long long k) { return pow2(k); },
      [](long long k) { return k; },
      [](long long) { return 0LL; },
      [](long long k) { return k * k; },
  };
  const std::vector<long long> k_maxes = {10, 6, 5, 7};
  for (std::size_t r = 0; r < rates.size(); ++r) {
    const auto built = build_x0(rates[r], k_maxes[r]);
    const auto& x = built.x;
    long long prev_ones = 5;
    long long prev_i = 5;
    for (const X0Stage& st : built.stages) {
      CHECK(st.f_k == rates[r](st.k));
      CHECK(st.i_prev == prev_i);
      CHECK(st.ones == 2 * st.f_k + prev_ones);
      CHECK(st.i_prime >= prev_i);
      CHECK(st.t_k > st.i_prime);
      CHECK(st.i_k == st.f_k + st.t_k);
      // the two window means the stage promises
      CHECK(x.mean_at(st.i_k - 1) >= Rat(1, st.k));
      CHECK(x.mean_at(st.i_k) < Rat(1, st.k));
      // everything in between stays under the previous threshold
      for (long long j = prev_i; j <= st.i_k; ++j) {
        CHECK(x.mean_at(j) < Rat(1, st.k - 1));
      }
      prev_ones = st.ones;
      prev_i = st.i_k;
    }
  }

  // f(k) = 2^k grows fast enough that the radius beats the rate
  const auto fast = build_x0([](long long k) { return pow2(k); }, 10);
  for (const X0Stage& st : fast.stages) CHECK(st.i_k - 1 >= pow2(st.k));

  CHECK_THROWS_AS(build_x0([](long long) { return 1LL; }, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_x0([](long long) { return -1LL; }, 3),
                  std::invalid_argument);
  const auto flat = build_x0([](long long) { return 0LL; }, 5);
  for (const X0Stage& st : flat.stages) CHECK(st.ones == 5);
}

TEST_CASE("segment table means agree with materialized bits") {
  const auto built = build_x0([](long long k) { return k; }, 8);
  const auto& x = built.x;
  const long long radius = *x.defined_radius();
  const long long top = std::min<long long>(radius, 5000);
  long long ones = 0;
  for (long long j = 1; j <= top; ++j) {
    ones += x.at(j);
    CHECK(x.ones_to(j) == ones);
  }
  for (long long j : {0LL, 1LL, 5LL, top / 2, top}) {
    CHECK(x.mean_at(j) == brute_mean(x, j));
  }
  const auto bits = x.materialize(10);
  REQUIRE(bits.size() == 11);
  for (long long i = 0; i <= 10; ++i) CHECK(bits[i] == x.at(i));
}

TEST_CASE("modulus report pins stability and violation witnesses") {
  const auto f = [](long long k) { return pow2(k); };
  const auto built = build_x0(f, 10);
  const auto& x = built.x;
  const long long radius = *x.defined_radius();
  const auto table = modulus_table(x, f, 8, radius);
  CHECK(table.mean == Rat(0));
  CHECK(table.horizon == radius);
  REQUIRE(table.rows.size() == 8);

  // rows 1 and 2 predate the inductive stages: only j = 0 deviates that far
  CHECK(table.rows[0].j_min == 0);
  CHECK(table.rows[1].j_min == 0);
  CHECK(!table.rows[0].f_violation.has_value());
  CHECK(!table.rows[1].f_violation.has_value());

  for (const X0Stage& st : built.stages) {
    if (st.k > 8) break;
    const ModulusRow& row = table.rows[static_cast<std::size_t>(st.k - 1)];
    REQUIRE(row.j_min.has_value());
    CHECK(*row.j_min == st.i_k - 1);
    REQUIRE(row.f_violation.has_value());
    CHECK(*row.f_violation > f(st.k));
    CHECK(*row.f_violation <= st.i_k - 1);
    CHECK(boost::multiprecision::abs(x.mean_at(*row.f_violation)) >=
          Rat(1, st.k));
  }
  CHECK(*table.rows[2].f_violation == 16);  // least witness for k = 3

  // j_min agrees with a brute scan and is monotone in k
  long long prev = -1;
  for (const ModulusRow& row : table.rows) {
    long long last = -1;
    for (long long j = 0; j <= radius; ++j) {
      if (boost::multiprecision::abs(x.mean_at(j)) >= Rat(1, row.k)) last = j;
    }
    REQUIRE(row.j_min.has_value());
    CHECK(*row.j_min == std::max<long long>(last, 0));
    CHECK(*row.j_min >= prev);
    prev = *row.j_min;
  }
}

TEST_CASE("modulus report: horizon effects and degenerate sequences") {
  const auto f = [](long long k) { return pow2(k); };
  const auto built = build_x0(f, 10);
  const auto& x = built.x;

  // cutting the horizon at a stage radius leaves the next row undetermined:
  // the mean at i_5 still deviates by at least 1/6
  const long long i5 = built.stages[2].i_k;
  const auto cut = modulus_table(x, f, 8, i5);
  CHECK(cut.rows[4].j_min == i5 - 1);
  CHECK(!cut.rows[5].j_min.has_value());

  CHECK_THROWS_AS(
      modulus_table(x, f, 3, *x.defined_radius() + 1), std::invalid_argument);

  const BinarySeqZ zero;
  const auto zt = modulus_table(zero, [](long long k) { return k; }, 5, 100);
  for (const ModulusRow& row : zt.rows) {
    CHECK(row.j_min == 0);
    CHECK(!row.f_violation.has_value());
  }

  // alternating density one half: deviation 1/(2(2j+1)), so the identity
  // rate is a working modulus as far as any horizon can see
  const auto alt = alternating();
  const auto at = modulus_table(alt, [](long long k) { return k; }, 6, 200);
  CHECK(at.mean == Rat(1, 2));
  for (const ModulusRow& row : at.rows) {
    CHECK(!row.f_violation.has_value());
    REQUIRE(row.j_min.has_value());
    // dev >= 1/k iff 2(2j+1) <= k
    long long last = -1;
    for (long long j = 0; j <= 200; ++j) {
      if (2 * (2 * j + 1) <= row.k) last = j;
    }
    CHECK(*row.j_min == std::max<long long>(last, 0));
  }
}

TEST_CASE("pairwise stability index needs no limit value") {
  const auto alt = alternating();
  CHECK(pairwise_modulus_index(alt, 3, 50) == 0);
  CHECK(pairwise_modulus_index(alt, 4, 50) == 1);

  const BinarySeqZ zero;
  CHECK(pairwise_modulus_index(zero, 7, 60) == 0);

  // brute re-check of leastness on the constructed sequence
  const auto built = build_x0([](long long k) { return pow2(k); }, 8);
  const auto& x = built.x;
  const long long horizon = *x.defined_radius();
  std::vector<Rat> means;
  for (long long j = 0; j <= horizon; ++j) means.push_back(x.mean_at(j));
  for (long long k : {3LL, 4LL, 5LL}) {
    const long long got = pairwise_modulus_index(x, k, horizon);
    const auto tail_ok = [&](long long j) {
      Rat hi = means[static_cast<std::size_t>(j + 1)];
      Rat lo = hi;
      for (long long t = j + 1; t <= horizon; ++t) {
        hi = std::max(hi, means[static_cast<std::size_t>(t)]);
        lo = std::min(lo, means[static_cast<std::size_t>(t)]);
      }
      return hi - lo < Rat(1, k);
    };
    CHECK(tail_ok(got));
    if (got > 0) CHECK(!tail_ok(got - 1));
  }
}

TEST_CASE("dominating function: exact sums and eventual domination") {
  const std::vector<std::function<long long(long long)>> gs = {
      [](long long j) { return j; },
      [](long long j) { return 2 * j + 1; },
  };
  CHECK(dominator(gs, 0) == 0);
  CHECK(dominator(gs, 1) == 1);  // outer index capped at n
  CHECK(dominator(gs, 2) == (1 + 2) + (3 + 5));
  CHECK(dominator(gs, 3) == (1 + 2 + 3) + (3 + 5 + 7));

  const std::vector<std::function<long long(long long)>> trio = {
      [](long long j) { return j * j; },
      [](long long j) { return 1LL << std::min<long long>(j, 40); },
      [](long long j) { return j + 5; },
  };
  for (std::size_t i = 0; i < trio.size(); ++i) {
    for (long long n = static_cast<long long>(i) + 1; n <= 10; ++n) {
      CHECK(dominator(trio, n) >= Int(trio[i](n)));
    }
  }

  const std::vector<std::function<long long(long long)>> bad = {
      [](long long j) { return j - 2; },
  };
  CHECK_THROWS_AS(dominator(bad, 1), std::invalid_argument);
  CHECK_THROWS_AS(dominator(gs, -1), std::invalid_argument);
}

TEST_CASE("binary embedding along the window-order enumeration") {
  const auto d = delta();
  CHECK(real_embed(d, 0) == Rat(0));
  CHECK(real_embed(d, 1) == Rat(1, 2));
  CHECK(real_embed(d, 5) == Rat(1, 2));
  CHECK(limit_real(d) == Rat(1, 2));

  const auto ones = all_ones();
  for (long long n : {1LL, 4LL, 10LL}) {
    CHECK(real_embed(ones, n) == Rat(1) - Rat(Int(1), Int(1) << n));
  }
  CHECK(limit_real(ones) == Rat(1));

  // positions 4 and 5 carry digits 8..11
  const auto base = BinarySeqZ::explicit_symmetric({1, 0, 0, 0, 1, 1}, {0});
  CHECK(real_embed(base, 7) == Rat(1, 2));
  CHECK(real_embed(base, 11) == Rat(1039, 2048));
  CHECK(limit_real(base) == Rat(1039, 2048));

  const auto alt = alternating();
  CHECK(limit_real(alt) == Rat(3, 5));
  const Rat partial = real_embed(alt, 30);
  CHECK(partial < Rat(3, 5));
  CHECK(Rat(3, 5) - partial < Rat(Int(1), Int(1) << 30));

  const auto built = build_x0([](long long k) { return k; }, 5);
  const long long radius = *built.x.defined_radius();
  CHECK(real_embed(built.x, 9) ==
        Rat(1, 2) + Rat(Int(1), Int(1) << 8) + Rat(Int(1), Int(1) << 9));
  CHECK_NOTHROW(real_embed(built.x, 2 * radius + 1));
  CHECK_THROWS_AS(real_embed(built.x, 2 * radius + 2), std::invalid_argument);
  CHECK_THROWS_AS(limit_real(built.x), std::invalid_argument);
}

TEST_CASE("mean discontinuity witnesses along the embedding") {
  // mean above one half: constant-zero tail
  const auto ones = all_ones();
  const auto w1 = discontinuity_witness(ones, Rat(1, 2), Rat(3, 2), Rat(1, 8));
  CHECK(w1.digits == 5);
  CHECK(w1.r == Rat(1));
  CHECK(w1.r_prime == Rat(31, 32));
  CHECK(w1.mean == Rat(1));
  CHECK(w1.mean_prime == Rat(0));
  CHECK(boost::multiprecision::abs(w1.r - w1.r_prime) < Rat(1, 8));

  // mean below one half: constant-one tail
  const auto d = delta();
  const auto w0 = discontinuity_witness(d, Rat(1, 4), Rat(3, 4), Rat(1, 4));
  CHECK(w0.digits == 3);
  CHECK(w0.r == Rat(1, 2));
  CHECK(w0.r_prime == Rat(5, 8));
  CHECK(w0.mean == Rat(0));
  CHECK(w0.mean_prime == Rat(1));
  CHECK(w0.x_prime.at(1) == 0);
  CHECK(w0.x_prime.at(2) == 1);

  // tighter tolerance forces more digits
  const auto tight = discontinuity_witness(d, Rat(1, 4), Rat(3, 4), Rat(1, 1000));
  CHECK(tight.digits == 11);
  CHECK(boost::multiprecision::abs(tight.r - tight.r_prime) < Rat(1, 1000));

  // a narrow interval forces more digits than the tolerance alone would
  const auto narrow = discontinuity_witness(d, Rat(1, 2) - Rat(1, 100),
                                            Rat(3, 4), Rat(1, 4));
  CHECK(narrow.digits == 7);
  CHECK(narrow.r_prime > Rat(1, 2) - Rat(1, 100));
  CHECK(narrow.r_prime < Rat(3, 4));

  // refusal exactly at density one half
  CHECK_THROWS_AS(
      discontinuity_witness(alternating(), Rat(0), Rat(1), Rat(1, 4)),
      DiscontinuityRefusal);

  // precondition failures
  CHECK_THROWS_AS(discontinuity_witness(d, Rat(0), Rat(1, 2), Rat(1, 4)),
                  std::invalid_argument);
  CHECK_THROWS_AS(discontinuity_witness(d, Rat(1, 4), Rat(3, 4), Rat(0)),
                  std::invalid_argument);
  const auto built = build_x0([](long long k) { return k; }, 4);
  CHECK_THROWS_AS(discontinuity_witness(built.x, Rat(0), Rat(1), Rat(1, 4)),
                  std::invalid_argument);
}
