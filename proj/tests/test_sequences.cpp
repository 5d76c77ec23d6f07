#include <random>
#include <variant>

#include "doctest.h"
#include "folner/codes.hpp"
#include "folner/folner.hpp"
#include "folner/sequences.hpp"

using namespace folner;

namespace {

Int pcode(long long p) {
  if (p == 0) return kIdentityCode;
  return encode_word(Word{{0, p}});
}

std::vector<Int> interval_codes(long long lo, long long hi) {
  std::vector<Int> out;
  for (long long p = lo; p <= hi; ++p) out.push_back(pcode(p));
  return out;
}

const SequenceCell& cell_for(const SequenceHorizonReport& r, const Int& x,
                             long long n) {
  for (const auto& c : r.cells) {
    if (c.x == x && c.n == n) return c;
  }
  REQUIRE(false);
  return r.cells.front();
}

const CaseCell& case_cell(const CaseStudyReport& r, long long coord,
                          long long n) {
  for (const auto& c : r.thresholds) {
    if (c.coord == coord && c.n == n) return c;
  }
  REQUIRE(false);
  return r.thresholds.front();
}

WSpec all_spec() {
  WSpec s;
  s.kind = WSpec::Kind::All;
  return s;
}

WSpec initial_spec() {
  WSpec s;
  s.kind = WSpec::Kind::Initial;
  return s;
}

WSpec finite_spec(std::vector<long long> elems) {
  WSpec s;
  s.kind = WSpec::Kind::Finite;
  s.elems = std::move(elems);
  return s;
}

}  // namespace

TEST_CASE("horizon verification on growing intervals") {
  auto z = make_z();
  SequenceProgram prog = [](long long j) {
    return std::optional<std::vector<Int>>(interval_codes(-j, j));
  };
  auto report = verify_sequence_horizon(*z, prog, 100, {pcode(1)}, 10);
  CHECK(report.cells.size() == 10);
  const auto& c10 = cell_for(report, pcode(1), 10);
  REQUIRE(c10.least_l.has_value());
  CHECK(*c10.least_l == 5);
  CHECK(c10.violations == std::vector<long long>{0, 1, 2, 3, 4});
  // the tail bound is already settled at a shorter horizon
  auto shorter = verify_sequence_horizon(*z, prog, 40, {pcode(1)}, 10);
  CHECK(*cell_for(shorter, pcode(1), 10).least_l == 5);
}

TEST_CASE("constant singleton program fails at every stage") {
  auto z = make_z();
  SequenceProgram prog = [](long long) {
    return std::optional<std::vector<Int>>(std::vector<Int>{kIdentityCode});
  };
  auto report = verify_sequence_horizon(*z, prog, 20, {pcode(1)}, 3);
  for (const auto& c : report.cells) {
    CHECK_FALSE(c.least_l.has_value());
    CHECK(c.violations.size() == 21);
  }
}

TEST_CASE("whole finite group passes vacuously from stage zero") {
  auto c3 = make_cyclic(3);
  std::vector<Int> everyone;
  for (const auto& e : c3->ball(1)) everyone.push_back(c3->element_code(e));
  SequenceProgram prog = [&everyone](long long) {
    return std::optional<std::vector<Int>>(everyone);
  };
  auto report =
      verify_sequence_horizon(*c3, prog, 10, {encode_word(Word{{0, 1}})}, 5);
  for (const auto& c : report.cells) {
    REQUIRE(c.least_l.has_value());
    CHECK(*c.least_l == 0);
    CHECK(c.violations.empty());
  }
}

TEST_CASE("partial programs are a distinguished failure") {
  auto z = make_z();
  SequenceProgram prog = [](long long j) -> std::optional<std::vector<Int>> {
    if (j == 3) return std::nullopt;
    return interval_codes(0, j);
  };
  try {
    verify_sequence_horizon(*z, prog, 10, {pcode(1)}, 2);
    FAIL("expected a totality error");
  } catch (const SequenceTotalityError& e) {
    CHECK(e.j == 3);
  }
  SequenceProgram empty_prog = [](long long) {
    return std::optional<std::vector<Int>>(std::vector<Int>{});
  };
  CHECK_THROWS_AS(verify_sequence_horizon(*z, empty_prog, 2, {pcode(1)}, 2),
                  std::invalid_argument);
}

TEST_CASE("violations per stage do not depend on the horizon") {
  auto z = make_z();
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<long long> len(0, 6);
  std::vector<long long> radii;
  for (int j = 0; j <= 30; ++j) radii.push_back(len(rng));
  SequenceProgram prog = [&radii](long long j) {
    return std::optional<std::vector<Int>>(
        interval_codes(-radii[static_cast<std::size_t>(j)],
                       radii[static_cast<std::size_t>(j)]));
  };
  auto longr = verify_sequence_horizon(*z, prog, 30, {pcode(1), pcode(2)}, 4);
  auto shortr = verify_sequence_horizon(*z, prog, 12, {pcode(1), pcode(2)}, 4);
  for (const auto& sc : shortr.cells) {
    const auto& lc = cell_for(longr, sc.x, sc.n);
    std::vector<long long> trimmed;
    for (long long k : lc.violations) {
      if (k <= 12) trimmed.push_back(k);
    }
    CHECK(trimmed == sc.violations);
  }
}

TEST_CASE("the fixed pair enumeration is fair and repetition-free") {
  CeFamilyModel model;
  model.fallback = initial_spec();
  const std::vector<std::pair<long long, long long>> expected = {
      {1, 0}, {1, 1}, {2, 0}, {2, 1}, {3, 0}, {2, 2}, {3, 1}, {4, 0}};
  for (std::size_t s = 1; s <= expected.size(); ++s) {
    auto p = model.pair_at(static_cast<long long>(s));
    REQUIRE(p.has_value());
    CHECK(*p == expected[s - 1]);
  }

  CeFamilyModel finite_model;
  finite_model.w[2] = finite_spec({0, 5});
  CHECK(finite_model.pair_at(1) == std::pair<long long, long long>{2, 0});
  CHECK(finite_model.pair_at(2) == std::pair<long long, long long>{2, 5});
  CHECK_FALSE(finite_model.pair_at(3).has_value());
}

TEST_CASE("reduction sets match the worked instances") {
  CeFamilyModel w1_all;
  w1_all.w[1] = all_spec();
  auto rs = build_reduction_set(w1_all, 2);  // second pair is (1, 1)
  CHECK(rs.n_s == 1);
  CHECK(rs.x_s == 1);
  REQUIRE(rs.set.factors.size() == 2);
  CHECK(rs.set.factors[0] == std::vector<long long>{-1, 0, 1});
  CHECK(rs.set.factors[1] == std::vector<long long>{-2, -1, 0, 1, 2});
  CHECK(rs.set.size() == 15);  // (2s+1)^(s-1) * 3

  CeFamilyModel w3_all;
  w3_all.w[3] = all_spec();
  auto rs2 = build_reduction_set(w3_all, 2);  // pair (3, 1), index beyond s
  CHECK(rs2.n_s == 3);
  CHECK(rs2.set.size() == 25);  // (2s+1)^s
  CHECK(rs2.set.factors[0] == rs2.set.factors[1]);

  CeFamilyModel empty;
  CHECK_THROWS_AS(build_reduction_set(empty, 1), std::invalid_argument);

  // determinism
  auto again = build_reduction_set(w1_all, 2);
  CHECK(again.set.factors == rs.set.factors);
}

TEST_CASE("factored defects agree with materialized sets") {
  auto ds = make_direct_sum_z();
  CeFamilyModel w1_all;
  w1_all.w[1] = all_spec();
  for (long long s = 1; s <= 3; ++s) {
    auto rs = build_reduction_set(w1_all, s);
    auto codes = rs.set.to_codes(*ds);
    CHECK(Int(static_cast<long long>(codes.size())) == rs.set.size());
    for (const auto& shift : std::vector<std::map<long long, long long>>{
             {{1, 1}},
             {{1, -2}},
             {{2, 1}},
             {{1, 1}, {2, -1}},
             {{0, 1}},
             {{3, 2}}}) {
      Word xw;
      for (const auto& [c, k] : shift) xw = word_mul(xw, Word{{c, k}});
      CHECK(rs.set.defect(shift) == defect(*ds, codes, encode_word(xw)));
    }
  }
  // the short factor drives the single-coordinate defect exactly
  auto rs3 = build_reduction_set(w1_all, 3);
  CHECK(rs3.set.defect({{1, 1}}) == Rat(1, 3));
  CHECK(rs3.set.defect({{2, 1}}) == Rat(1, 7));
}

TEST_CASE("case study with an infinite witness set keeps failing") {
  CeFamilyModel w1_all;
  w1_all.w[1] = all_spec();
  auto report = reduction_case_study(w1_all, 50);
  CHECK(report.has_infinite);
  CHECK(report.designated_n == 1);
  CHECK_FALSE(report.behaves_as_folner);
  REQUIRE(report.failure_indices.size() == 50);
  for (long long s = 1; s <= 50; ++s) {
    CHECK(report.failure_indices[static_cast<std::size_t>(s - 1)] == s);
  }

  CeFamilyModel ap;
  ap.w[2].kind = WSpec::Kind::Progression;
  ap.w[2].start = 1;
  ap.w[2].step = 3;
  auto ap_report = reduction_case_study(ap, 12);
  CHECK(ap_report.designated_n == 2);
  CHECK(ap_report.failure_indices.size() == 12);
}

TEST_CASE("case study with finite witness sets settles down") {
  CeFamilyModel initial;
  initial.fallback = initial_spec();
  auto report = reduction_case_study(initial, 50);
  CHECK_FALSE(report.has_infinite);
  CHECK(report.behaves_as_folner);
  CHECK(*case_cell(report, 1, 4).least_l == 3);
  CHECK(case_cell(report, 1, 4).violations == std::vector<long long>{1, 2});
  CHECK(*case_cell(report, 2, 4).least_l == 7);
  CHECK(case_cell(report, 2, 4).violations ==
        std::vector<long long>{1, 3, 4, 6});
  CHECK(*case_cell(report, 1, 1).least_l == 1);

  CeFamilyModel empty;
  auto plain = reduction_case_study(empty, 6);
  CHECK(plain.behaves_as_folner);
  CHECK(*case_cell(plain, 1, 4).least_l == 2);
  CHECK(*case_cell(plain, 2, 4).least_l == 2);
}
