#include <random>
#include <vector>

#include "doctest.h"
#include "folner/codes.hpp"

using namespace folner;

namespace {

Word random_word(std::mt19937_64& rng, int max_len) {
  std::uniform_int_distribution<int> len_dist(0, max_len);
  std::uniform_int_distribution<long long> gen_dist(0, 5);
  std::uniform_int_distribution<long long> exp_dist(-4, 4);
  std::vector<Letter> letters;
  int len = len_dist(rng);
  for (int i = 0; i < len; ++i) {
    long long e = exp_dist(rng);
    if (e == 0) e = 1;
    letters.push_back(Letter{gen_dist(rng), e});
  }
  return reduce(letters);
}

}  // namespace

TEST_CASE("pinned code values") {
  CHECK(decode_word(Int(0)) == Word{Letter{0, 1}});   // g0
  CHECK(decode_word(Int(1)) == Word{});               // identity
  CHECK(decode_word(Int(2)) == Word{Letter{0, -1}});  // g0^-1
  CHECK(decode_word(Int(3)) == Word{Letter{1, 1}});   // g1

  CHECK(encode_word({Letter{0, 1}}) == 0);
  CHECK(encode_word({}) == 1);
  CHECK(encode_word({Letter{0, -1}}) == 2);
  CHECK(encode_word({Letter{1, 1}}) == 3);
  CHECK(kIdentityCode == 1);
}

TEST_CASE("pinned global ranks") {
  CHECK(rank_all({}) == 0);
  CHECK(rank_all({Letter{0, 1}}) == 1);
  CHECK(rank_all({Letter{1, 1}}) == 2);
  CHECK(rank_all({Letter{0, -1}}) == 3);
  CHECK(rank_all({Letter{2, 1}}) == 4);
  CHECK(rank_all({Letter{1, -1}}) == 5);
  CHECK(rank_all({Letter{0, 2}}) == 6);
  CHECK(rank_all({Letter{0, -2}}) == 12);
}

TEST_CASE("rank_all and unrank_all are mutually inverse") {
  for (Int r = 0; r < 3000; ++r) {
    Word w = unrank_all(r);
    CHECK(is_canonical(w));
    CHECK(rank_all(w) == r);
  }
}

TEST_CASE("codes are a bijection on an initial segment") {
  for (Int c = 0; c < 10000; ++c) {
    Word w = decode_word(c);
    CHECK(is_canonical(w));
    CHECK(encode_word(w) == c);
  }
}

TEST_CASE("even codes are exactly the powers of g0") {
  for (Int m = 0; m < 200; ++m) {
    Word w = decode_word(2 * m);
    REQUIRE(w.size() == 1);
    CHECK(w[0].gen == 0);
    CHECK(Int(w[0].exp) == zigzag_nonzero(m));
  }
  // large powers use the constant-time lane
  Word big = decode_word(Int(2) * 1000000000LL);
  REQUIRE(big.size() == 1);
  CHECK(big[0].gen == 0);
  CHECK(encode_word(big) == Int(2) * 1000000000LL);
}

TEST_CASE("random words round-trip through codes") {
  std::mt19937_64 rng(20260819);
  for (int i = 0; i < 500; ++i) {
    Word w = random_word(rng, 8);
    Int c = encode_word(w);
    CHECK(decode_word(c) == w);
  }
}

TEST_CASE("power word ranks are strictly increasing") {
  Int prev(-1);
  for (Int k = 0; k < 60; ++k) {
    Int r = power_word_rank(k);
    CHECK(r > prev);
    prev = r;
    // the rank really is the global rank of that power word
    Word w{Letter{0, zigzag_nonzero(k).convert_to<long long>()}};
    CHECK(rank_all(w) == r);
  }
}

TEST_CASE("cantor pairing round-trips") {
  CHECK(cantor_pair(Int(0), Int(0)) == 0);
  CHECK(cantor_pair(Int(1), Int(0)) == 1);
  CHECK(cantor_pair(Int(0), Int(1)) == 2);
  for (Int a = 0; a < 25; ++a) {
    for (Int b = 0; b < 25; ++b) {
      auto [x, y] = cantor_unpair(cantor_pair(a, b));
      CHECK(x == a);
      CHECK(y == b);
    }
  }
}

TEST_CASE("zigzag enumeration of nonzero integers") {
  CHECK(zigzag_nonzero(Int(0)) == 1);
  CHECK(zigzag_nonzero(Int(1)) == -1);
  CHECK(zigzag_nonzero(Int(2)) == 2);
  CHECK(zigzag_nonzero(Int(3)) == -2);
  for (Int m = 0; m < 100; ++m) {
    CHECK(zigzag_nonzero_inv(zigzag_nonzero(m)) == m);
  }
}

TEST_CASE("free-group operations on codes") {
  CHECK(star(Int(0), Int(2)) == 1);  // g0 * g0^-1 = e
  CHECK(star(Int(2), Int(0)) == 1);
  CHECK(star(Int(1), Int(3)) == 3);  // e * g1 = g1
  CHECK(star(Int(3), Int(1)) == 3);
  CHECK(inv(Int(0)) == 2);
  CHECK(inv(Int(1)) == 1);
  CHECK(star(Int(3), inv(Int(3))) == 1);
  CHECK(pow_code(Int(0), 5) == encode_word({Letter{0, 5}}));
  CHECK(pow_code(Int(3), -2) == encode_word({Letter{1, -2}}));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 50; ++i) {
    Int a = encode_word(random_word(rng, 4));
    Int b = encode_word(random_word(rng, 4));
    Int c = encode_word(random_word(rng, 4));
    CHECK(star(star(a, b), c) == star(a, star(b, c)));
    CHECK(star(a, inv(a)) == kIdentityCode);
  }
}

TEST_CASE("long words stay consistent") {
  // A lamplighter-style word with many alternating letters.
  std::vector<Letter> letters;
  for (int p = 0; p < 12; ++p) {
    letters.push_back(Letter{0, 2 * p + 1});
    letters.push_back(Letter{1, 1});
  }
  Word w = reduce(letters);
  Int c = encode_word(w);
  CHECK(decode_word(c) == w);
}
