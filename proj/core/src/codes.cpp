#include "folner/codes.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

namespace folner {

namespace {

// Digit strings over {0,1,2}: a word is a '0'-separated sequence of nonempty
// blocks over {1,2}; each block is the bijective base-2 numeral of
// (letter code + 1).  Valid strings are ranked length-first, then
// lexicographically (0 < 1 < 2).  The ranking automaton has three states:
// start (only the empty string is accepted there), "after nonzero" (accepting)
// and "after zero" (non-accepting).
enum State : int { kStart = 0, kNonzero = 1, kZero = 2 };

constexpr int kNoState = -1;

int transition(int state, int digit) {
  switch (state) {
    case kStart:
      return digit == 0 ? kNoState : kNonzero;
    case kNonzero:
      return digit == 0 ? kZero : kNonzero;
    case kZero:
      return digit == 0 ? kNoState : kNonzero;
    default:
      return kNoState;
  }
}

// Counts of accepted completions, indexed by remaining length.
struct CountTables {
  std::vector<Int> from_nonzero{Int(1)};
  std::vector<Int> from_zero{Int(0)};
  std::vector<Int> cum{Int(0), Int(1)};  // cum[L] = #strings of length < L

  void ensure(size_t length) {
    while (from_nonzero.size() <= length) {
      size_t l = from_nonzero.size();
      from_nonzero.push_back(2 * from_nonzero[l - 1] + from_zero[l - 1]);
      from_zero.push_back(2 * from_nonzero[l - 1]);
    }
    while (cum.size() <= length + 1) {
      size_t l = cum.size() - 1;  // next length to add
      cum.push_back(cum[l] + 2 * from_nonzero[l - 1]);
    }
  }

  // Number of accepted strings of length `remaining` continuing from `state`.
  const Int& completions(int state, size_t remaining) {
    ensure(remaining);
    static const Int kZeroCount(0);
    switch (state) {
      case kNonzero:
        return from_nonzero[remaining];
      case kZero:
        return from_zero[remaining];
      case kStart:
        return start_cache(remaining);
      default:
        return kZeroCount;
    }
  }

  const Int& start_cache(size_t remaining) {
    if (start_counts.size() <= remaining) {
      ensure(remaining);
      while (start_counts.size() <= remaining) {
        size_t l = start_counts.size();
        start_counts.push_back(l == 0 ? Int(1) : 2 * from_nonzero[l - 1]);
      }
    }
    return start_counts[remaining];
  }

  std::vector<Int> start_counts;
};

CountTables& tables() {
  static CountTables t;
  return t;
}

using Digits = std::vector<unsigned char>;

Digits to_bijective(Int n) {
  if (n <= 0) throw std::invalid_argument("bijective numeral needs n >= 1");
  Digits out;
  while (n > 0) {
    Int r = n % 2;
    if (r == 0) {
      out.push_back(2);
      n = n / 2 - 1;
    } else {
      out.push_back(1);
      n = (n - 1) / 2;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

Int from_bijective(const Digits& d, size_t begin, size_t end) {
  Int n = 0;
  for (size_t i = begin; i < end; ++i) n = 2 * n + d[i];
  return n;
}

long long to_ll(const Int& x, const char* what) {
  if (x > std::numeric_limits<long long>::max() ||
      x < std::numeric_limits<long long>::min()) {
    throw std::overflow_error(std::string("value out of range for ") + what);
  }
  return x.convert_to<long long>();
}

// Number of powers of g0 whose block numeral value n satisfies n < v.
// Power k (in zigzag order) has letter code k(k+3)/2, hence numeral value
// k(k+3)/2 + 1.
Int special_count_below_value(const Int& v) {
  if (v <= 1) return 0;
  Int m = 2 * v - 3;  // k(k+3) <= m
  if (m < 0) return 0;
  Int disc = 9 + 4 * m;
  Int s = boost::multiprecision::sqrt(disc);
  Int k = (s - 3) / 2;
  if (k < 0) k = 0;
  while (k * (k + 3) > m) --k;
  while ((k + 1) * (k + 4) <= m) ++k;
  if (k < 0) return 0;
  return k + 1;
}

// Count of g0-power words whose digit string has length `length` and whose
// completion of the pure {1,2}-prefix with value `prefix` lies in the subtree
// of all strings extending that prefix by `remaining` digits.
Int specials_in_subtree(const Int& prefix, size_t remaining) {
  Int base = prefix << remaining;
  Int low = base + ((Int(1) << remaining) - 1);
  Int high = base + 2 * ((Int(1) << remaining) - 1);
  return special_count_below_value(high + 1) - special_count_below_value(low);
}

Digits digits_from_word(const Word& w) {
  Digits out;
  long long prev_gen = -1;
  for (size_t i = 0; i < w.size(); ++i) {
    Int gencode;
    if (i == 0) {
      gencode = w[i].gen;
    } else {
      gencode = w[i].gen < prev_gen ? w[i].gen : w[i].gen - 1;
    }
    Int expcode = zigzag_nonzero_inv(Int(w[i].exp));
    Int c = cantor_pair(gencode, expcode);
    if (i > 0) out.push_back(0);
    Digits block = to_bijective(c + 1);
    out.insert(out.end(), block.begin(), block.end());
    prev_gen = w[i].gen;
  }
  return out;
}

Word word_from_digits(const Digits& d) {
  Word out;
  long long prev_gen = -1;
  size_t i = 0;
  bool first = true;
  while (i < d.size()) {
    size_t j = i;
    while (j < d.size() && d[j] != 0) ++j;
    if (j == i) throw std::invalid_argument("malformed digit string");
    Int n = from_bijective(d, i, j);
    auto [a, b] = cantor_unpair(n - 1);
    long long gen;
    if (first) {
      gen = to_ll(a, "generator index");
    } else {
      long long araw = to_ll(a, "generator index");
      gen = araw < prev_gen ? araw : araw + 1;
    }
    long long exp = to_ll(zigzag_nonzero(b), "exponent");
    out.push_back(Letter{gen, exp});
    prev_gen = gen;
    first = false;
    i = (j < d.size()) ? j + 1 : j;
    if (j < d.size() && j + 1 == d.size()) {
      throw std::invalid_argument("malformed digit string (trailing 0)");
    }
  }
  return out;
}

Int rank_string(const Digits& d) {
  CountTables& t = tables();
  size_t length = d.size();
  if (length == 0) return 0;
  t.ensure(length);
  Int rank = t.cum[length];
  int state = kStart;
  for (size_t i = 0; i < length; ++i) {
    for (int digit = 0; digit < d[i]; ++digit) {
      int next = transition(state, digit);
      if (next != kNoState) rank += t.completions(next, length - 1 - i);
    }
    state = transition(state, d[i]);
    if (state == kNoState) throw std::invalid_argument("invalid digit string");
  }
  if (state != kNonzero) throw std::invalid_argument("invalid digit string");
  return rank;
}

Digits unrank_string(size_t length, Int remainder) {
  CountTables& t = tables();
  Digits out;
  out.reserve(length);
  int state = kStart;
  for (size_t i = 0; i < length; ++i) {
    bool placed = false;
    for (int digit = 0; digit <= 2 && !placed; ++digit) {
      int next = transition(state, digit);
      if (next == kNoState) continue;
      const Int& c = t.completions(next, length - 1 - i);
      if (remainder < c) {
        out.push_back(static_cast<unsigned char>(digit));
        state = next;
        placed = true;
      } else {
        remainder -= c;
      }
    }
    if (!placed) throw std::logic_error("unrank walked past available strings");
  }
  return out;
}

// Unranks the gindex-th word (0-based) among all words that are neither the
// identity nor a power of g0, in length-then-lex digit-string order.
Digits unrank_general(const Int& gindex) {
  CountTables& t = tables();
  // generals with string length < L:  cum[L] - 1 - #specials shorter than L
  auto generals_below = [&](size_t length) -> Int {
    t.ensure(length);
    // strings shorter than `length` have numeral value < 2^length - 1
    return t.cum[length] - 1 -
           special_count_below_value((Int(1) << length) - 1);
  };
  size_t length = 1;
  while (generals_below(length + 1) <= gindex) ++length;
  Int j = gindex - generals_below(length);

  Digits out;
  out.reserve(length);
  int state = kStart;
  bool pure = true;   // prefix so far has no 0 digit
  Int prefix = 0;     // bijective value of the pure prefix
  for (size_t i = 0; i < length; ++i) {
    bool placed = false;
    for (int digit = 0; digit <= 2 && !placed; ++digit) {
      int next = transition(state, digit);
      if (next == kNoState) continue;
      Int count = t.completions(next, length - 1 - i);
      if (pure && digit != 0) {
        count -= specials_in_subtree(2 * prefix + digit, length - 1 - i);
      }
      if (j < count) {
        out.push_back(static_cast<unsigned char>(digit));
        state = next;
        if (digit == 0) {
          pure = false;
        } else if (pure) {
          prefix = 2 * prefix + digit;
        }
        placed = true;
      } else {
        j -= count;
      }
    }
    if (!placed) throw std::logic_error("unrank walked past available words");
  }
  return out;
}

}  // namespace

Int cantor_pair(const Int& a, const Int& b) {
  if (a < 0 || b < 0) throw std::invalid_argument("cantor_pair needs naturals");
  Int s = a + b;
  return s * (s + 1) / 2 + b;
}

std::pair<Int, Int> cantor_unpair(const Int& c) {
  if (c < 0) throw std::invalid_argument("cantor_unpair needs a natural");
  Int disc = 8 * c + 1;
  Int s = (boost::multiprecision::sqrt(disc) - 1) / 2;
  while (s * (s + 1) / 2 > c) --s;
  while ((s + 1) * (s + 2) / 2 <= c) ++s;
  Int b = c - s * (s + 1) / 2;
  return {s - b, b};
}

Int zigzag_nonzero(const Int& m) {
  if (m < 0) throw std::invalid_argument("zigzag index must be a natural");
  if (m % 2 == 0) return m / 2 + 1;
  return -((m + 1) / 2);
}

Int zigzag_nonzero_inv(const Int& e) {
  if (e > 0) return 2 * (e - 1);
  if (e < 0) return 2 * (-e) - 1;
  throw std::invalid_argument("zigzag_nonzero_inv needs a nonzero value");
}

Int rank_all(const Word& w) {
  if (!is_canonical(w)) throw std::invalid_argument("word not canonical");
  if (w.empty()) return 0;
  return rank_string(digits_from_word(w));
}

Word unrank_all(const Int& r) {
  if (r < 0) throw std::invalid_argument("rank must be a natural");
  if (r == 0) return {};
  CountTables& t = tables();
  size_t length = 1;
  t.ensure(length);
  while (t.cum[length + 1] <= r) {
    ++length;
    t.ensure(length);
  }
  return word_from_digits(unrank_string(length, r - t.cum[length]));
}

Int power_word_rank(const Int& k) {
  Int c = cantor_pair(Int(0), k);
  return rank_string(to_bijective(c + 1));
}

Int encode_word(const Word& w) {
  if (!is_canonical(w)) throw std::invalid_argument("word not canonical");
  if (w.empty()) return kIdentityCode;
  if (w.size() == 1 && w[0].gen == 0) {
    return 2 * zigzag_nonzero_inv(Int(w[0].exp));
  }
  Digits d = digits_from_word(w);
  Int r = rank_string(d);
  // Value bound such that exactly the g0-power words ranked before this word
  // have numeral value < bound.
  size_t first_zero = d.size();
  for (size_t i = 0; i < d.size(); ++i) {
    if (d[i] == 0) {
      first_zero = i;
      break;
    }
  }
  Int bound;
  if (first_zero == d.size()) {
    bound = from_bijective(d, 0, d.size());
  } else {
    Int prefix = from_bijective(d, 0, first_zero);
    size_t rem = d.size() - first_zero;
    bound = (prefix << rem) + ((Int(1) << rem) - 1);
  }
  Int gindex = r - 1 - special_count_below_value(bound);
  return 2 * gindex + 3;
}

Word decode_word(const Int& code) {
  if (code < 0) throw std::invalid_argument("code must be a natural");
  if (code == 1) return {};
  if (code % 2 == 0) {
    long long exp = to_ll(zigzag_nonzero(code / 2), "exponent");
    return Word{Letter{0, exp}};
  }
  return word_from_digits(unrank_general((code - 3) / 2));
}

Int star(const Int& a, const Int& b) {
  return encode_word(word_mul(decode_word(a), decode_word(b)));
}

Int inv(const Int& a) { return encode_word(word_inv(decode_word(a))); }

Int pow_code(const Int& a, long long k) {
  return encode_word(word_pow(decode_word(a), k));
}

}  // namespace folner
