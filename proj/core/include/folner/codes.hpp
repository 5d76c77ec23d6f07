#pragma once

#include <utility>

#include "folner/common.hpp"
#include "folner/words.hpp"

namespace folner {

/// Bijective coding of canonical words by naturals.  Pinned values:
/// 0 -> g0, 1 -> e (identity), 2 -> g0^-1, 3 -> g1.  Even codes enumerate the
/// powers of g0 (a constant-time fast lane); odd codes >= 3 enumerate all
/// remaining words in length-then-lexicographic order of their digit-string
/// representations.
Int encode_word(const Word& w);

/// Inverse of encode_word.
Word decode_word(const Int& code);

/// Rank of a canonical word in the global length-then-lex order of digit
/// strings (the identity has rank 0, g0 has rank 1, g1 has rank 2, ...).
Int rank_all(const Word& w);

/// Inverse of rank_all.
Word unrank_all(const Int& r);

/// Rank (in the global order) of the k-th power word of g0, where powers are
/// enumerated +1, -1, +2, -2, ...  Strictly increasing in k.
Int power_word_rank(const Int& k);

/// Cantor pairing (a+b)(a+b+1)/2 + b and its inverse.
Int cantor_pair(const Int& a, const Int& b);
std::pair<Int, Int> cantor_unpair(const Int& c);

/// Zigzag enumeration of nonzero integers: 0 -> +1, 1 -> -1, 2 -> +2, ...
Int zigzag_nonzero(const Int& m);
/// Inverse of zigzag_nonzero.
Int zigzag_nonzero_inv(const Int& e);

/// Code of the identity word.
inline const Int kIdentityCode = Int(1);

/// Free-group multiplication on codes: encode(decode(a) . decode(b)).
Int star(const Int& a, const Int& b);

/// Free-group inverse on codes.
Int inv(const Int& a);

/// Free-group power on codes.
Int pow_code(const Int& a, long long k);

}  // namespace folner
