#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace folner {

/// One syllable of a reduced group word: generator index and nonzero exponent.
struct Letter {
  long long gen = 0;  ///< generator index, >= 0
  long long exp = 0;  ///< exponent, != 0 in canonical form

  friend bool operator==(const Letter&, const Letter&) = default;
};

/// A group word in canonical (freely reduced) form: every exponent is nonzero
/// and adjacent letters use distinct generators.  The empty word is the
/// identity.
using Word = std::vector<Letter>;

/// Freely reduces an arbitrary letter sequence to canonical form.
Word reduce(const std::vector<Letter>& letters);

/// True when the word satisfies the canonical-form invariants.
bool is_canonical(const Word& w);

/// Product of two canonical words (canonical result).
Word word_mul(const Word& a, const Word& b);

/// Inverse of a canonical word (canonical result).
Word word_inv(const Word& a);

/// k-th power of a canonical word, k may be negative or zero.
Word word_pow(const Word& a, long long k);

/// Renders a word as e.g. "g0^2*g1^-1*g0"; the empty word renders as "e".
std::string word_to_string(const Word& w);

/// Parses the format produced by word_to_string (also accepts "1" for "e").
Word parse_word(const std::string& s);

}  // namespace folner
