#include "folner/words.hpp"

#include <cctype>
#include <stdexcept>

namespace folner {

Word reduce(const std::vector<Letter>& letters) {
  Word out;
  for (const Letter& l : letters) {
    if (l.gen < 0) throw std::invalid_argument("negative generator index");
    if (l.exp == 0) continue;
    if (!out.empty() && out.back().gen == l.gen) {
      out.back().exp += l.exp;
      if (out.back().exp == 0) out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

bool is_canonical(const Word& w) {
  for (size_t i = 0; i < w.size(); ++i) {
    if (w[i].gen < 0 || w[i].exp == 0) return false;
    if (i > 0 && w[i].gen == w[i - 1].gen) return false;
  }
  return true;
}

Word word_mul(const Word& a, const Word& b) {
  std::vector<Letter> cat;
  cat.reserve(a.size() + b.size());
  cat.insert(cat.end(), a.begin(), a.end());
  cat.insert(cat.end(), b.begin(), b.end());
  return reduce(cat);
}

Word word_inv(const Word& a) {
  Word out;
  out.reserve(a.size());
  for (auto it = a.rbegin(); it != a.rend(); ++it) {
    out.push_back(Letter{it->gen, -it->exp});
  }
  return out;
}

Word word_pow(const Word& a, long long k) {
  if (k == 0) return {};
  Word base = k < 0 ? word_inv(a) : a;
  unsigned long long e = k < 0 ? static_cast<unsigned long long>(-(k + 1)) + 1
                               : static_cast<unsigned long long>(k);
  Word acc;  // identity
  Word sq = base;
  while (e > 0) {
    if (e & 1ULL) acc = word_mul(acc, sq);
    e >>= 1ULL;
    if (e > 0) sq = word_mul(sq, sq);
  }
  return acc;
}

std::string word_to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += "*";
    out += "g" + std::to_string(w[i].gen);
    if (w[i].exp != 1) out += "^" + std::to_string(w[i].exp);
  }
  return out;
}

Word parse_word(const std::string& s) {
  if (s == "e" || s == "1" || s.empty()) return {};
  std::vector<Letter> letters;
  size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '*') {
      ++i;
      continue;
    }
    if (s[i] != 'g') throw std::invalid_argument("expected 'g' in word: " + s);
    ++i;
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) throw std::invalid_argument("missing generator index: " + s);
    long long gen = std::stoll(s.substr(start, i - start));
    long long exp = 1;
    if (i < s.size() && s[i] == '^') {
      ++i;
      size_t es = i;
      if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (es == i) throw std::invalid_argument("missing exponent: " + s);
      exp = std::stoll(s.substr(es, i - es));
    }
    letters.push_back(Letter{gen, exp});
  }
  return reduce(letters);
}

}  // namespace folner
