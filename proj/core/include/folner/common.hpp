#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <stdexcept>
#include <string>

namespace folner {

/// Arbitrary-precision integer used for element codes and exact counting.
using Int = boost::multiprecision::cpp_int;

/// Exact rational number used for all defects, weights and distances.
using Rat = boost::multiprecision::cpp_rational;

/// Floor of a rational as an integer (works for negative values).
inline Int rat_floor(const Rat& r) {
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);  // den > 0 by invariant
  Int q = num / den;
  if (num < 0 && q * den != num) --q;
  return q;
}

/// Parses "p", "p/q" or a decimal like "0.25" into an exact rational.
inline Rat parse_rational(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string head = s.substr(0, dot);
    std::string tail = s.substr(dot + 1);
    if (tail.empty()) throw std::invalid_argument("bad decimal literal: " + s);
    bool neg = !head.empty() && head[0] == '-';
    if (neg) head = head.substr(1);
    if (head.empty()) head = "0";
    Int scale = 1;
    for (size_t i = 0; i < tail.size(); ++i) scale *= 10;
    Rat value = Rat(Int(head) * scale + Int(tail), scale);
    return neg ? -value : value;
  }
  return Rat(Int(s));
}

/// Renders a rational as "p/q" (or "p" when the denominator is 1).
inline std::string rational_to_string(const Rat& r) {
  Int num = boost::multiprecision::numerator(r);
  Int den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace folner
