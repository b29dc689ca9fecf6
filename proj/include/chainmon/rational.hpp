#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace chainmon {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lowest terms, positive denominator. cpp_rational rejects a negative
// denominator in its two-argument constructor, so route through division.
inline Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  return Rational(num) / Rational(den);
}

// Stern's diatomic sequence; fusc(n)/fusc(n+1) walks the Calkin-Wilf tree.
inline Integer fusc(std::uint64_t n) {
  Integer a = 1, b = 0;
  while (n != 0) {
    if (n & 1u)
      b += a;
    else
      a += b;
    n >>= 1;
  }
  return b;
}

// k-th positive rational of the Calkin-Wilf sequence, k >= 0:
// 1, 1/2, 2, 1/3, 3/2, 2/3, 3, ...
inline Rational calkin_wilf(std::uint64_t k) {
  return make_rational(fusc(k + 1), fusc(k + 2));
}

inline std::string rational_text(const Rational& q) {
  return numerator(q).str() + "/" + denominator(q).str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(Integer(s));
    return make_rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed rational: " + s);
  }
}

inline Integer floor_rational(const Rational& q) {
  Integer n = numerator(q), d = denominator(q);
  Integer quo = n / d;
  if (n < 0 && quo * d != n) --quo;
  return quo;
}

}  // namespace chainmon
