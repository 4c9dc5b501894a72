#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhbell {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational scalar for everything on the classical side. Classical bound
// proofs are decisive only if no rounding happens anywhere between the
// construction of an inequality and its vertex maximum; floating point enters
// first in the quantum operators.
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

// Accepts "n" or "n/d" with an optional leading sign. Anything else (empty
// string, stray characters, zero denominator) is rejected.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  std::size_t i = (text[0] == '+' || text[0] == '-') ? 1 : 0;
  bool digits = false, slash = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = true;
    } else if (c == '/' && !slash && digits) {
      slash = true;
      digits = false;
    } else {
      fail();
    }
  }
  if (!digits) fail();
  try {
    Rational q{std::string(text)};
    return q;
  } catch (const std::exception&) {
    fail();
  }
  return Rational{};  // unreachable
}

}  // namespace nhbell
