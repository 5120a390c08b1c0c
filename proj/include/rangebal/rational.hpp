#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace rangebal {

// All threshold comparisons and potential accounting run on exact rationals.
// Doubles appear only in workload sampling and in plot-ready summary output.
using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

struct RationalParseError : std::runtime_error {
  explicit RationalParseError(const std::string& what) : std::runtime_error(what) {}
};

// Accepts "p/q", plain integers, and decimal literals ("5.47" -> 547/100).
Rational parse_rational(const std::string& text);

// Canonical "p/q" form, integers printed without the "/1".
std::string rational_str(const Rational& value);

// Decimal string with explicit denominator, for log output.
inline std::string int_str(const Integer& value) { return value.str(); }

// Largest integer <= value.
Integer floor_int(const Rational& value);

inline std::uint32_t ceil_log2(std::uint64_t n) {
  std::uint32_t bits = 0;
  while (bits < 64 && (std::uint64_t{1} << bits) < n) ++bits;
  return bits;
}

}  // namespace rangebal
