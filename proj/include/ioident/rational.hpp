#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

namespace ioident {

// All coefficient arithmetic is exact. cpp_rational keeps gcd(num, den) = 1
// and den > 0 as class invariants, which is exactly the canonical form we
// need everywhere.
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline std::string to_string(const Rational& q) { return q.str(); }

} // namespace ioident
