#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace dofnet {

// Compare against Rational(n), never a bare integer: boost's mixed operator==
// recurses forever under C++20 rewritten comparisons.
using Rational = boost::rational<std::int64_t>;

// "p/q" in lowest terms, or "p" when the denominator is 1.
std::string to_string(const Rational& r);

// Accepts "p/q" or an integer literal. Throws InvalidParameter.
Rational parse_rational(const std::string& text);

}  // namespace dofnet
