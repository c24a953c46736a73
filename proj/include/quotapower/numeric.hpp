#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <string>

namespace quotapower {

// All coalition counts are arbitrary-precision integers and all power values
// exact rationals; doubles appear only at output boundaries.
using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

// C(n, k) computed by exact multiplicative descent; 0 when k < 0 or k > n.
BigInt binomial(std::int64_t n, std::int64_t k);

BigInt factorial(std::int64_t n);

// Smallest integer >= r.
BigInt ceil_rat(const BigRat& r);

// Largest integer <= r.
BigInt floor_rat(const BigRat& r);

// Accepts "a/b", plain integers, and finite decimal strings ("0.625"),
// all parsed exactly. Throws std::invalid_argument on anything else.
BigRat parse_rational(const std::string& text);

// "num/den" in lowest terms, denominator positive.
std::string format_rational(const BigRat& r);

// Nearest double, rendered with 17 significant digits.
std::string format_double17(const BigRat& r);

double to_double(const BigRat& r);

// Throws std::overflow_error when v does not fit.
std::int64_t to_int64_checked(const BigInt& v);

// FNV-1a over the little-endian bytes of each value; stable across runs.
std::uint64_t fnv1a64(std::span<const std::int64_t> values);

}  // namespace quotapower
