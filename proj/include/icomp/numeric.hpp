#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace icomp {

using Nat = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline constexpr std::uint64_t kNoBound = UINT64_MAX;

Rational ratio(std::int64_t num, std::int64_t den);
Nat numer(const Rational& q);
Nat denom(const Rational& q);

// 2^k for any integer k.
Rational pow2(int k);
Nat pow2Nat(unsigned k);

Rational absolute(const Rational& q);
Nat floorOf(const Rational& q);
Nat ceilOf(const Rational& q);

// Exponent of 2 in n (n > 0).
unsigned valuation2(const Nat& n);
unsigned valuation2(std::uint64_t n);

// Throws Overflow when n does not fit.
std::uint64_t toU64(const Nat& n);
bool fitsU64(const Nat& n);

std::string toString(const Rational& q);
std::string toString(const Nat& n);
std::string toDecimal(const Rational& q, int digits);
double toDouble(const Rational& q);

// Accepts "3", "-2", "1/3", "0.25".
Rational parseRational(std::string_view text);

}  // namespace icomp
