#include "icomp/numeric.hpp"

#include <charconv>
#include <sstream>

#include "icomp/error.hpp"

namespace icomp {

namespace mp = boost::multiprecision;

Rational ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::OutOfRange, "zero denominator");
  return Rational(num) / Rational(den);
}

Nat numer(const Rational& q) { return mp::numerator(q); }
Nat denom(const Rational& q) { return mp::denominator(q); }

Nat pow2Nat(unsigned k) { return Nat(1) << k; }

Rational pow2(int k) {
  if (k >= 0) return Rational(pow2Nat(static_cast<unsigned>(k)));
  return Rational(Nat(1), pow2Nat(static_cast<unsigned>(-k)));
}

Rational absolute(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Nat floorOf(const Rational& q) {
  Nat n = numer(q), d = denom(q);
  Nat f = n / d;
  if (n < 0 && f * d != n) f -= 1;
  return f;
}

Nat ceilOf(const Rational& q) {
  Nat f = floorOf(q);
  return Rational(f) == q ? f : Nat(f + 1);
}

unsigned valuation2(const Nat& n) {
  if (n <= 0) fail(ErrorKind::OutOfRange, "valuation of non-positive integer");
  return static_cast<unsigned>(mp::lsb(n));
}

unsigned valuation2(std::uint64_t n) {
  if (n == 0) fail(ErrorKind::OutOfRange, "valuation of zero");
  return static_cast<unsigned>(__builtin_ctzll(n));
}

bool fitsU64(const Nat& n) { return n >= 0 && n <= Nat(UINT64_MAX); }

std::uint64_t toU64(const Nat& n) {
  if (!fitsU64(n)) fail(ErrorKind::Overflow, "value " + toString(n) + " exceeds 64 bits");
  return static_cast<std::uint64_t>(n);
}

std::string toString(const Nat& n) { return n.str(); }

std::string toString(const Rational& q) {
  if (denom(q) == 1) return numer(q).str();
  return numer(q).str() + "/" + denom(q).str();
}

std::string toDecimal(const Rational& q, int digits) {
  Rational scaled = absolute(q) * Rational(mp::pow(Nat(10), static_cast<unsigned>(digits)));
  Nat r = floorOf(scaled + Rational(1, 2));
  std::string s = r.str();
  if (static_cast<int>(s.size()) <= digits) s.insert(0, digits + 1 - s.size(), '0');
  s.insert(s.size() - digits, ".");
  if (q < 0 && r != 0) s.insert(0, "-");
  return s;
}

double toDouble(const Rational& q) { return q.convert_to<double>(); }

Rational parseRational(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  auto integer = [&](std::string_view s) -> Nat {
    s = trim(s);
    bool neg = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
      neg = s.front() == '-';
      s.remove_prefix(1);
    }
    if (s.empty()) fail(ErrorKind::ParseError, "expected integer in '" + std::string(text) + "'");
    for (char c : s)
      if (c < '0' || c > '9')
        fail(ErrorKind::ParseError, "bad number '" + std::string(text) + "'");
    Nat v{std::string(s)};
    return neg ? Nat(-v) : v;
  };
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Nat d = integer(text.substr(slash + 1));
    if (d == 0) fail(ErrorKind::ParseError, "zero denominator in '" + std::string(text) + "'");
    return Rational(integer(text.substr(0, slash)), d);
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view frac = text.substr(dot + 1);
    std::string_view whole = text.substr(0, dot);
    bool neg = !whole.empty() && whole.front() == '-';
    Nat w = whole.empty() || whole == "-" ? Nat(0) : integer(whole);
    Nat f = frac.empty() ? Nat(0) : integer(frac);
    if (f < 0) fail(ErrorKind::ParseError, "bad decimal '" + std::string(text) + "'");
    Rational fr(f, mp::pow(Nat(10), static_cast<unsigned>(frac.size())));
    Rational v = Rational(w < 0 ? Nat(-w) : w) + fr;
    return neg ? Rational(-v) : v;
  }
  return Rational(integer(text));
}

}  // namespace icomp
