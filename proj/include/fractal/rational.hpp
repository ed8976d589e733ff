#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace fractal {

// Exact rational scalar used by every table-mode computation. All metric,
// transport and extension arithmetic must be exact; doubles appear only in
// the Euclidean lane and in reports.
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline Rat make_rat(long long num, long long den = 1) {
  return Rat(BigInt(num), BigInt(den));
}

inline double rat_to_double(const Rat& r) { return r.template convert_to<double>(); }

// Exact conversion: every finite double is a binary rational.
inline Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("rat_from_double: non-finite");
  if (x == 0.0) return Rat(0);
  int exp = 0;
  double m = std::frexp(x, &exp);  // x = m * 2^exp, |m| in [0.5, 1)
  auto mant = static_cast<long long>(std::ldexp(m, 53));
  exp -= 53;
  Rat r(mant);
  if (exp >= 0) {
    r *= Rat(BigInt(1) << exp);
  } else {
    r /= Rat(BigInt(1) << -exp);
  }
  return r;
}

namespace detail {

inline bool parse_uint_digits(std::string_view s, BigInt& out) {
  if (s.empty()) return false;
  out = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + (c - '0');
  }
  return true;
}

}  // namespace detail

// Accepts "p/q", integers, plain decimals ("0.25") and scientific decimals
// ("1e-3", "2.5E2"). Decimals parse as exact scaled rationals.
inline Rat parse_rat(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (s.empty()) throw std::invalid_argument("parse_rat: empty string");

  bool neg = false;
  if (s.front() == '+' || s.front() == '-') {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) throw std::invalid_argument("parse_rat: sign only");

  auto bad = [&] { throw std::invalid_argument("parse_rat: cannot parse '" + std::string(text) + "'"); };

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    BigInt num, den;
    if (!detail::parse_uint_digits(s.substr(0, slash), num)) bad();
    if (!detail::parse_uint_digits(s.substr(slash + 1), den)) bad();
    if (den == 0) throw std::invalid_argument("parse_rat: zero denominator");
    Rat r(num, den);
    return neg ? Rat(-r) : r;
  }

  std::string_view mantissa = s;
  long long exp10 = 0;
  if (auto epos = s.find_first_of("eE"); epos != std::string_view::npos) {
    mantissa = s.substr(0, epos);
    std::string_view es = s.substr(epos + 1);
    bool eneg = false;
    if (!es.empty() && (es.front() == '+' || es.front() == '-')) {
      eneg = es.front() == '-';
      es.remove_prefix(1);
    }
    BigInt e;
    if (!detail::parse_uint_digits(es, e)) bad();
    if (e > 4096) throw std::invalid_argument("parse_rat: exponent too large");
    exp10 = e.template convert_to<long long>();
    if (eneg) exp10 = -exp10;
  }

  BigInt ipart = 0, fpart = 0;
  std::size_t fdigits = 0;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view is = mantissa.substr(0, dot);
    std::string_view fs = mantissa.substr(dot + 1);
    if (is.empty() && fs.empty()) bad();
    if (!is.empty() && !detail::parse_uint_digits(is, ipart)) bad();
    if (!fs.empty()) {
      if (!detail::parse_uint_digits(fs, fpart)) bad();
      fdigits = fs.size();
    }
  } else {
    if (!detail::parse_uint_digits(mantissa, ipart)) bad();
  }

  BigInt scale = 1;
  for (std::size_t i = 0; i < fdigits; ++i) scale *= 10;
  Rat r = Rat(ipart) + Rat(fpart, scale);
  if (exp10 > 0) {
    BigInt p = 1;
    for (long long i = 0; i < exp10; ++i) p *= 10;
    r *= Rat(p);
  } else if (exp10 < 0) {
    BigInt p = 1;
    for (long long i = 0; i < -exp10; ++i) p *= 10;
    r /= Rat(p);
  }
  return neg ? Rat(-r) : r;
}

// "p/q" for non-integers, plain integer string otherwise.
inline std::string rat_to_string(const Rat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline std::size_t rat_bits(const Rat& r) {
  return boost::multiprecision::msb(boost::multiprecision::abs(boost::multiprecision::numerator(r)) + 1) +
         boost::multiprecision::msb(boost::multiprecision::denominator(r) + 1);
}

// Smallest k/2^64 >= r. Used to keep long modulus iterations from growing
// unbounded digit counts while never under-reporting the iterate.
inline Rat rat_ceil_coarse(const Rat& r) {
  const BigInt scale = BigInt(1) << 64;
  BigInt num = boost::multiprecision::numerator(r) * scale;
  const BigInt den = boost::multiprecision::denominator(r);
  BigInt q = num / den;
  if (q * den != num) ++q;
  return Rat(q, scale);
}

}  // namespace fractal
