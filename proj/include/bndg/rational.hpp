#pragma once

// Exact rational arithmetic over 64-bit integers.
//
// Every intermediate is computed in 128 bits and reduced before narrowing;
// a result that does not fit in 64 bits throws ErrorCode::overflow instead
// of wrapping. Values are always stored in lowest terms with den > 0.

#include <charconv>
#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "bndg/error.hpp"

namespace bndg {

namespace detail {

using wide = __int128;

inline wide wide_abs(wide v) { return v < 0 ? -v : v; }

inline wide wide_gcd(wide a, wide b) {
  a = wide_abs(a);
  b = wide_abs(b);
  while (b != 0) {
    wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::int64_t narrow(wide v) {
  if (v > INT64_MAX || v < INT64_MIN) throw Error(ErrorCode::overflow, "rational component exceeds 64 bits");
  return static_cast<std::int64_t>(v);
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::overflow, "integer product exceeds 64 bits");
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::overflow, "integer sum exceeds 64 bits");
  return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return narrow(wide_gcd(a, b)); }

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(a / gcd64(a, b), b < 0 ? -b : b);
}

}  // namespace detail

class Rational {
 public:
  constexpr Rational() = default;
  constexpr Rational(std::int64_t value) : num_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den) { assign(num, den); }

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  bool is_zero() const noexcept { return num_ == 0; }
  bool is_integer() const noexcept { return den_ == 1; }
  bool is_negative() const noexcept { return num_ < 0; }

  /// Parses "p/q", "p", or a signed form of either.
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    auto parse_int = [&](std::string_view part) {
      part = trim(part);
      if (!part.empty() && part.front() == '+') part.remove_prefix(1);
      std::int64_t value = 0;
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), value);
      if (part.empty() || ec != std::errc() || ptr != part.data() + part.size()) {
        throw Error(ErrorCode::invalid_argument, "malformed rational '" + std::string(text) + "'");
      }
      return value;
    };
    auto slash = text.find('/');
    if (slash == std::string_view::npos) return Rational(parse_int(text));
    std::int64_t den = parse_int(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator in '" + std::string(text) + "'");
    return Rational(parse_int(text.substr(0, slash)), den);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const {
    Rational r;
    r.num_ = detail::narrow(-static_cast<detail::wide>(num_));
    r.den_ = den_;
    return r;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(static_cast<detail::wide>(a.num_) + b.num_, a.den_);
    return from_wide(static_cast<detail::wide>(a.num_) * b.den_ + static_cast<detail::wide>(b.num_) * a.den_,
                     static_cast<detail::wide>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    if (a.den_ == b.den_) return from_wide(static_cast<detail::wide>(a.num_) - b.num_, a.den_);
    return from_wide(static_cast<detail::wide>(a.num_) * b.den_ - static_cast<detail::wide>(b.num_) * a.den_,
                     static_cast<detail::wide>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_wide(static_cast<detail::wide>(a.num_) * b.num_, static_cast<detail::wide>(a.den_) * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorCode::invalid_argument, "division by zero rational");
    return from_wide(static_cast<detail::wide>(a.num_) * b.den_, static_cast<detail::wide>(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) noexcept {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    detail::wide lhs = static_cast<detail::wide>(a.num_) * b.den_;
    detail::wide rhs = static_cast<detail::wide>(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  void assign(std::int64_t num, std::int64_t den) {
    if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator");
    *this = from_wide(num, den);
  }

  static Rational from_wide(detail::wide num, detail::wide den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    Rational r;
    if (num == 0) return r;
    detail::wide g = detail::wide_gcd(num, den);
    r.num_ = detail::narrow(num / g);
    r.den_ = detail::narrow(den / g);
    return r;
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

/// H_n = 1 + 1/2 + ... + 1/n, with H_0 = 0.
inline Rational harmonic(std::size_t n) {
  Rational h;
  for (std::size_t t = 1; t <= n; ++t) h += Rational(1, static_cast<std::int64_t>(t));
  return h;
}

/// lcm(1, ..., n); every fair share c_e / n_e with n_e <= n is an integer multiple of 1/lcm.
inline std::int64_t lcm_upto(std::size_t n) {
  std::int64_t l = 1;
  for (std::size_t t = 2; t <= n; ++t) l = detail::lcm64(l, static_cast<std::int64_t>(t));
  return l;
}

}  // namespace bndg
