#pragma once

#include <cstdint>
#include <iosfwd>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace owasched {

// Exact rational arithmetic on int64 with 128-bit intermediates.
//
// Solver logic compares schedule costs for equality (ties, thresholds), so
// everything outside the LP module runs on this type. Overflow throws
// instead of silently wrapping; desk-scale instances never get close.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t value) : num_(value), den_(1) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational: zero denominator");
    assign(static_cast<__int128>(num), static_cast<__int128>(den));
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    return r;
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(i128(a.num_) * b.den_ - i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    return r;
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    Rational r;
    r.assign(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    return r;
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational: division by zero");
    Rational r;
    r.assign(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    return r;
  }
  Rational operator-() const {
    Rational r;
    r.assign(-i128(num_), i128(den_));
    return r;
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  // Accepts "7", "-3/4", "2.25". Decimal strings parse exactly.
  static Rational parse(std::string_view text);

  std::string str() const {
    std::string s = std::to_string(num_);
    if (den_ != 1) s += "/" + std::to_string(den_);
    return s;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  using i128 = __int128;
  using u128 = unsigned __int128;

  static u128 umag(i128 v) { return v < 0 ? u128(-v) : u128(v); }

  static u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
      u128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(i128 num, i128 den) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    if (num == 0) {
      num_ = 0;
      den_ = 1;
      return;
    }
    constexpr i128 lo = static_cast<i128>(INT64_MIN);
    constexpr i128 hi = static_cast<i128>(INT64_MAX);
    if (den == 1) {  // integer fast path, skips the gcd
      if (num < lo || num > hi) throw std::overflow_error("rational: value exceeds 64-bit range");
      num_ = static_cast<std::int64_t>(num);
      den_ = 1;
      return;
    }
    u128 g = gcd128(umag(num), u128(den));
    num /= i128(g);
    den /= i128(g);
    if (num < lo || num > hi || den > hi)
      throw std::overflow_error("rational: value exceeds 64-bit range");
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }

inline Rational Rational::parse(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("rational: cannot parse '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  bool neg = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    neg = text[pos] == '-';
    ++pos;
  }
  auto digits = [&](i128& out) {
    if (pos >= text.size() || text[pos] < '0' || text[pos] > '9') fail();
    out = 0;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      out = out * 10 + (text[pos] - '0');
      if (out > i128(INT64_MAX) * 1000000) throw std::overflow_error("rational: literal too large");
      ++pos;
    }
  };
  i128 whole = 0;
  digits(whole);
  i128 num = whole;
  i128 den = 1;
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    digits(den);
    if (den == 0) fail();
  } else if (pos < text.size() && text[pos] == '.') {
    ++pos;
    i128 frac = 0;
    std::size_t start = pos;
    digits(frac);
    if (pos - start > 18) throw std::overflow_error("rational: too many fraction digits");
    for (std::size_t i = start; i < pos; ++i) den *= 10;
    num = whole * den + frac;
  }
  if (pos != text.size()) fail();
  Rational r;
  r.assign(neg ? -num : num, den);
  return r;
}

}  // namespace owasched
