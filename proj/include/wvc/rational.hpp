#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "wvc/error.hpp"

namespace wvc {

using int128 = __int128;

// Exact rational with a 128-bit normalized representation.
// Magnitudes in this project stay tiny relative to 2^127: file weights have
// denominator <= 1e9, measure constants are 39/250, 7/40 and quarters, and
// values only ever combine through +, -, scalar * and comparisons.
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(long long n) : num_(n), den_(1) {}
  constexpr Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  static Rational from_int128(int128 n, int128 d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }

  // Parses "123", "-4.5", "0.000000001". Fractional part capped at 18 digits.
  static Rational from_decimal(std::string_view s) {
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = s[i++] == '-';
    require(i < s.size(), errc::parse_error, "empty number");
    int128 num = 0;
    int128 den = 1;
    bool any_digit = false;
    for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
      num = num * 10 + (s[i] - '0');
      any_digit = true;
    }
    if (i < s.size() && s[i] == '.') {
      ++i;
      int frac_digits = 0;
      for (; i < s.size() && s[i] >= '0' && s[i] <= '9'; ++i) {
        require(++frac_digits <= 18, errc::parse_error, "too many fraction digits");
        num = num * 10 + (s[i] - '0');
        den *= 10;
        any_digit = true;
      }
    }
    require(any_digit && i == s.size(), errc::parse_error,
            "bad decimal literal: " + std::string(s));
    return from_int128(neg ? -num : num, den);
  }

  int128 num() const { return num_; }
  int128 den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  int sign() const { return num_ < 0 ? -1 : num_ > 0 ? 1 : 0; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_int128(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_int128(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_int128(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    require(b.num_ != 0, errc::parse_error, "division by zero");
    return from_int128(a.num_ * b.den_, a.den_ * b.num_);
  }
  Rational operator-() const { return from_int128(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
  friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
  friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  // Exact decimal string when the denominator is 2^a*5^b (always the case for
  // file weights and measure values); "p/q" otherwise.
  std::string to_decimal() const {
    int128 d = den_;
    int twos = 0, fives = 0;
    while (d % 2 == 0) { d /= 2; ++twos; }
    while (d % 5 == 0) { d /= 5; ++fives; }
    if (d != 1) return int128_str(num_) + "/" + int128_str(den_);
    int k = twos > fives ? twos : fives;
    int128 scaled = num_;
    for (int i = fives; i < twos; ++i) scaled *= 5;
    for (int i = twos; i < fives; ++i) scaled *= 2;
    bool neg = scaled < 0;
    std::string digits = int128_str(neg ? -scaled : scaled);
    if (k == 0) return (neg ? "-" : "") + digits;
    while (static_cast<int>(digits.size()) <= k) digits.insert(digits.begin(), '0');
    digits.insert(digits.end() - k, '.');
    while (digits.back() == '0') digits.pop_back();
    if (digits.back() == '.') digits.pop_back();
    return (neg ? "-" : "") + digits;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.to_decimal();
  }

  static std::string int128_str(int128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    unsigned __int128 u = neg ? -static_cast<unsigned __int128>(v) : v;
    std::string s;
    while (u) {
      s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
      u /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
  }

 private:
  constexpr void normalize() {
    if (den_ == 0) throw std::logic_error("rational with zero denominator");
    if (den_ < 0) { num_ = -num_; den_ = -den_; }
    int128 g = gcd128(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) { num_ /= g; den_ /= g; }
    if (num_ == 0) den_ = 1;
  }

  static constexpr int128 gcd128(int128 a, int128 b) {
    while (b != 0) {
      int128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  int128 num_;
  int128 den_;
};

}  // namespace wvc
