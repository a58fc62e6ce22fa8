#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "cmvsub/error.hpp"

namespace cmvsub {

/**
 * Exact element of a real quadratic field, stored as (a + b*sqrt(d)) / c.
 *
 * c > 0 and gcd(a, b, c) == 1 after every operation. Rational values carry
 * b == 0 and d == 0, so they combine with any field. Mixing two different
 * radicands throws. Intermediate products use 128-bit integers; a result that
 * does not fit back into 64 bits raises ResourceLimit rather than wrapping.
 */
class QuadraticNumber {
 public:
  using int_type = std::int64_t;
  using wide_type = __int128;

  constexpr QuadraticNumber() = default;
  QuadraticNumber(int_type value)  // NOLINT(google-explicit-constructor)
      : a_(value) {}
  QuadraticNumber(int_type a, int_type b, int_type c, int_type d) {
    if (c == 0) throw InvalidArgument("quadratic number with zero denominator");
    if (b != 0) {
      if (d < 2) throw InvalidArgument("radicand must be >= 2");
      auto r = static_cast<int_type>(std::llround(std::sqrt(static_cast<long double>(d))));
      for (int_type s = std::max<int_type>(r - 1, 0); s <= r + 1; ++s)
        if (s * s == d) throw InvalidArgument("radicand is a perfect square");
    }
    assign(a, b, c, b == 0 ? 0 : d);
  }

  static QuadraticNumber rational(int_type num, int_type den) { return {num, 0, den, 0}; }

  int_type a() const { return a_; }
  int_type b() const { return b_; }
  int_type c() const { return c_; }
  int_type d() const { return d_; }
  bool is_rational() const { return b_ == 0; }

  long double to_long_double() const {
    long double root = d_ == 0 ? 0.0L : std::sqrt(static_cast<long double>(d_));
    long double la = static_cast<long double>(a_), lb = static_cast<long double>(b_);
    if ((a_ > 0 && b_ < 0) || (a_ < 0 && b_ > 0)) {
      // a + b r = (a^2 - b^2 d) / (a - b r), without cancellation.
      wide_type aa = wide_type(a_) * a_;
      wide_type bb;
      if (!__builtin_mul_overflow(wide_type(b_) * b_, wide_type(d_), &bb)) {
        auto norm = static_cast<long double>(aa - bb);
        return norm / (la - lb * root) / static_cast<long double>(c_);
      }
    }
    return (la + lb * root) / static_cast<long double>(c_);
  }
  double to_double() const { return static_cast<double>(to_long_double()); }

  // Sign of the value: -1, 0 or +1, decided without rounding.
  int sign() const {
    int sa = (a_ > 0) - (a_ < 0);
    int sb = (b_ > 0) - (b_ < 0);
    if (sb == 0) return sa;
    if (sa == 0 || sa == sb) return sb;
    // a and b*sqrt(d) have opposite signs: compare a^2 with b^2 d.
    wide_type aa = wide_type(a_) * a_;
    wide_type bb = checked_mul(wide_type(b_) * b_, d_);
    if (aa == bb) return 0;
    return aa > bb ? sa : sb;
  }

  QuadraticNumber operator-() const {
    QuadraticNumber r = *this;
    r.a_ = -r.a_;
    r.b_ = -r.b_;
    return r;
  }

  friend QuadraticNumber operator+(const QuadraticNumber& x, const QuadraticNumber& y) {
    int_type d = common_radicand(x, y);
    wide_type a = wide_type(x.a_) * y.c_ + wide_type(y.a_) * x.c_;
    wide_type b = wide_type(x.b_) * y.c_ + wide_type(y.b_) * x.c_;
    wide_type c = wide_type(x.c_) * y.c_;
    return make(a, b, c, d);
  }
  friend QuadraticNumber operator-(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x + (-y);
  }
  friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y) {
    int_type d = common_radicand(x, y);
    wide_type a = checked_add(wide_type(x.a_) * y.a_, checked_mul(wide_type(x.b_) * y.b_, d));
    wide_type b = checked_add(wide_type(x.a_) * y.b_, wide_type(x.b_) * y.a_);
    wide_type c = wide_type(x.c_) * y.c_;
    return make(a, b, c, d);
  }
  friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x * y.reciprocal();
  }

  QuadraticNumber& operator+=(const QuadraticNumber& o) { return *this = *this + o; }
  QuadraticNumber& operator-=(const QuadraticNumber& o) { return *this = *this - o; }
  QuadraticNumber& operator*=(const QuadraticNumber& o) { return *this = *this * o; }

  QuadraticNumber reciprocal() const {
    // 1 / ((a + b r)/c) = c (a - b r) / (a^2 - b^2 d)
    wide_type norm = checked_add(wide_type(a_) * a_, -checked_mul(wide_type(b_) * b_, d_));
    if (norm == 0) throw InvalidArgument("division by zero quadratic number");
    return make(wide_type(c_) * a_, -wide_type(c_) * b_, norm, d_);
  }

  // Largest integer <= value.
  int_type floor() const {
    long double approx = std::floor(to_long_double());
    if (!(std::fabs(approx) < 9.0e18L)) throw ResourceLimit("quadratic number out of floor range");
    auto k = static_cast<int_type>(approx);
    while ((*this - QuadraticNumber(k)).sign() < 0) --k;
    while ((*this - QuadraticNumber(k + 1)).sign() >= 0) ++k;
    return k;
  }

  // Representative of value mod 1 in [0, 1).
  QuadraticNumber frac() const { return *this - QuadraticNumber(floor()); }

  QuadraticNumber abs() const { return sign() < 0 ? -*this : *this; }

  friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && (x.b_ == 0 || x.d_ == y.d_);
  }
  friend std::strong_ordering operator<=>(const QuadraticNumber& x, const QuadraticNumber& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const {
    std::string s = "(" + std::to_string(a_);
    if (b_ != 0) s += (b_ > 0 ? "+" : "-") + std::to_string(b_ < 0 ? -b_ : b_) + "*sqrt(" + std::to_string(d_) + ")";
    return s + ")/" + std::to_string(c_);
  }
  friend std::ostream& operator<<(std::ostream& os, const QuadraticNumber& x) {
    return os << x.to_string();
  }

 private:
  int_type a_ = 0;
  int_type b_ = 0;
  int_type c_ = 1;
  int_type d_ = 0;

  static constexpr wide_type kLimit = wide_type(std::numeric_limits<int_type>::max());

  static wide_type checked_mul(wide_type x, wide_type y) {
    wide_type r;
    if (__builtin_mul_overflow(x, y, &r)) throw ResourceLimit("quadratic arithmetic overflow");
    return r;
  }
  static wide_type checked_add(wide_type x, wide_type y) {
    wide_type r;
    if (__builtin_add_overflow(x, y, &r)) throw ResourceLimit("quadratic arithmetic overflow");
    return r;
  }
  static wide_type wide_abs(wide_type x) { return x < 0 ? -x : x; }
  static wide_type wide_gcd(wide_type x, wide_type y) {
    x = wide_abs(x);
    y = wide_abs(y);
    while (y != 0) {
      wide_type t = x % y;
      x = y;
      y = t;
    }
    return x;
  }

  static int_type common_radicand(const QuadraticNumber& x, const QuadraticNumber& y) {
    if (x.b_ == 0) return y.d_;
    if (y.b_ == 0) return x.d_;
    if (x.d_ != y.d_) throw InvalidArgument("mixing quadratic numbers from different fields");
    return x.d_;
  }

  static QuadraticNumber make(wide_type a, wide_type b, wide_type c, int_type d) {
    if (c < 0) {
      a = -a;
      b = -b;
      c = -c;
    }
    wide_type g = wide_gcd(wide_gcd(a, b), c);
    if (g > 1) {
      a /= g;
      b /= g;
      c /= g;
    }
    if (wide_abs(a) > kLimit || wide_abs(b) > kLimit || c > kLimit)
      throw ResourceLimit("quadratic arithmetic overflow");
    QuadraticNumber r;
    r.assign(static_cast<int_type>(a), static_cast<int_type>(b), static_cast<int_type>(c),
             b == 0 ? 0 : d);
    return r;
  }

  void assign(int_type a, int_type b, int_type c, int_type d) {
    if (c < 0) {
      a = -a;
      b = -b;
      c = -c;
    }
    int_type g = std::gcd(std::gcd(a, b), c);
    if (g > 1) {
      a /= g;
      b /= g;
      c /= g;
    }
    a_ = a;
    b_ = b;
    c_ = c;
    d_ = d;
  }
};

}  // namespace cmvsub
