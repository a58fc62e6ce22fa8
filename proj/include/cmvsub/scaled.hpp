#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace cmvsub {

/**
 * Real number m * 2^e with a long double mantissa |m| in [0.5, 1) (or m == 0)
 * and a 64-bit exponent. Escaping trace-map orbits grow doubly exponentially
 * and leave the long double range within a dozen levels; this keeps them
 * finite with long double relative precision.
 */
class ScaledReal {
 public:
  ScaledReal() = default;
  ScaledReal(long double v) { set(v, 0); }  // NOLINT(google-explicit-constructor)
  ScaledReal(long double mantissa, std::int64_t exponent) { set(mantissa, exponent); }

  long double mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }
  bool is_zero() const { return m_ == 0.0L; }
  int sign() const { return (m_ > 0) - (m_ < 0); }

  // log2 |x|; -inf for zero.
  long double log2_abs() const {
    if (m_ == 0) return -INFINITY;
    return std::log2(std::fabs(m_)) + static_cast<long double>(e_);
  }

  // Nearest long double; saturates to +-inf or 0 outside its range.
  long double to_long_double() const {
    if (m_ == 0) return 0.0L;
    if (e_ > 20000) return m_ > 0 ? INFINITY : -INFINITY;
    if (e_ < -20000) return 0.0L;
    return std::ldexp(m_, static_cast<int>(e_));
  }

  ScaledReal abs() const { return {std::fabs(m_), e_}; }
  ScaledReal operator-() const { return {-m_, e_}; }

  friend ScaledReal operator*(const ScaledReal& x, const ScaledReal& y) { return {x.m_ * y.m_, x.e_ + y.e_}; }

  friend ScaledReal operator+(const ScaledReal& x, const ScaledReal& y) {
    if (x.m_ == 0) return y;
    if (y.m_ == 0) return x;
    const ScaledReal& big = x.e_ >= y.e_ ? x : y;
    const ScaledReal& small = x.e_ >= y.e_ ? y : x;
    std::int64_t shift = big.e_ - small.e_;
    if (shift > 128) return big;
    return {big.m_ + std::ldexp(small.m_, -static_cast<int>(shift)), big.e_};
  }
  friend ScaledReal operator-(const ScaledReal& x, const ScaledReal& y) { return x + (-y); }

  friend bool operator<(const ScaledReal& x, const ScaledReal& y) { return (x - y).sign() < 0; }
  friend bool operator>(const ScaledReal& x, const ScaledReal& y) { return y < x; }
  friend bool operator<=(const ScaledReal& x, const ScaledReal& y) { return !(y < x); }
  friend bool operator>=(const ScaledReal& x, const ScaledReal& y) { return !(x < y); }

  std::string to_string() const {
    if (m_ == 0) return "0";
    long double l10 = log2_abs() * std::log10(2.0L);
    long double ip = std::floor(l10);
    long double mant = std::pow(10.0L, l10 - ip) * static_cast<long double>(sign());
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17Lge%+lld", mant, static_cast<long long>(ip));
    return buf;
  }

 private:
  long double m_ = 0.0L;
  std::int64_t e_ = 0;

  void set(long double m, std::int64_t e) {
    if (m == 0 || !std::isfinite(m)) {
      m_ = m;
      e_ = m == 0 ? 0 : e;
      return;
    }
    int k = 0;
    m_ = std::frexp(m, &k);
    e_ = e + k;
  }
};

/// |x - y| / max(1, |x|, |y|).
inline long double relative_difference(const ScaledReal& x, const ScaledReal& y) {
  ScaledReal diff = (x - y).abs();
  ScaledReal scale = x.abs() >= y.abs() ? x.abs() : y.abs();
  if (scale < ScaledReal(1.0L)) scale = ScaledReal(1.0L);
  if (diff.is_zero()) return 0.0L;
  return std::exp2(diff.log2_abs() - scale.log2_abs());
}

}  // namespace cmvsub
