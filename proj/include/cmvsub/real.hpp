#pragma once

#include <cmath>
#include <compare>
#include <optional>
#include <string>

#include "cmvsub/quadratic.hpp"

namespace cmvsub {

// A real number that is exact (QuadraticNumber) when every input was exact,
// and an 80-bit long double otherwise. Arithmetic degrades to the
// approximate representation as soon as one operand is approximate.
class Real {
 public:
  Real() : exact_(QuadraticNumber(0)), approx_(0.0L) {}
  Real(const QuadraticNumber& q)  // NOLINT(google-explicit-constructor)
      : exact_(q), approx_(q.to_long_double()) {}
  Real(QuadraticNumber::int_type n)  // NOLINT(google-explicit-constructor)
      : Real(QuadraticNumber(n)) {}
  Real(int n) : Real(QuadraticNumber(n)) {}  // NOLINT(google-explicit-constructor)

  static Real approximate(long double v) {
    Real r;
    r.exact_.reset();
    r.approx_ = v;
    return r;
  }

  bool is_exact() const { return exact_.has_value(); }
  const std::optional<QuadraticNumber>& exact() const { return exact_; }
  long double value() const { return approx_; }
  double to_double() const { return static_cast<double>(approx_); }

  friend Real operator+(const Real& x, const Real& y) {
    if (x.exact_ && y.exact_) return Real(*x.exact_ + *y.exact_);
    return approximate(x.approx_ + y.approx_);
  }
  friend Real operator-(const Real& x, const Real& y) {
    if (x.exact_ && y.exact_) return Real(*x.exact_ - *y.exact_);
    return approximate(x.approx_ - y.approx_);
  }
  friend Real operator*(const Real& x, const Real& y) {
    if (x.exact_ && y.exact_) return Real(*x.exact_ * *y.exact_);
    return approximate(x.approx_ * y.approx_);
  }
  Real operator-() const { return exact_ ? Real(-*exact_) : approximate(-approx_); }
  Real& operator+=(const Real& o) { return *this = *this + o; }
  Real& operator-=(const Real& o) { return *this = *this - o; }

  int sign() const {
    if (exact_) return exact_->sign();
    return (approx_ > 0) - (approx_ < 0);
  }
  Real abs() const { return sign() < 0 ? -*this : *this; }

  // Representative modulo 1 in [0, 1).
  Real frac() const {
    if (exact_) return Real(exact_->frac());
    long double f = approx_ - std::floor(approx_);
    if (f >= 1.0L) f = 0.0L;
    return approximate(f);
  }

  friend bool operator==(const Real& x, const Real& y) { return (x - y).sign() == 0; }
  friend std::strong_ordering operator<=>(const Real& x, const Real& y) {
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less
                 : (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  std::string to_string() const {
    return exact_ ? exact_->to_string() : std::to_string(static_cast<double>(approx_));
  }

 private:
  std::optional<QuadraticNumber> exact_;
  long double approx_;
};

}  // namespace cmvsub
