#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace cmvsub {

/// Dense 2x2 complex matrix over the real scalar type T.
template <class T>
struct Mat2 {
  using value_type = std::complex<T>;
  value_type m00{}, m01{}, m10{}, m11{};

  static Mat2 identity() { return {value_type(1), value_type(0), value_type(0), value_type(1)}; }

  value_type trace() const { return m00 + m11; }
  value_type det() const { return m00 * m11 - m01 * m10; }

  Mat2 inverse() const {
    value_type d = det();
    return {m11 / d, -m01 / d, -m10 / d, m00 / d};
  }

  Mat2 adjoint() const { return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)}; }

  template <class U>
  Mat2<U> cast() const {
    auto c = [](const value_type& v) { return std::complex<U>(static_cast<U>(v.real()), static_cast<U>(v.imag())); };
    return {c(m00), c(m01), c(m10), c(m11)};
  }

  // a b + c d in plain real arithmetic; same value as std::complex for
  // finite inputs, without the library call that checks for inf and NaN.
  static value_type dot2(const value_type& a, const value_type& b, const value_type& c, const value_type& d) {
    return {a.real() * b.real() - a.imag() * b.imag() + (c.real() * d.real() - c.imag() * d.imag()),
            a.real() * b.imag() + a.imag() * b.real() + (c.real() * d.imag() + c.imag() * d.real())};
  }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return {dot2(x.m00, y.m00, x.m01, y.m10), dot2(x.m00, y.m01, x.m01, y.m11), dot2(x.m10, y.m00, x.m11, y.m10),
            dot2(x.m10, y.m01, x.m11, y.m11)};
  }
  friend Mat2 operator+(const Mat2& x, const Mat2& y) {
    return {x.m00 + y.m00, x.m01 + y.m01, x.m10 + y.m10, x.m11 + y.m11};
  }
  friend Mat2 operator-(const Mat2& x, const Mat2& y) {
    return {x.m00 - y.m00, x.m01 - y.m01, x.m10 - y.m10, x.m11 - y.m11};
  }
  friend Mat2 operator*(const value_type& s, const Mat2& x) { return {s * x.m00, s * x.m01, s * x.m10, s * x.m11}; }

  std::array<value_type, 2> apply(const std::array<value_type, 2>& v) const {
    return {m00 * v[0] + m01 * v[1], m10 * v[0] + m11 * v[1]};
  }

  // Frobenius norm.
  T norm() const {
    return std::sqrt(std::norm(m00) + std::norm(m01) + std::norm(m10) + std::norm(m11));
  }
  T max_abs() const {
    return std::max(std::max(std::abs(m00), std::abs(m01)), std::max(std::abs(m10), std::abs(m11)));
  }
};

template <class T>
T vector_norm(const std::array<std::complex<T>, 2>& v) {
  return std::sqrt(std::norm(v[0]) + std::norm(v[1]));
}

}  // namespace cmvsub
