#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "cmvsub/error.hpp"
#include "cmvsub/matrix.hpp"
#include "cmvsub/window.hpp"
#include "cmvsub/words.hpp"

namespace cmvsub {

using Complex = std::complex<double>;
using CoefficientWindow = IndexedWindow<Complex>;

/// Point z = e^{i angle} of the unit circle. Stored by angle so that |z| = 1
/// holds by construction.
template <class T = double>
class UnitPoint {
 public:
  UnitPoint() : angle_(0), value_(1) {}
  explicit UnitPoint(T angle) : angle_(angle), value_(std::cos(angle), std::sin(angle)) {}

  static UnitPoint from_complex(std::complex<T> z) { return UnitPoint(std::arg(z)); }

  T angle() const { return angle_; }
  const std::complex<T>& value() const { return value_; }
  std::complex<T> inverse() const { return std::conj(value_); }

  template <class U>
  UnitPoint<U> cast() const {
    return UnitPoint<U>(static_cast<U>(angle_));
  }

 private:
  T angle_;
  std::complex<T> value_;
};

/// Images f(a), f(b) of the two letters in the open unit disk.
class VerblunskyMap {
 public:
  VerblunskyMap(Complex fa, Complex fb) : fa_(fa), fb_(fb) {
    if (!(std::abs(fa) < 1.0) || !(std::abs(fb) < 1.0))
      throw InvalidArgument("Verblunsky coefficients must lie in the open unit disk");
  }

  Complex alpha(Letter c) const { return c == Letter::a ? fa_ : fb_; }
  double rho(Letter c) const { return std::sqrt(1.0 - std::norm(alpha(c))); }
  Complex fa() const { return fa_; }
  Complex fb() const { return fb_; }
  bool is_constant() const { return fa_ == fb_; }

  void require_nonconstant() const {
    if (is_constant()) throw InvalidArgument("f must be nonconstant on {a, b}");
  }

 private:
  Complex fa_;
  Complex fb_;
};

namespace detail {
template <class T>
std::complex<T> widen(const Complex& c) {
  return {static_cast<T>(c.real()), static_cast<T>(c.imag())};
}

template <class T>
T rho_of(const std::complex<T>& alpha) {
  T r2 = T(1) - std::norm(alpha);
  if (!(r2 > T(0))) throw InvalidArgument("Verblunsky coefficient outside the open unit disk");
  return std::sqrt(r2);
}
}  // namespace detail

/**
 * One Gesztesy-Zinchenko step T_n(z). The form depends on the parity of the
 * coefficient index n:
 *
 *   n odd:  (1/rho) [[-conj(alpha), z], [1/z, -alpha]]
 *   n even: (1/rho) [[-alpha, 1], [1, -conj(alpha)]]
 *
 * Every step has determinant -1.
 */
template <class T = double>
Mat2<T> gz_step(const std::complex<T>& alpha, const UnitPoint<T>& z, long index) {
  T inv_rho = T(1) / detail::rho_of(alpha);
  using C = std::complex<T>;
  if (index % 2 != 0) {
    return {-std::conj(alpha) * inv_rho, z.value() * inv_rho, z.inverse() * inv_rho, -alpha * inv_rho};
  }
  return {-alpha * inv_rho, C(inv_rho), C(inv_rho), -std::conj(alpha) * inv_rho};
}

/// d/d(omega) of gz_step at z = e^{i omega}; zero for even n.
template <class T = double>
Mat2<T> gz_step_derivative(const std::complex<T>& alpha, const UnitPoint<T>& z, long index) {
  using C = std::complex<T>;
  if (index % 2 == 0) return {C(0), C(0), C(0), C(0)};
  T inv_rho = T(1) / detail::rho_of(alpha);
  const C i(0, 1);
  return {C(0), i * z.value() * inv_rho, -i * z.inverse() * inv_rho, C(0)};
}

/// Szego transfer matrix (1/rho) [[z, -conj(alpha)], [-alpha z, 1]]; det = z.
template <class T = double>
Mat2<T> szego_step(const std::complex<T>& alpha, const UnitPoint<T>& z) {
  T inv_rho = T(1) / detail::rho_of(alpha);
  return {z.value() * inv_rho, -std::conj(alpha) * inv_rho, -alpha * z.value() * inv_rho,
          std::complex<T>(inv_rho)};
}

/// Ordered product T_last ... T_first together with its index bookkeeping.
template <class T = double>
struct TransferProduct {
  Mat2<T> matrix = Mat2<T>::identity();
  long first_index = 1;
  long factor_count = 0;

  // det of a product of GZ steps is (-1)^factor_count.
  int expected_det() const { return factor_count % 2 == 0 ? 1 : -1; }
  bool first_is_odd() const { return first_index % 2 != 0; }
};

template <class T = double>
TransferProduct<T> gz_product(const CoefficientWindow& alphas, const UnitPoint<T>& z, long first, long last) {
  TransferProduct<T> out;
  out.first_index = first;
  if (last < first) return out;
  if (!alphas.covers(first, last))
    throw InvalidArgument("coefficient window does not cover " + std::to_string(first) + ".." + std::to_string(last));
  for (long n = first; n <= last; ++n) out.matrix = gz_step<T>(detail::widen<T>(alphas(n)), z, n) * out.matrix;
  out.factor_count = last - first + 1;
  return out;
}

/**
 * M_n(z): T_n ... T_1 for n >= 1, the identity for n = 0, and
 * T_{n+1}^{-1} ... T_0^{-1} for n <= -1.
 */
template <class T = double>
Mat2<T> propagator(const CoefficientWindow& alphas, const UnitPoint<T>& z, long n) {
  if (n >= 1) return gz_product<T>(alphas, z, 1, n).matrix;
  if (n == 0) return Mat2<T>::identity();
  return gz_product<T>(alphas, z, n + 1, 0).matrix.inverse();
}

/// T_{|w|} ... T_1 with alpha(k) = f(w_k) and step parity taken from k.
template <class T = double>
Mat2<T> word_product(const Word& w, const VerblunskyMap& f, const UnitPoint<T>& z) {
  const std::complex<T> fa = detail::widen<T>(f.fa());
  const std::complex<T> fb = detail::widen<T>(f.fb());
  Mat2<T> m = Mat2<T>::identity();
  for (std::size_t k = 1; k <= w.size(); ++k)
    m = gz_step<T>(w[k - 1] == Letter::a ? fa : fb, z, static_cast<long>(k)) * m;
  return m;
}

/// Paired solution (u_n, v_n) over first()..last() at spectral parameter z.
template <class T = double>
struct SolutionPair {
  using C = std::complex<T>;
  long first = 0;
  std::vector<C> u;
  std::vector<C> v;
  UnitPoint<T> z;

  long last() const { return first + static_cast<long>(u.size()) - 1; }
  std::array<C, 2> at(long n) const {
    auto i = static_cast<std::size_t>(n - first);
    return {u.at(i), v.at(i)};
  }
  T norm(long n) const { return vector_norm<T>(at(n)); }
};

/// Fills (u_n, v_n) on lo..hi from the seed (u_0, v_0) using
/// (u_n, v_n) = T_n (u_{n-1}, v_{n-1}) forward and its inverse backward.
template <class T = double>
SolutionPair<T> propagate(const std::array<std::complex<T>, 2>& seed, const CoefficientWindow& alphas,
                          const UnitPoint<T>& z, long lo, long hi) {
  if (lo > 0 || hi < 0) throw InvalidArgument("propagation window must contain index 0");
  if (seed[0] == std::complex<T>(0) && seed[1] == std::complex<T>(0))
    throw InvalidArgument("seed (u_0, v_0) must be nonzero");
  if ((hi > 0 && !alphas.covers(1, hi)) || (lo < 0 && !alphas.covers(lo + 1, 0)))
    throw InvalidArgument("coefficient window does not cover the propagation range");

  SolutionPair<T> s;
  s.first = lo;
  s.z = z;
  const auto len = static_cast<std::size_t>(hi - lo + 1);
  s.u.resize(len);
  s.v.resize(len);
  auto put = [&](long n, const std::array<std::complex<T>, 2>& psi) {
    s.u[static_cast<std::size_t>(n - lo)] = psi[0];
    s.v[static_cast<std::size_t>(n - lo)] = psi[1];
  };
  put(0, seed);
  std::array<std::complex<T>, 2> psi = seed;
  for (long n = 1; n <= hi; ++n) {
    psi = gz_step<T>(detail::widen<T>(alphas(n)), z, n).apply(psi);
    put(n, psi);
  }
  psi = seed;
  for (long n = 0; n > lo; --n) {
    psi = gz_step<T>(detail::widen<T>(alphas(n)), z, n).inverse().apply(psi);
    put(n - 1, psi);
  }
  return s;
}

enum class GordonVariant { two_block, three_block };

struct GordonInequalityReport {
  GordonVariant variant = GordonVariant::two_block;
  long n = 0;
  Complex trace;
  // two-block: |psi_n|, |psi_2n|; three-block: |psi_n|, |psi_-n|.
  double norm_n = 0;
  double norm_other = 0;
  double max_norm = 0;
  double bound = 0;
  bool holds = false;
};

/// Bound of the two-block inequality: (1/2) min(1, 1/|tr|), equal to 1/2
/// whenever |tr| <= 1 (tr = 0 included).
inline double two_block_bound(double abs_trace) {
  return 0.5 * (abs_trace <= 1.0 ? 1.0 : 1.0 / abs_trace);
}

/// Bound of the three-block inequality: psi_n + psi_{-n} = tr psi_0 gives
/// max(|psi_n|, |psi_-n|) >= |tr|/2, i.e. 1/2 once |tr| >= 1.
inline double three_block_bound(double abs_trace) { return 0.5 * std::min(1.0, abs_trace); }

/**
 * Checks the non-decay inequality behind the Gordon argument at an even
 * scale n. The seed is normalized to unit length. Throws InvalidArgument
 * when the repetition condition fails on the supplied window.
 */
inline GordonInequalityReport gordon_inequality_check(const CoefficientWindow& alphas, const UnitPoint<double>& z,
                                                      long n, GordonVariant variant,
                                                      std::array<Complex, 2> seed = {Complex(1), Complex(0)}) {
  double seed_norm = vector_norm<double>(seed);
  if (!(seed_norm > 0)) throw InvalidArgument("seed (u_0, v_0) must be nonzero");
  seed = {seed[0] / seed_norm, seed[1] / seed_norm};

  GordonInequalityReport r;
  r.variant = variant;
  r.n = n;
  if (variant == GordonVariant::two_block) {
    if (!check_two_block(alphas, n)) throw InvalidArgument("two-block condition fails at n = " + std::to_string(n));
    auto s = propagate<double>(seed, alphas, z, 0, 2 * n);
    r.trace = propagator<double>(alphas, z, n).trace();
    r.norm_n = s.norm(n);
    r.norm_other = s.norm(2 * n);
    r.bound = two_block_bound(std::abs(r.trace));
  } else {
    if (!check_three_block(alphas, n)) throw InvalidArgument("three-block condition fails at n = " + std::to_string(n));
    auto s = propagate<double>(seed, alphas, z, -n, n);
    r.trace = propagator<double>(alphas, z, n).trace();
    r.norm_n = s.norm(n);
    r.norm_other = s.norm(-n);
    r.bound = three_block_bound(std::abs(r.trace));
  }
  r.max_norm = std::max(r.norm_n, r.norm_other);
  r.holds = r.max_norm >= r.bound * (1.0 - 1e-12);
  return r;
}

}  // namespace cmvsub
