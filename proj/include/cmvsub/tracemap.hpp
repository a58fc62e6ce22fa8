#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "cmvsub/error.hpp"
#include "cmvsub/matrix.hpp"
#include "cmvsub/scaled.hpp"
#include "cmvsub/transfer.hpp"
#include "cmvsub/words.hpp"

namespace cmvsub {

/// B = 2 (Re(-f(a) conj f(b)) + 1) / (rho(a) rho(b)); always >= 2.
template <class T = double>
T compute_B(const VerblunskyMap& f) {
  const auto fa = detail::widen<T>(f.fa());
  const auto fb = detail::widen<T>(f.fb());
  T num = T(2) * (std::real(-fa * std::conj(fb)) + T(1));
  return num / (detail::rho_of<T>(fa) * detail::rho_of<T>(fb));
}

inline constexpr int kDefaultBlockLevelCap = 40;

/// Block products (M_(a),n, M_(b),n) over S^n(a) and S^n(b) for the period
/// doubling substitution, via M_(a),n+1 = M_(b),n M_(a),n and
/// M_(b),n+1 = M_(a),n^2.
template <class T = double>
std::pair<Mat2<T>, Mat2<T>> block_matrices(int level, const UnitPoint<T>& z, const VerblunskyMap& f,
                                           int level_cap = kDefaultBlockLevelCap) {
  if (level < 1) throw InvalidArgument("block level must be >= 1");
  if (level > level_cap) throw ResourceLimit("block level " + std::to_string(level) + " exceeds cap");
  const auto fa = detail::widen<T>(f.fa());
  const auto fb = detail::widen<T>(f.fb());
  // S(a) = ab, S(b) = aa
  Mat2<T> ma = gz_step<T>(fb, z, 2) * gz_step<T>(fa, z, 1);
  Mat2<T> mb = gz_step<T>(fa, z, 2) * gz_step<T>(fa, z, 1);
  for (int n = 1; n < level; ++n) {
    Mat2<T> next_a = mb * ma;
    mb = ma * ma;
    ma = next_a;
  }
  return {ma, mb};
}

template <class T = double>
Mat2<T> block_matrix(Letter letter, int level, const UnitPoint<T>& z, const VerblunskyMap& f,
                     int level_cap = kDefaultBlockLevelCap) {
  auto [ma, mb] = block_matrices<T>(level, z, f, level_cap);
  return letter == Letter::a ? ma : mb;
}

/// Same matrix as block_matrix, multiplied out step by step over the word.
template <class T = double>
Mat2<T> direct_block_matrix(Letter letter, int level, const UnitPoint<T>& z, const VerblunskyMap& f) {
  return word_product<T>(iterate_letter(SubstitutionRule::period_doubling(), letter, level), f, z);
}

/// x_n = Tr M_(a),n and y_n = Tr M_(b),n for levels 1..N (stored from index 0).
struct TraceOrbit {
  double B = 2.0;
  std::vector<double> x;
  std::vector<double> y;
  std::optional<UnitPoint<double>> z;
  // Largest |Im| / max(1, |.|) seen on the directly computed seed traces.
  double imag_residual = 0.0;

  int levels() const { return static_cast<int>(x.size()); }
  double x_at(int level) const { return x.at(static_cast<std::size_t>(level - 1)); }
  double y_at(int level) const { return y.at(static_cast<std::size_t>(level - 1)); }
};

/// Iterates x_{n+1} = x_n y_n - B, y_{n+1} = x_n^2 - 2 from the level-1 seed.
/// T may be double, long double or ScaledReal.
template <class T>
std::pair<std::vector<T>, std::vector<T>> trace_recursion(T x1, T y1, T B, int levels) {
  if (levels < 1) throw InvalidArgument("orbit needs at least one level");
  std::vector<T> xs{x1}, ys{y1};
  xs.reserve(levels);
  ys.reserve(levels);
  const T two(2);
  for (int n = 1; n < levels; ++n) {
    T x = xs.back(), y = ys.back();
    xs.push_back(x * y - B);
    ys.push_back(x * x - two);
  }
  return {std::move(xs), std::move(ys)};
}

inline TraceOrbit trace_orbit_from(double x1, double y1, double B, int levels) {
  TraceOrbit o;
  o.B = B;
  std::tie(o.x, o.y) = trace_recursion<double>(x1, y1, B, levels);
  return o;
}

inline constexpr double kRealityTolerance = 1e-9;

/// Scaled imaginary part |Im w| / max(1, |w|).
template <class T>
T scaled_imag(const std::complex<T>& w) {
  return std::abs(w.imag()) / std::max(T(1), std::abs(w));
}

/// Orbit seeded from the directly computed level-1 traces at z. Throws
/// NumericAssertion if the seed traces are not real within tolerance.
inline TraceOrbit trace_orbit(const UnitPoint<double>& z, const VerblunskyMap& f, int levels,
                              double reality_tol = kRealityTolerance) {
  auto [ma, mb] = block_matrices<long double>(1, z.cast<long double>(), f);
  std::complex<long double> x1 = ma.trace(), y1 = mb.trace();
  double residual = static_cast<double>(std::max(scaled_imag(x1), scaled_imag(y1)));
  if (residual > reality_tol)
    throw NumericAssertion("seed traces are not real: residual " + std::to_string(residual));
  TraceOrbit o = trace_orbit_from(static_cast<double>(x1.real()), static_cast<double>(y1.real()), compute_B(f), levels);
  o.z = z;
  o.imag_residual = residual;
  return o;
}

/// Orbit in ScaledReal arithmetic, seeded from long double level-1 traces.
/// Finite at every level, including escaping orbits.
struct ScaledTraceOrbit {
  ScaledReal B;
  std::vector<ScaledReal> x;
  std::vector<ScaledReal> y;
  double imag_residual = 0.0;
};

inline ScaledTraceOrbit scaled_trace_orbit(const UnitPoint<long double>& z, const VerblunskyMap& f, int levels,
                                           double reality_tol = kRealityTolerance) {
  auto [ma, mb] = block_matrices<long double>(1, z, f);
  std::complex<long double> x1 = ma.trace(), y1 = mb.trace();
  double residual = static_cast<double>(std::max(scaled_imag(x1), scaled_imag(y1)));
  if (residual > reality_tol)
    throw NumericAssertion("seed traces are not real: residual " + std::to_string(residual));
  ScaledTraceOrbit o;
  o.B = ScaledReal(compute_B<long double>(f));
  std::tie(o.x, o.y) = trace_recursion<ScaledReal>(x1.real(), y1.real(), o.B, levels);
  o.imag_residual = residual;
  return o;
}

struct StabilityVerdict {
  enum class Kind { unstable, not_decided };
  Kind kind = Kind::not_decided;
  // Level at which the orbit entered D_+ or D_-.
  std::optional<int> first_escape_level;
  // +1 for D_+ = {x > B, y > 2}, -1 for D_- = {-x > B, y > 2}, 0 otherwise.
  int region_sign = 0;
  int levels_checked = 0;

  bool unstable() const { return kind == Kind::unstable; }
};

/// Region test for D_+ and D_-. Both are forward invariant, so membership at
/// one level certifies |x_m| > B >= 2 at every later level.
inline int escape_region(double x, double y, double B) {
  if (!(y > 2.0)) return 0;
  if (x > B) return 1;
  if (-x > B) return -1;
  return 0;
}

/// Certifies instability only through entry into D_+ or D_-; anything else
/// is reported as not decided after `cap` levels.
inline StabilityVerdict classify(double x1, double y1, double B, int cap) {
  if (B < 2.0) throw InvalidArgument("B must be >= 2");
  StabilityVerdict v;
  double x = x1, y = y1;
  for (int level = 1; level <= cap; ++level) {
    v.levels_checked = level;
    if (int s = escape_region(x, y, B); s != 0) {
      v.kind = StabilityVerdict::Kind::unstable;
      v.first_escape_level = level;
      v.region_sign = s;
      return v;
    }
    double nx = x * y - B;
    y = x * x - 2.0;
    x = nx;
  }
  return v;
}

inline constexpr double kTraceBoundTolerance = 1e-6;

/// First level n < levels with min(|x_n|, |x_{n+1}|) > B + tol, if any.
inline std::optional<int> trace_bound_violation(const TraceOrbit& orbit, double tol = kTraceBoundTolerance) {
  for (int n = 1; n < orbit.levels(); ++n) {
    double m = std::min(std::abs(orbit.x_at(n)), std::abs(orbit.x_at(n + 1)));
    if (!(m <= orbit.B + tol)) return n;
  }
  return std::nullopt;
}

/// True iff min(|x_n|, |x_{n+1}|) <= B + tol for every 1 <= n < levels.
inline bool trace_bound_check(const UnitPoint<double>& z, const VerblunskyMap& f, int levels,
                              double tol = kTraceBoundTolerance) {
  if (levels < 2) throw InvalidArgument("trace bound check needs at least two levels");
  return !trace_bound_violation(trace_orbit(z, f, levels), tol).has_value();
}

}  // namespace cmvsub
