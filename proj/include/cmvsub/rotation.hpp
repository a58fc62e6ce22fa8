#pragma once

#include <cerrno>
#include <cfloat>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cmvsub/error.hpp"
#include "cmvsub/real.hpp"
#include "cmvsub/window.hpp"
#include "cmvsub/words.hpp"

namespace cmvsub {

/**
 * Rotation number theta in (0, 1).
 *
 * Either an exact quadratic irrational (golden mean, sqrt(2) - 1, or any
 * (a + b sqrt d)/c) or a decimal read into an 80-bit long double. The decimal
 * form has no exact endpoints, so downstream arc constructions fall back to
 * floating comparisons with a safety margin.
 */
class RotationNumber {
 public:
  explicit RotationNumber(Real value, std::string label = {}) : value_(std::move(value)), label_(std::move(label)) {
    if (value_.sign() <= 0 || (value_ - Real(1)).sign() >= 0)
      throw InvalidArgument("rotation number must lie in (0, 1)");
    if (value_.is_exact() && value_.exact()->is_rational())
      throw RationalThetaError("rotation number must be irrational");
  }

  static RotationNumber golden_mean() { return RotationNumber(Real(QuadraticNumber(-1, 1, 2, 5)), "golden"); }
  static RotationNumber silver() { return RotationNumber(Real(QuadraticNumber(-1, 1, 1, 2)), "sqrt2-1"); }
  static RotationNumber quadratic(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return RotationNumber(Real(QuadraticNumber(a, b, c, d)));
  }
  static RotationNumber decimal(std::string_view text) {
    std::string s(text);
    char* end = nullptr;
    errno = 0;
    long double v = std::strtold(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0' || errno != 0) throw InvalidArgument("cannot parse rotation number: " + s);
    return RotationNumber(Real::approximate(v), s);
  }

  // Accepts "golden", "sqrt2-1", "quadratic:a,b,c,d" for (a + b sqrt d)/c, or a decimal.
  static RotationNumber parse(std::string_view text) {
    if (text == "golden") return golden_mean();
    if (text == "sqrt2-1" || text == "silver") return silver();
    constexpr std::string_view prefix = "quadratic:";
    if (text.substr(0, prefix.size()) == prefix) {
      std::vector<std::int64_t> parts;
      std::string rest(text.substr(prefix.size()));
      std::size_t pos = 0;
      while (pos <= rest.size()) {
        std::size_t comma = rest.find(',', pos);
        std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        try {
          std::size_t used = 0;
          parts.push_back(std::stoll(item, &used));
          if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
          throw InvalidArgument("bad quadratic rotation number: " + std::string(text));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      if (parts.size() != 4) throw InvalidArgument("quadratic rotation number needs a,b,c,d");
      RotationNumber r = quadratic(parts[0], parts[1], parts[2], parts[3]);
      r.label_ = std::string(text);
      return r;
    }
    return decimal(text);
  }

  const Real& value() const { return value_; }
  bool is_exact() const { return value_.is_exact(); }
  bool is_golden_mean() const {
    return value_.is_exact() && *value_.exact() == QuadraticNumber(-1, 1, 2, 5);
  }
  const std::string& label() const { return label_; }

 private:
  Real value_;
  std::string label_;
};

/// Partial quotients and convergents, indexed so that q_0 = 0, q_1 = 1,
/// q_{n+1} = a_n q_n + q_{n-1}, and likewise p_0 = 1, p_1 = a_0.
struct ContinuedFraction {
  std::vector<std::int64_t> a;
  std::vector<std::int64_t> p;
  std::vector<std::int64_t> q;

  std::size_t depth() const { return a.size(); }
};

namespace detail {
inline std::int64_t checked_recurrence(std::int64_t a, std::int64_t x, std::int64_t y) {
  std::int64_t prod, sum;
  if (__builtin_mul_overflow(a, x, &prod) || __builtin_add_overflow(prod, y, &sum))
    throw ResourceLimit("continued fraction convergent overflows 64 bits");
  return sum;
}
}  // namespace detail

/// Expansion of theta to the given depth: a_0..a_{depth-1} and the matching
/// p_n, q_n for n < depth. Throws RationalThetaError if the expansion stops.
inline ContinuedFraction continued_fraction(const RotationNumber& theta, int depth) {
  if (depth < 1) throw InvalidArgument("continued fraction depth must be >= 1");
  ContinuedFraction cf;
  cf.a.reserve(depth);

  if (theta.is_exact()) {
    QuadraticNumber x = *theta.value().exact();
    for (int k = 0; k < depth; ++k) {
      std::int64_t ak = x.floor();
      cf.a.push_back(ak);
      QuadraticNumber rem = x - QuadraticNumber(ak);
      if (rem.sign() == 0)
        throw RationalThetaError("continued fraction terminates at index " + std::to_string(k));
      x = rem.reciprocal();
    }
  } else {
    long double x = theta.value().value();
    // Rounding error of the complete quotient x_k grows like q_k^2 * eps.
    long double q_prev = 0.0L, q_cur = 1.0L;
    for (int k = 0; k < depth; ++k) {
      long double err = 64.0L * LDBL_EPSILON * q_cur * q_cur * std::max(1.0L, x);
      if (err > 1e-3L)
        throw InvalidArgument("decimal rotation number lacks precision for depth " + std::to_string(depth));
      long double fl = std::floor(x);
      long double rem = x - fl;
      if (rem <= err || 1.0L - rem <= err) {
        throw RationalThetaError("continued fraction terminates (within precision) at index " +
                                 std::to_string(k));
      }
      auto ak = static_cast<std::int64_t>(fl);
      cf.a.push_back(ak);
      long double q_next = static_cast<long double>(ak) * q_cur + q_prev;
      q_prev = q_cur;
      q_cur = q_next;
      x = 1.0L / rem;
    }
  }

  cf.p.assign(depth, 0);
  cf.q.assign(depth, 0);
  cf.p[0] = 1;
  cf.q[0] = 0;
  if (depth > 1) {
    cf.p[1] = cf.a[0];
    cf.q[1] = 1;
  }
  for (int n = 1; n + 1 < depth; ++n) {
    cf.p[n + 1] = detail::checked_recurrence(cf.a[n], cf.p[n], cf.p[n - 1]);
    cf.q[n + 1] = detail::checked_recurrence(cf.a[n], cf.q[n], cf.q[n - 1]);
  }
  return cf;
}

/// Indices n >= min_index with q_n even. Only these scales feed the Gordon
/// argument, which needs an even number of transfer steps.
inline std::vector<int> even_q_indices(const ContinuedFraction& cf, int min_index = 1) {
  std::vector<int> out;
  for (std::size_t n = static_cast<std::size_t>(std::max(min_index, 0)); n < cf.q.size(); ++n)
    if (cf.q[n] % 2 == 0) out.push_back(static_cast<int>(n));
  return out;
}

/// |q_n theta - p_n|, exact when theta is exact.
inline Real convergent_distance(const RotationNumber& theta, const ContinuedFraction& cf, int n) {
  if (n < 0 || static_cast<std::size_t>(n) >= cf.q.size()) throw InvalidArgument("convergent index out of range");
  return (Real(cf.q[n]) * theta.value() - Real(cf.p[n])).abs();
}

/// Half-open arc [lo, hi) of R/Z. lo > hi denotes an arc through 0.
struct CircleInterval {
  Real lo;
  Real hi;

  bool contains(const Real& x) const {
    if (lo < hi) return lo <= x && x < hi;
    return x >= lo || x < hi;
  }
};

/// Parameters of a rotation coding n -> g(chi_I(n theta + beta mod 1)).
class CodingParams {
 public:
  CodingParams(RotationNumber theta, Real beta, CircleInterval interval, Letter inside_letter = Letter::a)
      : theta_(std::move(theta)), beta_(beta.frac()), interval_(std::move(interval)), inside_(inside_letter) {
    auto in_unit = [](const Real& v) { return v.sign() >= 0 && (v - Real(1)).sign() <= 0; };
    if (!in_unit(interval_.lo) || !in_unit(interval_.hi)) throw InvalidArgument("interval endpoints must lie in [0, 1]");
    interval_.lo = interval_.lo.frac();
    if ((interval_.hi - Real(1)).sign() != 0) interval_.hi = interval_.hi.frac();
    if (interval_.lo == interval_.hi || (interval_.lo.sign() == 0 && interval_.hi == Real(1)))
      throw InvalidArgument("coding interval must be nonempty and proper");
  }

  /// Sturmian coding: I = [1 - theta, 1).
  static CodingParams sturmian(const RotationNumber& theta, Real beta, Letter inside_letter = Letter::a) {
    return CodingParams(theta, std::move(beta), CircleInterval{Real(1) - theta.value(), Real(1)}, inside_letter);
  }

  const RotationNumber& theta() const { return theta_; }
  const Real& beta() const { return beta_; }
  const CircleInterval& interval() const { return interval_; }
  Letter inside_letter() const { return inside_; }
  Letter outside_letter() const { return inside_ == Letter::a ? Letter::b : Letter::a; }

  CodingParams with_beta(Real beta) const {
    CodingParams c = *this;
    c.beta_ = beta.frac();
    return c;
  }

 private:
  RotationNumber theta_;
  Real beta_;
  CircleInterval interval_;
  Letter inside_;
};

/// Position of n theta + beta on R/Z, computed as frac(frac(n theta) + beta)
/// so that large |n| keeps full precision when theta is exact.
inline Real orbit_point(const CodingParams& params, long n) {
  Real n_theta = (Real(static_cast<std::int64_t>(n)) * params.theta().value()).frac();
  return (n_theta + params.beta()).frac();
}

inline Letter coding_letter(const CodingParams& params, long n) {
  return params.interval().contains(orbit_point(params, n)) ? params.inside_letter() : params.outside_letter();
}

inline IndexedWindow<Letter> coding_window(const CodingParams& params, long first, long last) {
  return IndexedWindow<Letter>::generate(first, last, [&](long n) { return coding_letter(params, n); });
}

}  // namespace cmvsub
