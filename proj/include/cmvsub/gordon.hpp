#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cmvsub/arcs.hpp"
#include "cmvsub/error.hpp"
#include "cmvsub/real.hpp"
#include "cmvsub/rotation.hpp"
#include "cmvsub/window.hpp"

namespace cmvsub {

/// Which phase coding the set is built for.
struct PhaseSetMode {
  enum class Kind { sturmian, coding };
  Kind kind = Kind::sturmian;
  std::optional<CircleInterval> interval;  // coding only

  static PhaseSetMode sturmian() { return {}; }
  static PhaseSetMode coding(CircleInterval I) { return {Kind::coding, std::move(I)}; }

  CodingParams params(const RotationNumber& theta, const Real& beta) const {
    if (kind == Kind::sturmian) return CodingParams::sturmian(theta, beta);
    return CodingParams(theta, beta, *interval);
  }

  // Interval endpoints beta_1, beta_2. The Sturmian interval [1 - theta, 1)
  // has endpoints 1 - theta and 0 on the circle.
  std::pair<Real, Real> endpoints(const RotationNumber& theta) const {
    if (kind == Kind::sturmian) return {Real(1) - theta.value(), Real(0)};
    return {interval->lo, interval->hi.frac()};
  }
};

enum class BoundKind { rotation_coding, sturmian, golden };

inline const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::rotation_coding: return "rotation-coding";
    case BoundKind::sturmian: return "sturmian";
    case BoundKind::golden: return "golden";
  }
  return "?";
}

// Widening applied to the bad arcs when theta is only known to long double
// precision, so the computed set stays inside the true one.
inline constexpr long double kApproximateArcMargin = 1e-12L;

inline constexpr std::int64_t kMaxGordonScale = std::int64_t{1} << 20;

/**
 * Union over i in {1, 2} and 1 <= j <= q_n of the closed arcs
 * { beta : |Phi(j theta) + beta - beta_i|_1 <= r }, r = |q_n theta - p_n|.
 * Its complement is E_1(n) ∩ E_2(n). The arcs are stored half-open; their
 * endpoints have measure zero.
 */
inline ArcSet<Real> bad_arcs(const RotationNumber& theta, const Real& beta_1, const Real& beta_2,
                             const ContinuedFraction& cf, int n) {
  if (n < 1 || static_cast<std::size_t>(n) >= cf.q.size()) throw InvalidArgument("convergent depth insufficient for n");
  const std::int64_t qn = cf.q[n];
  if (qn > kMaxGordonScale) throw ResourceLimit("q_n too large for exact arc construction");
  Real r = convergent_distance(theta, cf, n);
  if (!r.is_exact()) r = Real::approximate(r.value() + kApproximateArcMargin);

  std::vector<std::pair<Real, Real>> pieces;
  pieces.reserve(static_cast<std::size_t>(2 * qn));
  const Real width = r + r;
  for (std::int64_t j = 1; j <= qn; ++j) {
    Real orbit = (Real(j) * theta.value()).frac();
    for (const Real* endpoint : {&beta_1, &beta_2}) {
      Real center = (*endpoint - orbit).frac();
      pieces.emplace_back(center - r, width);
    }
  }
  ArcSet<Real> bad(Real(1));
  bad.insert_wrapped_many(pieces);
  return bad;
}

struct GordonReport {
  int n = 0;
  std::int64_t q_n = 0;
  std::int64_t q_n1 = 0;
  std::int64_t p_n = 0;
  Real r;
  ArcSet<Real> arcs{Real(1)};
  Real measure;
  Real bound;
  BoundKind bound_kind = BoundKind::sturmian;
  // q_n even: the set feeds the (even-jump) Gordon argument.
  bool applicable = false;
  bool bound_vacuous = true;

  bool measure_meets_bound(double tol = 1e-9) const {
    if (measure.is_exact() && bound.is_exact()) return measure >= bound;
    return measure.to_double() >= bound.to_double() - tol;
  }

  // Membership in the open set E_1(n) ∩ E_2(n); arc start points are excluded.
  bool contains(const Real& beta) const {
    Real b = beta.frac();
    if (!arcs.contains(b)) return false;
    for (const auto& a : arcs.arcs()) {
      if (a.lo == b) {
        if (b.sign() != 0) return false;
        const auto& last = arcs.arcs().back();
        return last.hi == Real(1);  // the arc continues through 0
      }
    }
    return true;
  }
};

/**
 * E_1(n) ∩ E_2(n) for the Sturmian or rotation coding of theta, with the
 * matching lower bound on its measure:
 *   sturmian / golden: 1 - 2 (q_n + 1) |q_n theta - p_n|
 *   rotation coding:   1 - 4 q_n / q_{n+1}
 */
inline GordonReport gordon_set(const RotationNumber& theta, const PhaseSetMode& mode, int n) {
  if (n < 1) throw InvalidArgument("Gordon index n must be >= 1");
  ContinuedFraction cf = continued_fraction(theta, n + 2);
  GordonReport rep;
  rep.n = n;
  rep.q_n = cf.q[n];
  rep.q_n1 = cf.q[n + 1];
  rep.p_n = cf.p[n];
  rep.r = convergent_distance(theta, cf, n);
  auto [b1, b2] = mode.endpoints(theta);
  rep.arcs = bad_arcs(theta, b1, b2, cf, n).complement();
  rep.measure = rep.arcs.measure();
  if (mode.kind == PhaseSetMode::Kind::sturmian) {
    rep.bound_kind = theta.is_golden_mean() ? BoundKind::golden : BoundKind::sturmian;
    rep.bound = Real(1) - Real(2 * (rep.q_n + 1)) * rep.r;
  } else {
    rep.bound_kind = BoundKind::rotation_coding;
    rep.bound = Real(1) - Real(QuadraticNumber::rational(4 * rep.q_n, rep.q_n1));
  }
  rep.applicable = rep.q_n % 2 == 0;
  rep.bound_vacuous = rep.bound.sign() <= 0;
  return rep;
}

struct MembershipResult {
  bool holds = false;
  std::optional<long> violation_index;
  std::int64_t q_n = 0;
};

/// Builds the letter window over (1 - q_n)..2 q_n for phase beta and tests
/// the three-block repetition at scale q_n.
inline MembershipResult verify_membership(const RotationNumber& theta, const Real& beta, const PhaseSetMode& mode,
                                          int n) {
  ContinuedFraction cf = continued_fraction(theta, n + 1);
  const std::int64_t q = cf.q[n];
  if (q % 2 != 0 || q < 2) throw InvalidArgument("q_n = " + std::to_string(q) + " is not even");
  CodingParams params = mode.params(theta, beta);
  auto window = coding_window(params, 1 - q, 2 * q);
  MembershipResult out;
  out.q_n = q;
  out.violation_index = three_block_violation(window, q);
  out.holds = !out.violation_index.has_value();
  return out;
}

struct GoldenLimits {
  int depth = 0;
  std::int64_t q_n = 0;
  std::int64_t q_n1 = 0;
  long double ratio = 0;             // q_{n+1} / q_n
  long double ratio_target = 0;      // 2 / (sqrt 5 - 1)
  long double scaled_distance = 0;   // q_n |q_n theta - p_n|
  long double scaled_target = 0;     // 1 / sqrt 5
  bool convergence_claimed = false;  // depth >= 20

  long double ratio_error() const { return std::fabs(ratio - ratio_target); }
  long double scaled_error() const { return std::fabs(scaled_distance - scaled_target); }
};

inline GoldenLimits golden_limits(int depth) {
  if (depth < 1) throw InvalidArgument("depth must be >= 1");
  RotationNumber theta = RotationNumber::golden_mean();
  ContinuedFraction cf = continued_fraction(theta, depth + 2);
  GoldenLimits g;
  g.depth = depth;
  g.q_n = cf.q[depth];
  g.q_n1 = cf.q[depth + 1];
  g.ratio = g.q_n == 0 ? 0.0L : static_cast<long double>(g.q_n1) / static_cast<long double>(g.q_n);
  g.ratio_target = 2.0L / (std::sqrt(5.0L) - 1.0L);
  g.scaled_distance = (Real(g.q_n) * convergent_distance(theta, cf, depth)).value();
  g.scaled_target = 1.0L / std::sqrt(5.0L);
  g.convergence_claimed = depth >= 20;
  return g;
}

}  // namespace cmvsub
