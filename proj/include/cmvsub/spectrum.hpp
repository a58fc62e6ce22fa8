#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <iterator>
#include <utility>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cmvsub/arcs.hpp"
#include "cmvsub/error.hpp"
#include "cmvsub/parallel.hpp"
#include "cmvsub/tracemap.hpp"
#include "cmvsub/transfer.hpp"
#include "cmvsub/words.hpp"

namespace cmvsub {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// One period alpha(1..q) of a q-periodic coefficient sequence, extended by
/// alpha(j) = alpha(j') with j' = j mod q taken in 1..q (so alpha(0) = alpha(q)).
class PeriodicCoefficients {
 public:
  explicit PeriodicCoefficients(std::vector<Complex> one_period) : alpha_(std::move(one_period)) {
    if (alpha_.empty()) throw InvalidArgument("empty period");
    for (const auto& a : alpha_)
      if (!(std::abs(a) < 1.0)) throw InvalidArgument("Verblunsky coefficient outside the open unit disk");
  }

  long period() const { return static_cast<long>(alpha_.size()); }
  const std::vector<Complex>& one_period() const { return alpha_; }

  Complex operator()(long j) const {
    long q = period();
    long r = ((j - 1) % q + q) % q;
    return alpha_[static_cast<std::size_t>(r)];
  }

  CoefficientWindow window(long first, long last) const {
    return CoefficientWindow::generate(first, last, [this](long j) { return (*this)(j); });
  }

  void require_even_period() const {
    if (period() % 2 != 0)
      throw InvalidArgument("odd period " + std::to_string(period()) +
                            " unsupported: the transfer-matrix Floquet theory needs an even period");
  }

 private:
  std::vector<Complex> alpha_;
};

/// Delta(z) = tr M_q(z) = tr(T_q ... T_1). Expected real on the circle.
template <class T = double>
std::complex<T> discriminant(const PeriodicCoefficients& alphas, const UnitPoint<T>& z) {
  alphas.require_even_period();
  Mat2<T> m = Mat2<T>::identity();
  for (long n = 1; n <= alphas.period(); ++n) m = gz_step<T>(detail::widen<T>(alphas(n)), z, n) * m;
  return m.trace();
}

/// Delta and dDelta/d(omega) at z = e^{i omega}, by the product rule.
template <class T = double>
std::pair<std::complex<T>, std::complex<T>> discriminant_with_derivative(const PeriodicCoefficients& alphas,
                                                                        const UnitPoint<T>& z) {
  alphas.require_even_period();
  Mat2<T> m = Mat2<T>::identity();
  Mat2<T> dm = {0, 0, 0, 0};
  for (long n = 1; n <= alphas.period(); ++n) {
    const auto a = detail::widen<T>(alphas(n));
    Mat2<T> step = gz_step<T>(a, z, n);
    dm = n % 2 != 0 ? gz_step_derivative<T>(a, z, n) * m + step * dm : step * dm;
    m = step * m;
  }
  return {m.trace(), dm.trace()};
}

/// Discriminant as a function of angle for a generic periodic sequence.
struct PeriodicDiscriminant {
  PeriodicCoefficients alphas;

  long period() const { return alphas.period(); }
  std::complex<long double> operator()(long double angle) const {
    return discriminant<long double>(alphas, UnitPoint<long double>(angle));
  }
  std::pair<std::complex<long double>, std::complex<long double>> with_derivative(long double angle) const {
    return discriminant_with_derivative<long double>(alphas, UnitPoint<long double>(angle));
  }
};

/// Discriminant of the level-n period doubling approximant through the block
/// recursion: n matrix products per point instead of 2^n.
struct PeriodDoublingDiscriminant {
  int level;
  VerblunskyMap f;

  long period() const { return 1L << level; }
  std::complex<long double> operator()(long double angle) const {
    return block_matrices<long double>(level, UnitPoint<long double>(angle), f).first.trace();
  }
  std::pair<std::complex<long double>, std::complex<long double>> with_derivative(long double angle) const {
    using M = Mat2<long double>;
    const UnitPoint<long double> z(angle);
    const auto fa = detail::widen<long double>(f.fa());
    const auto fb = detail::widen<long double>(f.fb());
    M t1a = gz_step<long double>(fa, z, 1), d1a = gz_step_derivative<long double>(fa, z, 1);
    M ma = gz_step<long double>(fb, z, 2) * t1a, dma = gz_step<long double>(fb, z, 2) * d1a;
    M mb = gz_step<long double>(fa, z, 2) * t1a, dmb = gz_step<long double>(fa, z, 2) * d1a;
    for (int n = 1; n < level; ++n) {
      M next_a = mb * ma, d_next_a = dmb * ma + mb * dma;
      M next_b = ma * ma, d_next_b = dma * ma + ma * dma;
      ma = next_a;
      dma = d_next_a;
      mb = next_b;
      dmb = d_next_b;
    }
    return {ma.trace(), dma.trace()};
  }
};

/// alpha-hat(j) = f(S^n(a)_{j'}) with j' = j mod |S^n(a)|.
inline PeriodicCoefficients periodic_approximant(int level, const SubstitutionRule& rule, const VerblunskyMap& f) {
  if (level < 2) throw InvalidArgument("periodic approximant level must be >= 2");
  Word w = fixed_point_prefix(rule, level);
  std::vector<Complex> alpha;
  alpha.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) alpha.push_back(f.alpha(w[k]));
  return PeriodicCoefficients(std::move(alpha));
}

// --- Floquet operator -------------------------------------------------------

struct FloquetOperator {
  long q = 0;
  Complex phi;
  Eigen::MatrixXcd matrix;
};

/**
 * E_q(phi) = L_q M_q(phi). L_q is the direct sum of Theta_0, Theta_2, ...,
 * Theta_{q-2}; M_q(phi) carries Theta_1, ..., Theta_{q-3} on rows 1..q-2 and
 * the phi-twisted Theta_{q-1} in its corners, with
 * Theta_n = [[conj(alpha(n)), rho(n)], [rho(n), -alpha(n)]].
 */
inline FloquetOperator build_floquet(const PeriodicCoefficients& alphas, Complex phi) {
  alphas.require_even_period();
  const long q = alphas.period();
  if (q < 4) throw InvalidArgument("Floquet operator needs an even period >= 4");
  if (std::abs(std::abs(phi) - 1.0) > 1e-12) throw InvalidArgument("skew parameter phi must lie on the unit circle");

  auto alpha = [&](long n) { return alphas(n); };
  auto rho = [&](long n) { return std::sqrt(1.0 - std::norm(alphas(n))); };
  auto put_theta = [&](Eigen::MatrixXcd& m, long n, long row) {
    m(row, row) = std::conj(alpha(n));
    m(row, row + 1) = rho(n);
    m(row + 1, row) = rho(n);
    m(row + 1, row + 1) = -alpha(n);
  };

  Eigen::MatrixXcd L = Eigen::MatrixXcd::Zero(q, q);
  for (long k = 0; k < q; k += 2) put_theta(L, k, k);

  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(q, q);
  for (long k = 1; k <= q - 3; k += 2) put_theta(M, k, k);
  M(0, 0) = -alpha(q - 1);
  M(0, q - 1) = rho(q - 1) / phi;
  M(q - 1, 0) = rho(q - 1) * phi;
  M(q - 1, q - 1) = std::conj(alpha(q - 1));

  return {q, phi, L * M};
}

inline std::vector<Complex> floquet_eigenvalues(const FloquetOperator& op) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(op.matrix, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericAssertion("Floquet eigensolver did not converge");
  const auto& ev = solver.eigenvalues();
  return std::vector<Complex>(ev.data(), ev.data() + ev.size());
}

/// Frobenius norm of E E* - I.
inline double unitarity_residual(const FloquetOperator& op) {
  const auto n = op.matrix.rows();
  return (op.matrix * op.matrix.adjoint() - Eigen::MatrixXcd::Identity(n, n)).norm();
}

struct FloquetCheck {
  long q = 0;
  Complex phi;
  std::vector<Complex> eigenvalues;
  // max over eigenvalues z0 of |Delta(z0) - (phi + 1/phi)|
  double max_discriminant_mismatch = 0;
  // max over eigenvalues of ||z0| - 1|
  double max_modulus_defect = 0;
  double unitarity_residual = 0;
};

/// Every eigenvalue z0 of E_q(phi) must satisfy Delta(z0) = phi + 1/phi.
inline FloquetCheck floquet_cross_check(const PeriodicCoefficients& alphas, Complex phi) {
  FloquetOperator op = build_floquet(alphas, phi);
  FloquetCheck c;
  c.q = op.q;
  c.phi = phi;
  c.unitarity_residual = unitarity_residual(op);
  c.eigenvalues = floquet_eigenvalues(op);
  const Complex target = phi + 1.0 / phi;
  for (const auto& z0 : c.eigenvalues) {
    c.max_modulus_defect = std::max(c.max_modulus_defect, std::abs(std::abs(z0) - 1.0));
    Complex d = discriminant<double>(alphas, UnitPoint<double>(std::arg(z0)));
    c.max_discriminant_mismatch = std::max(c.max_discriminant_mismatch, std::abs(d - target));
  }
  return c;
}

// --- band scan ----------------------------------------------------------------

struct ScanOptions {
  std::size_t initial_resolution = std::size_t{1} << 14;
  // Cap on the base grid; local refinement may add as many samples again.
  std::size_t max_resolution = std::size_t{1} << 22;
  double edge_tolerance = 1e-10;
  double reality_tolerance = kRealityTolerance;
  unsigned threads = 1;
};

struct DiscriminantSample {
  double angle;
  std::complex<long double> value;
};

// |Delta| may exceed 2 by this much at a closed gap through rounding.
inline constexpr long double kTangencyTolerance = 1e-12L;

struct SpectrumScan {
  ArcSet<double> arcs{kTwoPi};
  // Uniform base grid of the final pass and total sample count after local refinement.
  std::size_t resolution = 0;
  std::size_t sample_count = 0;
  // Sign changes of Delta, Delta - 2 and Delta + 2 between consecutive samples.
  std::size_t zero_crossings = 0;
  std::size_t plus_crossings = 0;
  std::size_t minus_crossings = 0;
  double max_imag_residual = 0;
  // Delta changes sign q times: each band's single zero sits alone in a cell,
  // so no band is missed and every gap between zeros has been resolved.
  bool converged = false;
  std::vector<DiscriminantSample> samples;
};

namespace detail {

struct ScanNode {
  long double angle;
  std::complex<long double> value;
  long double slope;
};

inline void check_reality(const std::complex<long double>& d, long double angle, double tol, double& residual) {
  double r = static_cast<double>(scaled_imag(d));
  if (!(r <= tol))
    throw NumericAssertion("discriminant not real at angle " + std::to_string(static_cast<double>(angle)) +
                           ": scaled |Im| = " + std::to_string(r));
  residual = std::max(residual, r);
}

template <class Eval>
long double checked_real(const Eval& eval, long double angle, double tol, double& residual) {
  std::complex<long double> d = eval(angle);
  check_reality(d, angle, tol, residual);
  return d.real();
}

template <class Eval>
ScanNode checked_node(const Eval& eval, long double angle, double tol, double& residual) {
  auto [d, dd] = eval.with_derivative(angle);
  check_reality(d, angle, tol, residual);
  return {angle, d, dd.real()};
}

// A cell may hide extrema, and so whole bands, when its endpoint slopes
// disagree with each other or with the secant, when they are far steeper
// than the secant, or when it sweeps a long way through the band strip.
inline bool suspicious_cell(const ScanNode& a, const ScanNode& b) {
  const long double h = b.angle - a.angle;
  const long double va = a.value.real(), vb = b.value.real();
  const long double rise = vb - va;
  if (a.slope * b.slope < 0) return true;
  if (a.slope * rise < 0 || b.slope * rise < 0) return true;
  if (std::max(std::fabs(a.slope), std::fabs(b.slope)) * h > 4.0L * std::fabs(rise) + 4.0L) return true;
  constexpr long double strip = 10.0L;
  return std::fabs(rise) > 4.0L && std::min(va, vb) <= strip && std::max(va, vb) >= -strip;
}

// Uniform grid of n cells over [0, 2 pi], then repeated midpoint insertion in
// suspicious cells. The last node repeats the first at angle 2 pi.
template <class Eval>
std::vector<ScanNode> adaptive_nodes(const Eval& eval, std::size_t n, const ScanOptions& opt, double& residual,
                                     bool& budget_hit) {
  const long double h = static_cast<long double>(kTwoPi) / static_cast<long double>(n);
  std::vector<ScanNode> nodes(n + 1);
  std::vector<double> res(n, 0.0);
  parallel_for(n, opt.threads, [&](std::size_t i) {
    nodes[i] = checked_node(eval, h * static_cast<long double>(i), opt.reality_tolerance, res[i]);
  });
  nodes[n] = nodes[0];
  nodes[n].angle = static_cast<long double>(kTwoPi);
  for (double r : res) residual = std::max(residual, r);

  const long double min_width = 2.0L * opt.edge_tolerance;
  budget_hit = false;
  while (true) {
    std::vector<long double> mids;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i)
      if (nodes[i + 1].angle - nodes[i].angle > min_width && suspicious_cell(nodes[i], nodes[i + 1]))
        mids.push_back(0.5L * (nodes[i].angle + nodes[i + 1].angle));
    if (mids.empty()) break;
    if (nodes.size() + mids.size() > 2 * opt.max_resolution) {
      budget_hit = true;
      break;
    }
    std::vector<ScanNode> fresh(mids.size());
    std::vector<double> fres(mids.size(), 0.0);
    parallel_for(mids.size(), opt.threads, [&](std::size_t i) {
      fresh[i] = checked_node(eval, mids[i], opt.reality_tolerance, fres[i]);
    });
    for (double r : fres) residual = std::max(residual, r);
    std::vector<ScanNode> merged;
    merged.reserve(nodes.size() + fresh.size());
    std::merge(nodes.begin(), nodes.end(), fresh.begin(), fresh.end(), std::back_inserter(merged),
               [](const ScanNode& x, const ScanNode& y) { return x.angle < y.angle; });
    nodes = std::move(merged);
  }
  return nodes;
}

inline bool in_band_value(long double v) { return std::fabs(v) <= 2.0L + kTangencyTolerance; }

// Bisects between an in-band angle and an out-of-band angle.
template <class Eval>
long double refine_edge(const Eval& eval, long double in, long double out, const ScanOptions& opt, double& residual) {
  while (std::fabs(out - in) > opt.edge_tolerance) {
    long double mid = 0.5L * (in + out);
    if (in_band_value(checked_real(eval, mid, opt.reality_tolerance, residual))) in = mid;
    else out = mid;
  }
  return 0.5L * (in + out);
}

// Bisects a sign change of Delta in [a, b].
template <class Eval>
long double refine_zero(const Eval& eval, long double a, long double b, const ScanOptions& opt, double& residual) {
  const bool a_neg = checked_real(eval, a, opt.reality_tolerance, residual) < 0;
  while (b - a > opt.edge_tolerance) {
    long double mid = 0.5L * (a + b);
    if ((checked_real(eval, mid, opt.reality_tolerance, residual) < 0) == a_neg) a = mid;
    else b = mid;
  }
  return 0.5L * (a + b);
}

// Bisects the sign change of Delta' in [a, b], given its sign near a.
template <class Eval>
long double locate_critical(const Eval& eval, long double a, long double b, int slope_sign, const ScanOptions& opt,
                            double& residual) {
  while (b - a > opt.edge_tolerance) {
    long double mid = 0.5L * (a + b);
    if (checked_node(eval, mid, opt.reality_tolerance, residual).slope * slope_sign > 0) a = mid;
    else b = mid;
  }
  return 0.5L * (a + b);
}

template <class Eval>
SpectrumScan scan_once(const Eval& eval, long q, std::size_t n, const ScanOptions& opt, bool keep_samples) {
  SpectrumScan scan;
  scan.resolution = n;
  double residual = 0;
  bool budget_hit = false;
  std::vector<ScanNode> nodes = adaptive_nodes(eval, n, opt, residual, budget_hit);
  const std::size_t m = nodes.size() - 1;  // distinct nodes; nodes[m] repeats nodes[0]
  scan.sample_count = m;

  auto d = [&](std::size_t i) { return nodes[i % m].value.real(); };
  auto in_band = [&](std::size_t i) { return in_band_value(d(i)); };
  auto angle = [&](std::size_t i) {
    return nodes[i % m].angle + static_cast<long double>(kTwoPi) * static_cast<long double>(i / m);
  };

  for (std::size_t i = 0; i < m; ++i) {
    long double a = d(i), b = d(i + 1);
    scan.zero_crossings += (a < 0) != (b < 0);
    scan.plus_crossings += (a > 2) != (b > 2);
    scan.minus_crossings += (a < -2) != (b < -2);
  }

  // Consecutive zeros that share a run straddle one critical point: a closed
  // gap if |Delta| <= 2 there, else an open gap narrower than the grid.
  std::vector<std::pair<long double, long double>> hidden_gaps;
  auto resolve_zeros = [&](std::size_t first_cell, std::size_t last_cell, bool cyclic) {
    std::vector<std::size_t> cells;
    for (std::size_t j = first_cell; j <= last_cell; ++j)
      if ((d(j) < 0) != (d(j + 1) < 0)) cells.push_back(j);
    if (cyclic && !cells.empty()) cells.push_back(cells.front() + m);
    for (std::size_t t = 0; t + 1 < cells.size(); ++t) {
      const std::size_t j1 = cells[t], j2 = cells[t + 1];
      long double z1 = refine_zero(eval, angle(j1), angle(j1 + 1), opt, residual);
      long double z2 = refine_zero(eval, angle(j2), angle(j2 + 1), opt, residual);
      int slope_sign = d(j1 + 1) > d(j1) ? 1 : -1;
      long double c = locate_critical(eval, z1, z2, slope_sign, opt, residual);
      long double dc = checked_real(eval, c, opt.reality_tolerance, residual);
      if (!in_band_value(dc)) {
        long double lo = refine_edge(eval, z1, c, opt, residual);
        long double hi = refine_edge(eval, z2, c, opt, residual);
        hidden_gaps.emplace_back(lo, hi);
      }
    }
  };

  bool all_in = true;
  for (std::size_t i = 0; i < m; ++i) all_in = all_in && in_band(i);
  if (all_in) {
    scan.arcs = ArcSet<double>::full(kTwoPi);
    resolve_zeros(0, m - 1, true);
  } else {
    std::vector<std::pair<long double, long double>> raw;  // unwrapped [lo, hi)
    // Start at an out-of-band node so every run is seen whole.
    std::size_t start = 0;
    while (in_band(start)) ++start;
    std::size_t i = start;
    for (std::size_t step = 0; step < m; ++step, ++i) {
      bool cur = in_band(i), nxt = in_band(i + 1);
      if (!cur && nxt) {
        long double lo = refine_edge(eval, angle(i + 1), angle(i), opt, residual);
        std::size_t k = i + 1;
        while (in_band(k + 1)) ++k;
        long double hi = refine_edge(eval, angle(k), angle(k + 1), opt, residual);
        raw.emplace_back(lo, hi);
        resolve_zeros(i, k, false);
        step += k - i - 1;
        i = k - 1;
      } else if (!cur && !nxt && (d(i) < 0) != (d(i + 1) < 0)) {
        // A whole band between two out-of-band nodes: find a point inside
        // it, then both edges.
        long double a = angle(i), b = angle(i + 1);
        const long double da = d(i);
        long double inside = a;
        bool found = false;
        for (int it = 0; it < 200 && !found; ++it) {
          long double mid = 0.5L * (a + b);
          long double dm = checked_real(eval, mid, opt.reality_tolerance, residual);
          if (in_band_value(dm)) {
            inside = mid;
            found = true;
          } else if ((dm < 0) == (da < 0)) {
            a = mid;
          } else {
            b = mid;
          }
        }
        if (found) {
          long double lo = refine_edge(eval, inside, angle(i), opt, residual);
          long double hi = refine_edge(eval, inside, angle(i + 1), opt, residual);
          raw.emplace_back(lo, hi);
        }
      }
    }
    ArcSet<double> arcs(kTwoPi);
    std::vector<std::pair<double, double>> pieces;
    pieces.reserve(raw.size());
    for (auto [lo, hi] : raw)
      pieces.emplace_back(std::fmod(static_cast<double>(lo), kTwoPi), std::max(0.0, static_cast<double>(hi - lo)));
    arcs.insert_wrapped_many(pieces);
    scan.arcs = std::move(arcs);
  }
  if (!hidden_gaps.empty()) {
    ArcSet<double> gaps(kTwoPi);
    std::vector<std::pair<double, double>> pieces;
    for (auto [lo, hi] : hidden_gaps)
      pieces.emplace_back(std::fmod(static_cast<double>(lo), kTwoPi), std::max(0.0, static_cast<double>(hi - lo)));
    gaps.insert_wrapped_many(pieces);
    scan.arcs = scan.arcs.intersect(gaps.complement());
  }

  scan.converged = !budget_hit && scan.zero_crossings == static_cast<std::size_t>(q);
  scan.max_imag_residual = residual;
  if (keep_samples) {
    scan.samples.reserve(m);
    for (std::size_t k = 0; k < m; ++k) scan.samples.push_back({static_cast<double>(nodes[k].angle), nodes[k].value});
  }
  return scan;
}

}  // namespace detail

/**
 * Arcs of the unit circle where |Delta| <= 2, for a discriminant of a
 * q-periodic sequence given as a function of angle (with derivative).
 *
 * Each pass samples a uniform grid, then keeps bisecting cells whose endpoint
 * slopes suggest hidden extrema. Delta has exactly q zeros, one per band,
 * and one critical point per gap. The scan is converged once Delta changes
 * sign q times between samples; the critical point between two zeros of the
 * same sampled run is then located to tell a closed gap from a hidden open
 * one. Otherwise the base grid doubles,
 * up to max_resolution (converged = false there). Edges are bisected to
 * edge_tolerance in angle. A discriminant that is not real within
 * reality_tolerance aborts the scan with NumericAssertion.
 */
template <class Eval>
SpectrumScan spectrum_arcs(const Eval& eval, long q, const ScanOptions& opt = {}, bool keep_samples = false) {
  if (q % 2 != 0) throw InvalidArgument("odd period " + std::to_string(q) + " unsupported");
  if (opt.initial_resolution < 256) throw InvalidArgument("scan resolution must be at least 2^8");
  std::size_t n = opt.initial_resolution;
  while (true) {
    SpectrumScan scan = detail::scan_once(eval, q, n, opt, keep_samples);
    if (scan.converged || 2 * n > opt.max_resolution) return scan;
    n *= 2;
  }
}

inline SpectrumScan spectrum_arcs(const PeriodicCoefficients& alphas, const ScanOptions& opt = {}) {
  alphas.require_even_period();
  return spectrum_arcs(PeriodicDiscriminant{alphas}, alphas.period(), opt);
}

}  // namespace cmvsub
