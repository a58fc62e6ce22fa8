#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "cmvsub/spectrum.hpp"
#include "cmvsub/transfer.hpp"
#include "oracles.hpp"

using namespace cmvsub;

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_diff(const Mat2<double>& x, const Mat2<double>& y) { return (x - y).max_abs(); }

CoefficientWindow periodic_window(const std::vector<Complex>& period, long first, long last) {
  return PeriodicCoefficients(period).window(first, last);
}

CoefficientWindow random_window(std::mt19937_64& rng, long first, long last, double rmax = 0.9) {
  return CoefficientWindow::generate(first, last, [&](long) { return oracle::random_disk(rng, rmax); });
}

// Product of step norms: the scale of the forward rounding bound.
long double step_norm_product(const CoefficientWindow& w, long first, long last) {
  long double p = 1.0L;
  for (long k = first; k <= last; ++k) p *= gz_step<long double>(detail::widen<long double>(w(k)), UnitPoint<long double>(0.0L), k).norm();
  return p;
}

}  // namespace

TEST(GzStep, FreeOddStep) {
  UnitPoint<double> z(0.7);
  auto t = gz_step<double>(Complex(0), z, 1);
  EXPECT_LT(max_diff(t, {Complex(0), z.value(), z.inverse(), Complex(0)}), 1e-15);
  EXPECT_NEAR(std::abs(t.det() + 1.0), 0.0, 1e-15);
}

TEST(GzStep, FreeEvenStep) {
  auto t = gz_step<double>(Complex(0), UnitPoint<double>(1.3), 2);
  EXPECT_LT(max_diff(t, {Complex(0), Complex(1), Complex(1), Complex(0)}), 1e-15);
}

TEST(GzStep, HalfEvenStepAtOne) {
  auto t = gz_step<long double>({0.5L, 0.0L}, UnitPoint<long double>(0.0L), 2);
  long double s = 2.0L / std::sqrt(3.0L);
  EXPECT_NEAR(static_cast<double>(std::abs(t.m00 - std::complex<long double>(-0.5L * s))), 0.0, 1e-18);
  EXPECT_NEAR(static_cast<double>(std::abs(t.m01 - std::complex<long double>(s))), 0.0, 1e-18);
  EXPECT_NEAR(static_cast<double>(std::abs(t.det() + 1.0L)), 0.0, 1e-17);
}

TEST(GzStep, RejectsCoefficientOnCircle) {
  EXPECT_THROW(gz_step<double>(Complex(1.0), UnitPoint<double>(0.1), 1), InvalidArgument);
  EXPECT_THROW(gz_step<double>(Complex(0.8, 0.8), UnitPoint<double>(0.1), 2), InvalidArgument);
}

TEST(GzStep, AgreesWithOracle) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 1000; ++k) {
    Complex a = oracle::random_disk(rng, 0.99);
    double w = ang(rng);
    for (long n : {1L, 2L, -3L, -4L}) {
      auto lib = gz_step<long double>(detail::widen<long double>(a), UnitPoint<long double>(w), n);
      auto ref = oracle::gz(a, w, n);
      EXPECT_LT(static_cast<double>(std::abs(lib.m00 - ref[0]) + std::abs(lib.m01 - ref[1]) +
                                    std::abs(lib.m10 - ref[2]) + std::abs(lib.m11 - ref[3])),
                1e-15);
    }
  }
}

TEST(Property, GzDeterminantIsMinusOne) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int k = 0; k < 10000; ++k) {
    Complex a = oracle::random_disk(rng, 0.95);
    UnitPoint<double> z(ang(rng));
    for (long n : {1L, 2L}) EXPECT_LT(std::abs(gz_step<double>(a, z, n).det() + 1.0), 1e-12);
  }
}

TEST(Szego, Examples) {
  UnitPoint<double> z(0.4);
  auto s0 = szego_step<double>(Complex(0), z);
  EXPECT_LT(max_diff(s0, {z.value(), Complex(0), Complex(0), Complex(1)}), 1e-15);
  auto s1 = szego_step<double>(Complex(0.5), UnitPoint<double>(0.0));
  double c = 2.0 / std::sqrt(3.0);
  EXPECT_LT(max_diff(s1, {Complex(c), Complex(-0.5 * c), Complex(-0.5 * c), Complex(c)}), 1e-15);
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    Complex a = oracle::random_disk(rng, 0.9);
    UnitPoint<double> w(0.01 * k);
    EXPECT_LT(std::abs(szego_step<double>(a, w).det() - w.value()), 1e-12);
  }
}

TEST(GzProduct, IdentityAndFreeSquare) {
  UnitPoint<double> z(0.9);
  auto free = periodic_window({Complex(0), Complex(0)}, -10, 10);
  EXPECT_EQ(max_diff(propagator<double>(free, z, 0), Mat2<double>::identity()), 0.0);
  EXPECT_LT(max_diff(propagator<double>(free, z, 2), {z.inverse(), Complex(0), Complex(0), z.value()}), 1e-15);
  auto m_minus2 = propagator<double>(free, z, -2);
  auto direct = gz_product<double>(free, z, -1, 0).matrix.inverse();
  EXPECT_LT(max_diff(m_minus2, direct), 1e-15);
  auto whole = gz_product<double>(free, z, -1, 2);
  EXPECT_EQ(whole.factor_count, 4);
  EXPECT_EQ(whole.expected_det(), 1);
  EXPECT_NEAR(std::abs(whole.matrix.det() - 1.0), 0.0, 1e-14);
}

TEST(GzProduct, NegativeBranchMatchesOracle) {
  std::mt19937_64 rng(8);
  auto w = random_window(rng, -30, 30);
  const double angle = 2.1;
  for (long n = -25; n <= -1; ++n) {
    oracle::M2 ref = oracle::identity();
    for (long k = n + 1; k <= 0; ++k) ref = oracle::mul(ref, oracle::inverse(oracle::gz(w(k), angle, k)));
    auto lib = propagator<long double>(w, UnitPoint<long double>(angle), n);
    long double scale = 1.0L, err = 0.0L;
    const std::complex<long double> got[4] = {lib.m00, lib.m01, lib.m10, lib.m11};
    for (int e = 0; e < 4; ++e) {
      scale = std::max(scale, std::abs(ref[e]));
      err = std::max(err, std::abs(got[e] - ref[e]));
    }
    long double bound = 64.0L * static_cast<long double>(-n) * std::numeric_limits<long double>::epsilon() *
                        std::max(scale, step_norm_product(w, n + 1, 0));
    EXPECT_LT(static_cast<double>(err), static_cast<double>(bound)) << "n=" << n;
  }
}

TEST(GzProduct, RangeNotCovered) {
  auto w = periodic_window({Complex(0.1), Complex(0.2)}, 1, 4);
  EXPECT_THROW(gz_product<double>(w, UnitPoint<double>(0.0), 1, 5), InvalidArgument);
  EXPECT_THROW(propagator<double>(w, UnitPoint<double>(0.0), -1), InvalidArgument);
}

TEST(Property, ProductAssociativity) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 100; ++trial) {
    long n = 1 + trial % 40;
    auto w = random_window(rng, 1, 2 * n);
    UnitPoint<double> z(0.37 * trial);
    auto whole = gz_product<double>(w, z, 1, 2 * n).matrix;
    auto upper = gz_product<double>(w, z, n + 1, 2 * n).matrix;
    auto lower = gz_product<double>(w, z, 1, n).matrix;
    double bound = 64.0 * 2 * n * std::numeric_limits<double>::epsilon() *
                   static_cast<double>(step_norm_product(w, 1, 2 * n));
    EXPECT_LT(max_diff(whole, upper * lower), bound);
    auto same_order = gz_product<double>(w, z, 1, 2 * n);
    EXPECT_EQ(max_diff(whole, same_order.matrix), 0.0);
  }
}

TEST(Property, TwoBlockSquare) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int trial = 0; trial < 200; ++trial) {
    long n = 2 * (1 + trial % 8);
    auto block = random_window(rng, 1, n, 0.8);
    auto w = CoefficientWindow::generate(1, 2 * n, [&](long j) { return block((j - 1) % n + 1); });
    ASSERT_TRUE(check_two_block(w, n));
    UnitPoint<long double> z(ang(rng));
    auto m2n = propagator<long double>(w, z, 2 * n);
    auto mn = propagator<long double>(w, z, n);
    long double scale = std::max(1.0L, m2n.max_abs());
    EXPECT_LT(static_cast<double>((m2n - mn * mn).max_abs() / scale), 1e-10);
  }
}

TEST(Property, CayleyHamilton) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int trial = 0; trial < 300; ++trial) {
    long n = 2 * (1 + trial % 10);
    auto w = random_window(rng, 1, n, 0.7);
    UnitPoint<long double> z(ang(rng));
    auto m = propagator<long double>(w, z, n);
    auto residual = m * m - m.trace() * m + m.det() * Mat2<long double>::identity();
    long double scale = std::max(1.0L, m.max_abs() * m.max_abs());
    EXPECT_NEAR(static_cast<double>(std::abs(m.det() - 1.0L)), 0.0, 1e-10 * static_cast<double>(scale));
    EXPECT_LT(static_cast<double>(residual.max_abs() / scale), 1e-10);
  }
}

// Theta_n (u_{n-1}, u_n) = z (v_{n-1}, v_n) at odd n, the 2x2 blocks of M u = z v.
TEST(Property, ThetaCoupling) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    auto w = random_window(rng, -40, 40, 0.8);
    UnitPoint<double> z(ang(rng));
    std::array<Complex, 2> seed{oracle::random_disk(rng, 1.0), oracle::random_disk(rng, 1.0)};
    auto s = propagate<double>(seed, w, z, -30, 30);
    for (long n = -29; n <= 30; ++n) {
      if (n % 2 == 0) continue;
      Complex a = w(n);
      double rho = std::sqrt(1.0 - std::norm(a));
      auto prev = s.at(n - 1), cur = s.at(n);
      Complex lhs0 = std::conj(a) * prev[0] + rho * cur[0];
      Complex lhs1 = rho * prev[0] - a * cur[0];
      double scale = std::max(1.0, s.norm(n) + s.norm(n - 1));
      EXPECT_LT(std::abs(lhs0 - z.value() * prev[1]) / scale, 1e-10);
      EXPECT_LT(std::abs(lhs1 - z.value() * cur[1]) / scale, 1e-10);
    }
  }
}

TEST(Propagate, FreeSolutionHasUnitNorm) {
  auto free = periodic_window({Complex(0), Complex(0)}, -20, 20);
  auto s = propagate<double>({Complex(1), Complex(0)}, free, UnitPoint<double>(0.0), -20, 20);
  for (long n = -20; n <= 20; ++n) EXPECT_NEAR(s.norm(n), 1.0, 1e-15);
  // swap matrices alternate the unit vector between components
  EXPECT_NEAR(std::abs(s.at(1)[1]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.at(2)[0]), 1.0, 1e-15);
}

TEST(Propagate, LinearInSeedAndMatchesPropagator) {
  std::mt19937_64 rng(15);
  auto w = random_window(rng, -12, 12);
  UnitPoint<double> z(1.1);
  std::array<Complex, 2> seed{Complex(0.3, -0.2), Complex(-0.7, 0.1)};
  Complex c(2.5, -1.5);
  auto s = propagate<double>(seed, w, z, -10, 10);
  auto t = propagate<double>({c * seed[0], c * seed[1]}, w, z, -10, 10);
  for (long n = -10; n <= 10; ++n) {
    EXPECT_LT(std::abs(t.at(n)[0] - c * s.at(n)[0]), 1e-9 * std::max(1.0, s.norm(n)));
    auto direct = propagator<double>(w, z, n).apply(seed);
    EXPECT_NEAR(s.norm(n), vector_norm<double>(direct), 1e-9 * std::max(1.0, s.norm(n)));
  }
}

TEST(Propagate, Errors) {
  auto w = periodic_window({Complex(0.1), Complex(0.2)}, -3, 3);
  EXPECT_THROW(propagate<double>({Complex(0), Complex(0)}, w, UnitPoint<double>(0.0), -2, 2), InvalidArgument);
  EXPECT_THROW(propagate<double>({Complex(1), Complex(0)}, w, UnitPoint<double>(0.0), -5, 2), InvalidArgument);
  EXPECT_THROW(propagate<double>({Complex(1), Complex(0)}, w, UnitPoint<double>(0.0), 1, 2), InvalidArgument);
}

// Bounded solutions inside a band of a period-2 sequence.
TEST(Propagate, BoundedInsidePeriodTwoBand) {
  PeriodicCoefficients per({Complex(0.5), Complex(-0.2)});
  auto scan = spectrum_arcs(per);
  ASSERT_FALSE(scan.arcs.empty());
  const auto& arc = scan.arcs.arcs().front();
  UnitPoint<double> z(0.5 * (arc.lo + arc.hi));
  ASSERT_LE(std::abs(discriminant<double>(per, z)), 2.0);
  auto s = propagate<double>({Complex(1), Complex(0)}, per.window(-1000, 1000), z, -1000, 1000);
  double peak = 0;
  for (long n = -1000; n <= 1000; ++n) peak = std::max(peak, s.norm(n));
  EXPECT_LT(peak, 100.0);
}

TEST(GordonInequality, PeriodTwoInBand) {
  PeriodicCoefficients per({Complex(0.4), Complex(0.1, 0.3)});
  auto w = per.window(-10, 10);
  auto scan = spectrum_arcs(per);
  for (const auto& arc : scan.arcs.arcs()) {
    UnitPoint<double> z(0.5 * (arc.lo + arc.hi));
    auto r = gordon_inequality_check(w, z, 2, GordonVariant::two_block);
    EXPECT_LE(std::abs(r.trace), 2.0 + 1e-12);
    EXPECT_NEAR(r.bound, 0.5 * std::min(1.0, 1.0 / std::abs(r.trace)), 1e-15);
    EXPECT_TRUE(r.holds);
  }
}

TEST(GordonInequality, ZeroTraceUsesCap) {
  auto w = periodic_window({Complex(0), Complex(0)}, -10, 10);
  auto r = gordon_inequality_check(w, UnitPoint<double>(kPi / 2), 2, GordonVariant::two_block);
  EXPECT_NEAR(std::abs(r.trace), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(r.bound, 0.5);
  EXPECT_TRUE(r.holds);
}

TEST(GordonInequality, ThreeBlockBoundDependsOnTrace) {
  EXPECT_DOUBLE_EQ(three_block_bound(3.0), 0.5);
  EXPECT_DOUBLE_EQ(three_block_bound(0.5), 0.25);
  EXPECT_DOUBLE_EQ(two_block_bound(0.0), 0.5);
  EXPECT_DOUBLE_EQ(two_block_bound(4.0), 0.125);
}

TEST(GordonInequality, FailsOnBrokenBlock) {
  std::mt19937_64 rng(16);
  auto w = random_window(rng, -8, 8);
  EXPECT_THROW(gordon_inequality_check(w, UnitPoint<double>(0.2), 4, GordonVariant::two_block), InvalidArgument);
  EXPECT_THROW(gordon_inequality_check(w, UnitPoint<double>(0.2), 4, GordonVariant::three_block), InvalidArgument);
}

// The inequality is a theorem: it must hold for any repeated block and any z.
TEST(Property, GordonInequalityAlwaysHolds) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ang(0, 2 * kPi);
  for (int trial = 0; trial < 500; ++trial) {
    long n = 2 * (1 + trial % 6);
    auto block = random_window(rng, 1, n, 0.9);
    auto w = CoefficientWindow::generate(1 - n, 2 * n, [&](long j) { return block(((j - 1) % n + n) % n + 1); });
    UnitPoint<double> z(ang(rng));
    std::array<Complex, 2> seed{oracle::random_disk(rng, 1.0), oracle::random_disk(rng, 1.0)};
    EXPECT_TRUE(gordon_inequality_check(w, z, n, GordonVariant::two_block, seed).holds);
    EXPECT_TRUE(gordon_inequality_check(w, z, n, GordonVariant::three_block, seed).holds);
  }
}
