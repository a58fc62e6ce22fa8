#include <gtest/gtest.h>

#include <random>

#include "cmvsub/gordon.hpp"
#include "oracles.hpp"

using namespace cmvsub;

namespace {

const long double kGolden = (std::sqrt(5.0L) - 1.0L) / 2.0L;

Real rational(std::int64_t p, std::int64_t q) { return Real(QuadraticNumber::rational(p, q)); }

}  // namespace

TEST(BadArcs, SmallestScale) {
  auto theta = RotationNumber::golden_mean();
  auto cf = continued_fraction(theta, 4);
  auto bad = bad_arcs(theta, Real(1) - theta.value(), Real(0), cf, 1);
  EXPECT_LE(bad.size(), 4u);
  EXPECT_LE(bad.measure().value(), 4 * convergent_distance(theta, cf, 1).value() + 1e-18L);
}

TEST(BadArcs, UnionBoundedByArcCount) {
  auto theta = RotationNumber::golden_mean();
  auto cf = continued_fraction(theta, 8);
  ASSERT_EQ(cf.q[6], 8);
  auto bad = bad_arcs(theta, Real(1) - theta.value(), Real(0), cf, 6);
  Real r = convergent_distance(theta, cf, 6);
  EXPECT_TRUE(bad.measure().is_exact());
  EXPECT_LE(bad.measure(), Real(32) * r);
  EXPECT_LE(bad.size(), 16u);
}

TEST(BadArcs, Errors) {
  auto theta = RotationNumber::golden_mean();
  auto cf = continued_fraction(theta, 5);
  EXPECT_THROW(bad_arcs(theta, Real(0), Real(0), cf, 0), InvalidArgument);
  EXPECT_THROW(bad_arcs(theta, Real(0), Real(0), cf, 5), InvalidArgument);
}

TEST(ShiftIdentity, SignedConvergentError) {
  auto theta = RotationNumber::golden_mean();
  auto cf = continued_fraction(theta, 20);
  for (int n = 1; n < 20; ++n) {
    Real e = Real(cf.q[n]) * theta.value() - Real(cf.p[n]);
    ASSERT_TRUE(e.is_exact());
    Real r = convergent_distance(theta, cf, n);
    EXPECT_EQ(e, n % 2 == 1 ? r : -r) << n;
  }
}

TEST(GordonSet, GoldenIndexNine) {
  auto rep = gordon_set(RotationNumber::golden_mean(), PhaseSetMode::sturmian(), 9);
  EXPECT_EQ(rep.q_n, 34);
  EXPECT_EQ(rep.p_n, 21);
  EXPECT_EQ(rep.q_n1, 55);
  EXPECT_TRUE(rep.applicable);
  EXPECT_EQ(rep.bound_kind, BoundKind::golden);
  long double r = std::fabs(34 * kGolden - 21);
  EXPECT_NEAR(rep.r.to_double(), static_cast<double>(r), 1e-15);
  EXPECT_NEAR(rep.bound.to_double(), static_cast<double>(1 - 70 * r), 1e-13);
  EXPECT_NEAR(rep.bound.to_double(), 0.079107, 1e-6);
  ASSERT_TRUE(rep.measure.is_exact());
  ASSERT_TRUE(rep.bound.is_exact());
  EXPECT_TRUE(rep.measure_meets_bound());
  EXPECT_FALSE(rep.bound_vacuous);
}

TEST(GordonSet, EvenIndicesMeetBound) {
  for (int n : {3, 6, 9, 12, 15}) {
    auto rep = gordon_set(RotationNumber::golden_mean(), PhaseSetMode::sturmian(), n);
    EXPECT_TRUE(rep.applicable) << n;
    EXPECT_EQ(rep.q_n % 2, 0);
    if (!rep.bound_vacuous) EXPECT_TRUE(rep.measure >= rep.bound) << n;
  }
  auto odd = gordon_set(RotationNumber::golden_mean(), PhaseSetMode::sturmian(), 7);
  EXPECT_FALSE(odd.applicable);
}

TEST(GordonSet, RotationCodingWithLargePartialQuotients) {
  // sqrt(26) - 5 = [0; 10, 10, 10, ...]
  auto theta = RotationNumber::quadratic(-5, 1, 1, 26);
  auto mode = PhaseSetMode::coding(CircleInterval{rational(1, 10), rational(2, 5)});
  auto rep = gordon_set(theta, mode, 2);
  EXPECT_EQ(rep.q_n, 10);
  EXPECT_EQ(rep.q_n1, 101);
  EXPECT_EQ(rep.bound_kind, BoundKind::rotation_coding);
  EXPECT_EQ(*rep.bound.exact(), QuadraticNumber::rational(61, 101));
  EXPECT_FALSE(rep.bound_vacuous);
  EXPECT_TRUE(rep.measure >= rep.bound);
}

TEST(GordonSet, GoldenRotationCodingBoundIsVacuous) {
  auto mode = PhaseSetMode::coding(CircleInterval{rational(1, 5), rational(7, 10)});
  auto rep = gordon_set(RotationNumber::golden_mean(), mode, 9);
  EXPECT_TRUE(rep.bound_vacuous);
  EXPECT_GT(rep.measure.to_double(), 0.0);
}

TEST(GordonSet, Errors) {
  EXPECT_THROW(gordon_set(RotationNumber::golden_mean(), PhaseSetMode::sturmian(), 0), InvalidArgument);
  EXPECT_THROW(gordon_set(RotationNumber(rational(2, 5)), PhaseSetMode::sturmian(), 3), InvalidArgument);
}

TEST(GordonSet, PointwiseMembershipMatchesDefinition) {
  auto theta = RotationNumber::golden_mean();
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<long double> u(0, 1);
  for (int n : {3, 6, 9}) {
    auto rep = gordon_set(theta, PhaseSetMode::sturmian(), n);
    long double r = rep.r.value();
    int disagreements = 0;
    for (int k = 0; k < 20000; ++k) {
      long double beta = u(rng);
      bool mine = rep.contains(Real::approximate(beta));
      bool ref = oracle::in_phase_set(kGolden, beta, 1 - kGolden, 0, rep.q_n, r);
      if (mine != ref) ++disagreements;
    }
    EXPECT_EQ(disagreements, 0) << n;
  }
}

TEST(Membership, ArcMidpointsPassThreeBlock) {
  auto theta = RotationNumber::golden_mean();
  for (int n : {3, 6, 9}) {
    auto rep = gordon_set(theta, PhaseSetMode::sturmian(), n);
    for (const auto& arc : rep.arcs.arcs()) {
      Real mid = (arc.lo + arc.hi) * rational(1, 2);
      EXPECT_TRUE(rep.contains(mid));
      EXPECT_TRUE(verify_membership(theta, mid, PhaseSetMode::sturmian(), n).holds) << n;
    }
  }
}

// beta with orbit point j landing on an interval endpoint: one of j -+ q_n
// falls on the other side.
TEST(Membership, BadCentersFailThreeBlock) {
  auto theta = RotationNumber::golden_mean();
  auto mode = PhaseSetMode::sturmian();
  for (int n : {3, 6, 9}) {
    auto cf = continued_fraction(theta, n + 1);
    auto [b1, b2] = mode.endpoints(theta);
    for (std::int64_t j = 1; j <= cf.q[n]; ++j)
      for (const Real* endpoint : {&b1, &b2}) {
        Real beta = (*endpoint - (Real(j) * theta.value()).frac()).frac();
        auto res = verify_membership(theta, beta, mode, n);
        EXPECT_FALSE(res.holds) << "n=" << n << " j=" << j;
      }
  }
}

TEST(Membership, OddScaleRejected) {
  EXPECT_THROW(verify_membership(RotationNumber::golden_mean(), Real(0), PhaseSetMode::sturmian(), 4),
               InvalidArgument);
}

TEST(Property, InteriorPointsSatisfyThreeBlock) {
  auto theta = RotationNumber::golden_mean();
  for (int n : {6, 9, 12}) {
    auto rep = gordon_set(theta, PhaseSetMode::sturmian(), n);
    for (const auto& arc : rep.arcs.arcs())
      for (std::int64_t k = 1; k <= 100; ++k) {
        Real beta = arc.lo + (arc.hi - arc.lo) * rational(k, 101);
        ASSERT_TRUE(rep.contains(beta));
        ASSERT_TRUE(verify_membership(theta, beta, PhaseSetMode::sturmian(), n).holds) << n << " " << beta.to_double();
      }
  }
}

TEST(GoldenLimits, DepthThirty) {
  auto g = golden_limits(30);
  EXPECT_LT(g.ratio_error(), 1e-10L);
  EXPECT_LT(g.scaled_error(), 1e-6L);
  EXPECT_TRUE(g.convergence_claimed);
  EXPECT_EQ(g.q_n, 832040);
  EXPECT_EQ(g.q_n1, 1346269);
}

TEST(GoldenLimits, ShallowDepth) {
  auto g = golden_limits(1);
  EXPECT_EQ(g.q_n, 1);
  EXPECT_FALSE(g.convergence_claimed);
  EXPECT_THROW(golden_limits(0), InvalidArgument);
}
