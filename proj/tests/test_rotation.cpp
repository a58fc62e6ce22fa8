#include <gtest/gtest.h>

#include "cmvsub/rotation.hpp"
#include "oracles.hpp"

using namespace cmvsub;

TEST(ContinuedFraction, GoldenMean) {
  auto cf = continued_fraction(RotationNumber::golden_mean(), 10);
  EXPECT_EQ(cf.a, (std::vector<std::int64_t>{0, 1, 1, 1, 1, 1, 1, 1, 1, 1}));
  auto cf8 = continued_fraction(RotationNumber::golden_mean(), 8);
  EXPECT_EQ(cf8.q, (std::vector<std::int64_t>{0, 1, 1, 2, 3, 5, 8, 13}));
}

TEST(ContinuedFraction, SilverMean) {
  auto cf = continued_fraction(RotationNumber::silver(), 6);
  EXPECT_EQ(cf.a, (std::vector<std::int64_t>{0, 2, 2, 2, 2, 2}));
  auto cf7 = continued_fraction(RotationNumber::silver(), 7);
  EXPECT_EQ(cf7.q, (std::vector<std::int64_t>{0, 1, 2, 5, 12, 29, 70}));
  EXPECT_EQ(even_q_indices(cf7), (std::vector<int>{2, 4, 6}));
}

TEST(ContinuedFraction, RecursionHoldsExactly) {
  for (const auto& theta : {RotationNumber::golden_mean(), RotationNumber::silver(),
                            RotationNumber::quadratic(-3, 1, 2, 13)}) {
    auto cf = continued_fraction(theta, 25);
    ASSERT_EQ(cf.q[0], 0);
    ASSERT_EQ(cf.q[1], 1);
    for (std::size_t n = 1; n + 1 < cf.q.size(); ++n) {
      EXPECT_EQ(cf.q[n + 1], cf.a[n] * cf.q[n] + cf.q[n - 1]);
      if (n >= 1 && cf.a[n] >= 1 && n + 1 < cf.q.size() && n >= 2) EXPECT_GT(cf.q[n + 1], cf.q[n]);
    }
  }
}

TEST(ContinuedFraction, GoldenEvenIndicesEveryThird) {
  auto cf = continued_fraction(RotationNumber::golden_mean(), 13);
  EXPECT_EQ(even_q_indices(cf), (std::vector<int>{3, 6, 9, 12}));
  auto with_zero = even_q_indices(cf, 0);
  EXPECT_EQ(with_zero.front(), 0);
}

TEST(ContinuedFraction, RationalInputIsRejected) {
  EXPECT_THROW(RotationNumber(Real(QuadraticNumber::rational(3, 7))), RationalThetaError);
  EXPECT_THROW(continued_fraction(RotationNumber::decimal("0.375"), 8), RationalThetaError);
  EXPECT_THROW(RotationNumber::parse("1.5"), InvalidArgument);
}

TEST(ContinuedFraction, DecimalPathAgreesWithExactPath) {
  auto exact = continued_fraction(RotationNumber::golden_mean(), 20);
  auto approx = continued_fraction(RotationNumber::decimal("0.61803398874989484820458683436563811772"), 20);
  EXPECT_EQ(exact.a, approx.a);
  EXPECT_EQ(exact.q, approx.q);
}

TEST(ContinuedFraction, DecimalPathRefusesDepthBeyondPrecision) {
  EXPECT_THROW(continued_fraction(RotationNumber::decimal("0.6180339887"), 40), InvalidArgument);
}

// Convergent quality |q_n theta - p_n| < 1 / q_{n+1}.
TEST(Property, ConvergentQuality) {
  for (const auto& theta : {RotationNumber::golden_mean(), RotationNumber::silver(),
                            RotationNumber::quadratic(-3, 1, 2, 13), RotationNumber::quadratic(-4, 1, 1, 19)}) {
    auto cf = continued_fraction(theta, 22);
    int checked = 0;
    for (int n = 1; n + 1 < static_cast<int>(cf.q.size()); ++n) {
      Real r = convergent_distance(theta, cf, n);
      ASSERT_TRUE(r.is_exact());
      try {
        EXPECT_LT(r * Real(cf.q[n + 1]), Real(1)) << "n=" << n;
      } catch (const ResourceLimit&) {
        break;  // exact product beyond 64 bits
      }
      EXPECT_LT(r.value() * static_cast<long double>(cf.q[n + 1]), 1.0L);
      ++checked;
    }
    EXPECT_GE(checked, 15);
  }
}

TEST(Coding, SturmianGoldenExamples) {
  auto params = CodingParams::sturmian(RotationNumber::golden_mean(), Real(0));
  EXPECT_EQ(coding_letter(params, 0), Letter::b);
  EXPECT_EQ(coding_letter(params, 1), Letter::a);
  std::string s;
  for (long n = 1; n <= 8; ++n) s += to_char(coding_letter(params, n));
  EXPECT_EQ(s, "abaababa");
}

TEST(Coding, NegativeIndicesAgreeWithLongDoubleDefinition) {
  auto theta = RotationNumber::golden_mean();
  auto params = CodingParams::sturmian(theta, Real(QuadraticNumber::rational(1, 7)));
  for (long n = -500; n <= 500; ++n)
    EXPECT_EQ(to_char(coding_letter(params, n)), oracle::sturmian_letter(theta.value().value(), 1.0L / 7.0L, n));
}

// Sturmian word at beta = theta equals the Fibonacci fixed point.
TEST(Property, SturmianAgreesWithFibonacciSubstitution) {
  auto theta = RotationNumber::golden_mean();
  auto params = CodingParams::sturmian(theta, theta.value());
  std::string fib = oracle::fibonacci_word(10000);
  std::string lib = fixed_point_prefix(SubstitutionRule::fibonacci(), 20).str();
  ASSERT_GE(lib.size(), 10000u);
  for (long n = 0; n < 10000; ++n) {
    char c = to_char(coding_letter(params, n));
    ASSERT_EQ(c, fib[static_cast<std::size_t>(n)]) << n;
    ASSERT_EQ(c, lib[static_cast<std::size_t>(n)]) << n;
  }
}

TEST(Coding, HalfOpenIntervalEndpoints) {
  auto theta = RotationNumber::golden_mean();
  CircleInterval I{Real(QuadraticNumber::rational(1, 4)), Real(QuadraticNumber::rational(1, 2))};
  CodingParams lo_hit(theta, Real(QuadraticNumber::rational(1, 4)), I);
  CodingParams hi_hit(theta, Real(QuadraticNumber::rational(1, 2)), I);
  EXPECT_EQ(coding_letter(lo_hit, 0), Letter::a);
  EXPECT_EQ(coding_letter(hi_hit, 0), Letter::b);
}

TEST(Coding, WrappingInterval) {
  auto theta = RotationNumber::silver();
  CircleInterval I{Real(QuadraticNumber::rational(3, 4)), Real(QuadraticNumber::rational(1, 4))};
  EXPECT_TRUE(I.contains(Real(QuadraticNumber::rational(9, 10))));
  EXPECT_TRUE(I.contains(Real(0)));
  EXPECT_FALSE(I.contains(Real(QuadraticNumber::rational(1, 4))));
  EXPECT_FALSE(I.contains(Real(QuadraticNumber::rational(1, 2))));
  EXPECT_NO_THROW(CodingParams(theta, Real(0), I));
}

TEST(Coding, RejectsDegenerateIntervals) {
  auto theta = RotationNumber::golden_mean();
  EXPECT_THROW(CodingParams(theta, Real(0), CircleInterval{Real(0), Real(0)}), InvalidArgument);
  EXPECT_THROW(CodingParams(theta, Real(0), CircleInterval{Real(0), Real(1)}), InvalidArgument);
}

TEST(RotationNumber, Parse) {
  EXPECT_TRUE(RotationNumber::parse("golden").is_golden_mean());
  EXPECT_TRUE(RotationNumber::parse("golden").is_exact());
  EXPECT_NEAR(static_cast<double>(RotationNumber::parse("sqrt2-1").value().value() - (std::sqrt(2.0L) - 1.0L)), 0.0, 1e-18);
  EXPECT_NEAR(RotationNumber::parse("quadratic:-1,1,2,5").value().to_double(), 0.6180339887498949, 1e-16);
  EXPECT_FALSE(RotationNumber::parse("0.3183098861837907").is_exact());
  EXPECT_THROW(RotationNumber::parse("quadratic:1,2"), InvalidArgument);
  EXPECT_THROW(RotationNumber::parse("pi"), InvalidArgument);
}
