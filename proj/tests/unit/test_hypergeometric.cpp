#include <gtest/gtest.h>

#include <cmath>

#include <boost/multiprecision/cpp_complex.hpp>

#include <flrw_dirac/hypergeometric.hpp>

using namespace flrw;
using cd = std::complex<double>;

namespace {

using mp_complex = boost::multiprecision::cpp_complex_50;
using mp_real = boost::multiprecision::cpp_bin_float_50;

// Gauss series in 50-digit arithmetic, summed until terms fall below 1e-40.
cd oracle(cd a, cd b, cd c, double z) {
  const mp_complex A(a.real(), a.imag()), B(b.real(), b.imag()), C(c.real(), c.imag());
  const mp_real Z(z);
  mp_complex term(1), sum(1);
  for (int n = 0; n < 200000; ++n) {
    term *= (A + n) * (B + n) / ((C + n) * mp_real(n + 1)) * Z;
    sum += term;
    if (abs(term) < mp_real("1e-40") * abs(sum)) break;
  }
  return {static_cast<double>(sum.real()), static_cast<double>(sum.imag())};
}

}  // namespace

TEST(Hyp2F1, TrivialValues) {
  EXPECT_EQ(hyp2f1({cd(0, 0.4), cd(0, 0.4), 1.0, 0.0}), cd(1.0));
  for (double z : {0.1, 0.5, 0.9}) {
    EXPECT_EQ(hyp2f1({0.0, 0.0, 1.0, z}), cd(1.0));
  }
  // 2F1(1,1;2;z) = -ln(1-z)/z
  EXPECT_NEAR(std::abs(hyp2f1({1.0, 1.0, 2.0, 0.5}) - cd(-std::log(0.5) / 0.5)), 0.0, 1e-14);
}

TEST(Hyp2F1, MatchesHighPrecisionOracle) {
  const cd a(0.0, 0.3);
  const cd ref = oracle(a, a, 1.0, 0.5);
  EXPECT_LT(std::abs(hyp2f1({a, a, 1.0, 0.5}) - ref), 1e-10 * std::abs(ref));
  double worst = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double mu = -1.0 + 2.0 * i / 9.0;
    for (int j = 0; j < 10; ++j) {
      const double z = 0.9 * j / 9.0;
      const cd am(0.0, mu);
      const cd r = oracle(am, am, 1.0, z);
      worst = std::max(worst, std::abs(hyp2f1({am, am, 1.0, z}) - r) / std::abs(r));
    }
  }
  EXPECT_LT(worst, 1e-10);
}

TEST(Hyp2F1, DerivativeIdentity) {
  for (double mu : {-0.8, 0.3, 1.0}) {
    const cd a(0.0, mu);
    for (double z : {0.1, 0.5, 0.9 * kHyp2F1ZMax}) {
      const double h = 1e-4;
      const cd fd = (-hyp2f1({a, a, 1.0, z + 2 * h}) + 8.0 * hyp2f1({a, a, 1.0, z + h}) -
                     8.0 * hyp2f1({a, a, 1.0, z - h}) + hyp2f1({a, a, 1.0, z - 2 * h})) /
                    (12.0 * h);
      const cd an = hyp2f1_derivative({a, a, 1.0, z});
      EXPECT_LT(std::abs(an - fd), 1e-8 * std::abs(an)) << mu << " " << z;
      EXPECT_LT(std::abs(an - a * a * hyp2f1({a + 1.0, a + 1.0, 2.0, z})), 1e-14 * std::abs(an));
    }
  }
}

TEST(Hyp2F1, GaussContiguousRelation) {
  // c(c-1)(z-1)F(c-1) + c[c-1-(2c-a-b-1)z]F(c) + (c-a)(c-b)z F(c+1) = 0 at c = 2
  for (double mu : {-1.0, 0.25, 0.6}) {
    const cd a(0.0, mu), c(2.0);
    for (double z : {0.2, 0.7, 0.93}) {
      const cd f0 = hyp2f1({a, a, c - 1.0, z});
      const cd f1 = hyp2f1({a, a, c, z});
      const cd f2 = hyp2f1({a, a, c + 1.0, z});
      const cd lhs = c * (c - 1.0) * (z - 1.0) * f0 + c * (c - 1.0 - (2.0 * c - 2.0 * a - 1.0) * z) * f1 +
                     (c - a) * (c - a) * z * f2;
      EXPECT_LT(std::abs(lhs), 1e-12 * (std::abs(f0) + std::abs(f1) + std::abs(f2))) << mu << " " << z;
    }
  }
}

TEST(Hyp2F1, DomainErrors) {
  EXPECT_THROW(hyp2f1({cd(0, 1), cd(0, 1), 1.0, 0.96}), Hyp2F1Error);
  EXPECT_THROW(hyp2f1({cd(0, 1), cd(0, 1), -2.0, 0.5}), Hyp2F1Error);
  EXPECT_THROW(hyp2f1({cd(0, 1), cd(0, 1), 1.0, 0.94}, kHyp2F1ZMax, 5), Hyp2F1Error);
  EXPECT_NO_THROW(hyp2f1({cd(0, 1), cd(0, 1), 1.0, 0.95}));
}
