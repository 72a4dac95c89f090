#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <flrw_dirac/quadrature.hpp>

using namespace flrw;

TEST(Quadrature, GaussLegendreExactForPolynomials) {
  for (int n : {2, 5, 8, 10, 16}) {
    const auto& r = gauss_legendre(n);
    ASSERT_EQ(r.nodes.size(), static_cast<std::size_t>(n));
    for (int p = 0; p <= 2 * n - 1; ++p) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += r.weights[i] * std::pow(r.nodes[i], p);
      const double exact = p % 2 ? 0.0 : 2.0 / (p + 1);
      EXPECT_NEAR(acc, exact, 1e-14) << n << " " << p;
    }
  }
  EXPECT_THROW(gauss_legendre(0), std::invalid_argument);
}

TEST(Quadrature, MappedAndComposite) {
  const auto r = mapped_rule(gauss_legendre(8), 1.0, 3.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < r.nodes.size(); ++i) acc += r.weights[i] * std::exp(r.nodes[i]);
  EXPECT_NEAR(acc, std::exp(3.0) - std::exp(1.0), 1e-12);
  const auto c = composite_gauss_legendre(0.0, std::numbers::pi, 6, 8);
  EXPECT_EQ(c.nodes.size(), 48u);
  acc = 0.0;
  for (std::size_t i = 0; i < c.nodes.size(); ++i) acc += c.weights[i] * std::sin(10.0 * c.nodes[i]);
  EXPECT_NEAR(acc, (1.0 - std::cos(10.0 * std::numbers::pi)) / 10.0, 1e-12);
}

TEST(Quadrature, AdaptiveReal) {
  const std::function<double(double)> f = [](double x) { return 1.0 / std::sqrt(x + 1e-3); };
  const double v = integrate_adaptive<double>(f, 0.0, 1.0, 1e-12);
  EXPECT_NEAR(v, 2.0 * (std::sqrt(1.001) - std::sqrt(1e-3)), 1e-11);
  EXPECT_EQ(integrate_adaptive<double>(f, 0.5, 0.5, 1e-12), 0.0);
}

TEST(Quadrature, AdaptiveComplex) {
  const std::function<std::complex<double>(double)> f = [](double x) {
    return std::exp(std::complex<double>(0.0, 7.0 * x));
  };
  const auto v = integrate_adaptive<std::complex<double>>(f, 0.0, 2.0, 1e-13);
  const auto exact = (std::exp(std::complex<double>(0.0, 14.0)) - 1.0) / std::complex<double>(0.0, 7.0);
  EXPECT_LT(std::abs(v - exact), 1e-12);
}

TEST(Quadrature, AdaptiveReportsNonconvergence) {
  const std::function<double(double)> f = [](double x) { return x > 0.5 ? 1.0 / (x - 0.5) : 0.0; };
  EXPECT_THROW(integrate_adaptive<double>(f, 0.0, 1.0, 1e-14, 0.0, 6), QuadratureError);
}

TEST(Quadrature, CumulativeIntegralFourthOrder) {
  auto err_for = [](int n) {
    std::vector<double> t(n + 1), y(n + 1);
    for (int i = 0; i <= n; ++i) {
      t[i] = 1.0 + 9.0 * std::pow(static_cast<double>(i) / n, 1.3);
      y[i] = std::cos(t[i]) * t[i];
    }
    const auto c = cumulative_integral(t, y);
    double e = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double exact = (std::cos(t[i]) + t[i] * std::sin(t[i])) - (std::cos(1.0) + std::sin(1.0));
      e = std::max(e, std::abs(c[i] - exact));
    }
    return e;
  };
  const double e1 = err_for(40), e2 = err_for(80);
  EXPECT_LT(e2, 1e-4);
  EXPECT_GT(std::log2(e1 / e2), 3.5);
  // Cubics are integrated exactly.
  std::vector<double> t{0.0, 0.3, 0.5, 1.2, 1.3, 2.0}, y;
  for (double s : t) y.push_back(s * s * s - 2 * s + 1);
  const auto c = cumulative_integral(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double s = t[i];
    EXPECT_NEAR(c[i], s * s * s * s / 4 - s * s + s, 1e-13);
  }
  EXPECT_EQ(cumulative_integral({1.0}, {2.0}).at(0), 0.0);
  EXPECT_NEAR(cumulative_integral({1.0, 2.0}, {2.0, 4.0}).at(1), 3.0, 1e-13);
}
