#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_complex.hpp>

#include <flrw_dirac/initial_data.hpp>
#include <flrw_dirac/kernels.hpp>
#include <flrw_dirac/quadrature.hpp>
#include <flrw_dirac/solver.hpp>

#include "support.hpp"

using namespace flrw;
using namespace flrw::testing;

namespace {

using mp_complex = boost::multiprecision::cpp_complex_50;
using mp_real = boost::multiprecision::cpp_bin_float_50;

KernelEval make_ke(double ell, cplx m, double eps = 1.0) {
  KernelEval ke;
  ke.cosmology = {ell, 1.0};
  ke.m = m;
  ke.epsilon = eps;
  return ke;
}

mp_real mp_phi(double ell, double t) {
  return pow(mp_real(t), mp_real(1) - mp_real(ell)) / (mp_real(1) - mp_real(ell));
}

// K1 evaluated in 50-digit arithmetic from its defining formula.
cplx k1_oracle(double r, double t, double ell, cplx m, double eps) {
  const mp_complex a = mp_complex(0, 1) * mp_complex(m.real(), m.imag()) / (mp_real(1) - mp_real(ell));
  const mp_real pt = mp_phi(ell, t), pe = mp_phi(ell, eps), R(r);
  const mp_real num = (pt - pe) * (pt - pe) - R * R;
  const mp_real den = (pt + pe) * (pt + pe) - R * R;
  const mp_real z = num / den;
  mp_complex term(1), f(1);
  for (int n = 0; n < 100000; ++n) {
    term *= (a + n) * (a + n) / (mp_real(n + 1) * mp_real(n + 1)) * z;
    f += term;
    if (abs(term) < mp_real("1e-40")) break;
  }
  const mp_complex v = exp(mp_real(2) * a * log(mp_real(2))) * exp((mp_real(2) * a - mp_real(1)) * log(pe)) *
                       exp(-a * log(den)) * f;
  return {static_cast<double>(v.real()), static_cast<double>(v.imag())};
}

}  // namespace

TEST(Kernels, MasslessK1IsInversePhi) {
  const auto ke = make_ke(0.5, 0.0, 1.3);
  const double pe = phi(ke.cosmology, 1.3);
  for (double t : {1.3, 2.0, 5.0}) {
    const double span = phi(ke.cosmology, t) - pe;
    for (double f : {0.0, 0.3, 0.9, 1.0}) {
      EXPECT_NEAR(std::abs(kernel_K1(f * span, t, ke) - cplx(1.0 / pe)), 0.0, 1e-14);
    }
  }
}

TEST(Kernels, ConeEdgeReducesToPrefactors) {
  const auto ke = make_ke(2.0 / 3.0, {0.4, 0.15});
  const double t = 3.0;
  const double pt = phi(ke.cosmology, t), pe = phi(ke.cosmology, 1.0);
  const cplx a = kI * ke.m / (1.0 - 2.0 / 3.0);
  const cplx expect = std::exp((a - 1.0) * std::log(pe)) * std::exp(-a * std::log(pt));
  EXPECT_LT(std::abs(kernel_K1(pt - pe, t, ke) - expect), 1e-13 * std::abs(expect));
}

TEST(Kernels, ComplexMassMatchesOracle) {
  const auto ke = make_ke(0.5, {0.0, 0.2});
  const cplx ref = k1_oracle(0.0, 2.0, 0.5, {0.0, 0.2}, 1.0);
  EXPECT_LT(std::abs(kernel_K1(0.0, 2.0, ke) - ref), 1e-10 * std::abs(ref));
  for (double r : {0.1, 0.5, 0.8}) {
    const auto k2 = make_ke(2.0 / 3.0, {0.5, 0.1});
    const cplx o = k1_oracle(r, 2.5, 2.0 / 3.0, {0.5, 0.1}, 1.0);
    EXPECT_LT(std::abs(kernel_K1(r, 2.5, k2) - o), 1e-10 * std::abs(o)) << r;
  }
}

TEST(Kernels, RealMassPowersAreUnimodular) {
  const auto ke = make_ke(0.5, 0.7);
  const double t = 4.0;
  const double pt = phi(ke.cosmology, t), pe = phi(ke.cosmology, 1.0);
  for (double r : {0.0, 0.5, 1.5}) {
    const double z = ((pt - pe) * (pt - pe) - r * r) / ((pt + pe) * (pt + pe) - r * r);
    const cplx a = kI * 0.7 / 0.5;
    const cplx f = hyp2f1({a, a, 1.0, z});
    EXPECT_NEAR(std::abs(kernel_K1(r, t, ke)), std::abs(f) / pe, 1e-12 * std::abs(f) / pe);
    const cplx w = std::exp(-a * std::log((pt + pe) * (pt + pe) - r * r));
    EXPECT_NEAR(std::abs(w), 1.0, 1e-12);
  }
}

TEST(Kernels, KernelEExamples) {
  const double ell = 0.5;
  const auto k0 = make_ke(ell, 0.0);
  const double t0 = 1.5, t = 3.0;
  const double expect = 0.5 * std::pow(1.0 - ell, ell / (1.0 - ell)) *
                        std::pow(phi(k0.cosmology, t0), ell / (1.0 - ell));
  for (double r : {0.0, 0.4}) EXPECT_NEAR(std::abs(kernel_E(r, t, t0, k0) - cplx(expect)), 0.0, 1e-14);

  // t = t0, r = 0: z = 0 and only the prefactors remain.
  const auto km = make_ke(ell, {0.3, -0.2});
  const cplx a = kI * km.m / (1.0 - ell);
  const double p0 = phi(km.cosmology, t0);
  const cplx direct = std::exp((2.0 * a - 1.0) * std::log(2.0)) *
                      std::exp(ell / (1.0 - ell) * std::log(1.0 - ell)) *
                      std::exp((ell / (1.0 - ell) + 2.0 * a) * std::log(p0)) *
                      std::exp(-a * std::log(4.0 * p0 * p0));
  EXPECT_LT(std::abs(kernel_E(0.0, t0, t0, km) - direct), 1e-13 * std::abs(direct));
  EXPECT_THROW(kernel_E(10.0, t, t0, km), std::domain_error);
  EXPECT_THROW(kernel_E(0.0, 1.0, t0, km), std::domain_error);
}

TEST(Kernels, OutOfDomain) {
  EXPECT_THROW(make_ke(1.0, 0.0).validate(), std::domain_error);
  EXPECT_THROW(kernel_K1(0.0, 2.0, make_ke(1.2, 0.0)), std::domain_error);
  auto ke = make_ke(0.5, 0.0);
  ke.cosmology.a0 = 2.0;
  EXPECT_THROW(ke.validate(), std::domain_error);
  EXPECT_THROW(kernel_K1(5.0, 2.0, make_ke(0.5, 0.0)), std::domain_error);
  EXPECT_THROW(require_kernel_mode(make_ke(0.5, 0.0), 60.0), std::domain_error);
  EXPECT_THROW(require_kernel_mode(make_ke(-0.5, 0.0), 2.0), std::domain_error);
  EXPECT_NO_THROW(require_kernel_mode(make_ke(0.5, 0.0), 50.0));
}

TEST(Kernels, TimeDerivativeMatchesFiniteDifference) {
  const auto ke = make_ke(0.5, {0.3, 0.1});
  const double t = 2.5, r = 0.4, h = 1e-4 * t;
  const cplx fd = (-kernel_K1(r, t + 2 * h, ke) + 8.0 * kernel_K1(r, t + h, ke) -
                   8.0 * kernel_K1(r, t - h, ke) + kernel_K1(r, t - 2 * h, ke)) / (12.0 * h);
  EXPECT_LT(std::abs(kernel_K1_dt(r, t, ke) - fd), 1e-8 * std::abs(fd));
}

TEST(Kernels, MasslessMultiplierClosedForm) {
  const double ell = 0.5, eps = 1.0;
  const auto ke = make_ke(ell, 0.0, eps);
  const double t = 3.0;
  const double span = phi(ke.cosmology, t) - phi(ke.cosmology, eps);
  const cplx pref = -kI * std::pow(eps, 1.0 + ell / 2.0) / (1.0 - ell) / phi(ke.cosmology, eps);
  for (double xi : {0.0, 0.7, 2.0, 5.5}) {
    const double s = xi == 0.0 ? span : std::sin(xi * span) / xi;
    EXPECT_LT(std::abs(k1_multiplier(xi, t, ke) - pref * s), 1e-9) << xi;
  }
}

TEST(Kernels, ZeroModeMultiplierIsKernelIntegral) {
  const double ell = 2.0 / 3.0;
  const auto ke = make_ke(ell, {0.4, 0.2});
  const double t = 2.0;
  const double span = phi(ke.cosmology, t) - phi(ke.cosmology, 1.0);
  const std::function<cplx(double)> f = [&](double r) { return kernel_K1(r, t, ke); };
  const cplx integral = integrate_adaptive<cplx>(f, 0.0, span, 1e-13);
  const cplx pref = -kI * std::exp((1.0 + ell / 2.0 - kI * ke.m) * std::log(ke.epsilon)) / (1.0 - ell);
  EXPECT_LT(std::abs(k1_multiplier(0.0, t, ke) - pref * integral), 1e-10);
}

TEST(Kernels, SphericalMeanOracleForWaveAction) {
  // d/dr (r M_r[e^{i xi.x}]) averaged over the unit sphere equals cos(r|xi|).
  const std::array<double, 3> xi{0.8, -1.1, 0.5};
  const double xn = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
  const auto& th = gauss_legendre(40);
  const int nphi = 80;
  auto wave_action = [&](double r) {
    cplx acc = 0.0;
    for (std::size_t i = 0; i < th.nodes.size(); ++i) {
      const double ct = th.nodes[i], st = std::sqrt(1.0 - ct * ct);
      for (int j = 0; j < nphi; ++j) {
        const double ph = 2.0 * std::numbers::pi * j / nphi;
        const double dot = xi[0] * st * std::cos(ph) + xi[1] * st * std::sin(ph) + xi[2] * ct;
        acc += th.weights[i] * (2.0 * std::numbers::pi / nphi) * std::exp(kI * (r * dot)) *
               (1.0 + kI * (r * dot));
      }
    }
    return acc / (4.0 * std::numbers::pi);
  };
  for (double r : {0.0, 0.3, 1.0, 2.2}) {
    EXPECT_LT(std::abs(wave_action(r) - cplx(std::cos(r * xn))), 1e-8) << r;
  }
  // The multiplier built on cos(r|xi|) agrees with the sphere-averaged action.
  const auto ke = make_ke(0.5, {0.3, 0.0});
  const double t = 2.0;
  const double span = phi(ke.cosmology, t) - phi(ke.cosmology, 1.0);
  const auto rule = composite_gauss_legendre(0.0, span, 8, 16);
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    acc += rule.weights[i] * kernel_K1(rule.nodes[i], t, ke) * wave_action(rule.nodes[i]);
  const cplx pref = -kI * std::exp((1.5 - kI * ke.m) * std::log(1.0)) / 0.5;
  EXPECT_LT(std::abs(k1_multiplier(xn, t, ke) - pref * acc), 1e-8);
}

TEST(Kernels, MultiplierTableSelfCheck) {
  const Grid g{3, 8, 6.0};
  const auto ke = make_ke(0.5, {0.3, 0.05});
  const auto tab = k1_multipliers(g, 2.0, ke, true);
  EXPECT_FALSE(tab.value.empty());
  EXPECT_EQ(tab.value.size(), tab.dt.size());
  EXPECT_NEAR(tab.k0, 2.0 * std::numbers::pi / 6.0, 1e-15);
  for (const auto& [key, v] : tab.value) {
    EXPECT_LT(std::abs(v - k1_multiplier(tab.k0 * std::sqrt(double(key)), 2.0, ke)), 1e-10);
  }
}

TEST(Kernels, K1OperatorVanishesAtEpsilon) {
  const Grid g{3, 8, 6.0};
  ScalarField s(g);
  for (std::size_t i = 0; i < g.points(); ++i) s.data[i] = std::exp(-norm_sq({g.position(i)[0], 0, 0, 0}));
  const auto out = apply_K1_operator(s, 1.0, make_ke(0.5, 0.3));
  for (auto v : out.data) EXPECT_EQ(v, cplx(0.0));
}

TEST(Kernels, ReconstructionAtEpsilonIsIdentity) {
  const Grid g{3, 16, 12.0};
  InitialDataSpec s;
  s.family = InitialFamily::random_gaussian;
  s.width = 1.5;
  s.seed = 3;
  const auto psi1 = make_initial_data(s, g, 1.0);
  const auto ke = make_ke(0.5, {0.3, 0.1});
  EXPECT_LT(rel_l2(reconstruct_free(psi1, 1.0, ke), psi1), 1e-12);
  EXPECT_LT(rel_l2(reconstruct_free(psi1, 1.001, ke), psi1), 1e-2);
  SpinorField wrong = psi1;
  wrong.time = 1.5;
  EXPECT_THROW(reconstruct_free(wrong, 2.0, ke), std::invalid_argument);
}

TEST(Kernels, ReconstructionOfConstantDataMatchesOde) {
  const Grid g{3, 8, 6.0};
  const Spinor p{1.0, cplx(0, 0.5), -0.5, 0.25};
  const double ell = 0.5;
  const cplx m{0.3, 0.1};
  const auto out = reconstruct_free(constant_field(g, p), 2.0, make_ke(ell, m));
  const double t = 2.0;
  const cplx up = std::pow(t, -1.5 * ell) * std::exp(-kI * m * std::log(t));
  const cplx lo = std::pow(t, -1.5 * ell) * std::exp(kI * m * std::log(t));
  const Spinor ex{up * p[0], up * p[1], lo * p[2], lo * p[3]};
  EXPECT_LT(max_abs(out, constant_field(g, ex, 2.0)), 1e-8);
}

class KernelSolverOracle : public ::testing::TestWithParam<std::tuple<double, cplx, double>> {};

TEST_P(KernelSolverOracle, AgreesWithPropagate) {
  const auto [ell, m, tol] = GetParam();
  const Grid g{3, 32, 16.0};
  InitialDataSpec s;
  s.family = InitialFamily::random_gaussian;
  s.width = 1.5;
  s.seed = 11;
  const auto psi1 = make_initial_data(s, g, 1.0);
  const auto kern = reconstruct_free(psi1, 2.0, make_ke(ell, m));
  Model md;
  md.cosmology = {ell, 1.0};
  md.mass = m;
  const auto sol = evolve(psi1, 2.0, md, 0.5, 0.02);
  EXPECT_LT(rel_l2(kern, sol), tol);
}

INSTANTIATE_TEST_SUITE_P(Cases, KernelSolverOracle,
                         ::testing::Values(std::make_tuple(0.5, cplx(0.0, 0.0), 1e-3),
                                           std::make_tuple(0.5, cplx(0.3, 0.0), 1e-4),
                                           std::make_tuple(2.0 / 3.0, cplx(0.5, 0.1), 1e-3)));

TEST(Kernels, GOperatorTrivialCases) {
  const Grid g{3, 8, 6.0};
  const auto ke = make_ke(0.5, 0.3);
  const ScalarSourceProvider zero = [](double, ScalarField& out) {
    std::fill(out.data.begin(), out.data.end(), cplx{});
  };
  for (auto v : apply_G_operator(zero, g, 2.0, ke).data) EXPECT_EQ(v, cplx(0.0));
  const ScalarSourceProvider one = [](double, ScalarField& out) {
    std::fill(out.data.begin(), out.data.end(), cplx{1.0});
  };
  for (auto v : apply_G_operator(one, g, 1.0, ke).data) EXPECT_EQ(v, cplx(0.0));
}

TEST(Kernels, GOperatorMatchesScalarQuadratureOracle) {
  const Grid g{3, 8, 2.0 * std::numbers::pi};
  const double ell = 0.5, t = 2.0;
  const auto ke = make_ke(ell, {0.3, 0.1});
  const std::array<int, 3> q{1, 2, 0};
  const ScalarSourceProvider src = [&](double, ScalarField& out) {
    for (std::size_t i = 0; i < g.points(); ++i) {
      const auto x = g.position(i);
      out.data[i] = std::exp(kI * (q[0] * x[0] + q[1] * x[1] + q[2] * x[2]));
    }
  };
  const auto res = apply_G_operator(src, g, t, ke);
  const double xn = std::sqrt(5.0);
  const std::function<cplx(double)> outer = [&](double b) {
    const double span = phi(ke.cosmology, t) - phi(ke.cosmology, b);
    const std::function<cplx(double)> inner = [&](double r) {
      return kernel_E(r, t, b, ke) * std::cos(r * xn);
    };
    const cplx in = span > 0.0 ? integrate_adaptive<cplx>(inner, 0.0, span, 1e-13) : cplx{};
    return std::exp((ell / 2.0 - kI * ke.m) * std::log(b)) * in;
  };
  const cplx amp = -2.0 * integrate_adaptive<cplx>(outer, 1.0, t, 1e-12);
  ScalarField ex(g);
  src(0.0, ex);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.points(); ++i) worst = std::max(worst, std::abs(res.data[i] - amp * ex.data[i]));
  EXPECT_LT(worst, 1e-8);
}
