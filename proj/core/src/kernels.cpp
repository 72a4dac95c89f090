#include "flrw_dirac/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "flrw_dirac/fourier.hpp"
#include "flrw_dirac/quadrature.hpp"

namespace flrw {

void KernelEval::validate() const {
  cosmology.validate();
  if (cosmology.a0 != 1.0) throw std::domain_error("kernels require a0 = 1");
  if (cosmology.is_log() || !(cosmology.ell < 1.0))
    throw std::domain_error("kernels require ell < 1");
  if (!(epsilon > 0.0)) throw std::domain_error("kernel epsilon must be positive");
  if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
    throw std::domain_error("kernel mass must be finite");
}

KernelEval KernelEval::negated_mass() const {
  KernelEval k = *this;
  k.m = -m;
  return k;
}

void require_kernel_mode(const KernelEval& ke, double t) {
  ke.validate();
  if (!(ke.cosmology.ell > 0.0 && ke.cosmology.ell < 1.0))
    throw std::domain_error("kernel mode requires 0 < ell < 1");
  if (t / ke.epsilon > 50.0) throw std::domain_error("kernel mode requires t/epsilon <= 50");
}

namespace {

struct ConeArgs {
  double phi_t;
  double phi_0;
  double r;
  double Q;
  double P;
  double z;
};

ConeArgs cone_args(double r, double t, double t0, const KernelEval& ke) {
  if (!(t >= t0)) throw std::domain_error("kernel requires t >= t0");
  const double pt = phi(ke.cosmology, t);
  const double p0 = phi(ke.cosmology, t0);
  const double span = pt - p0;
  if (r < 0.0 || r > span * (1.0 + 1e-12) + 1e-15)
    throw std::domain_error("kernel radius outside the cone");
  r = std::min(r, span);
  ConeArgs c{pt, p0, r, 0.0, 0.0, 0.0};
  c.Q = (pt + p0) * (pt + p0) - r * r;
  c.P = std::max(0.0, span * span - r * r);
  c.z = c.P / c.Q;
  return c;
}

cplx exponent_a(const KernelEval& ke) {
  return kI * ke.m / (1.0 - ke.cosmology.ell);
}

cplx cpow_pos(double base, cplx e) { return std::exp(e * std::log(base)); }

}  // namespace

cplx kernel_E(double r, double t, double t0, const KernelEval& ke) {
  ke.validate();
  const ConeArgs c = cone_args(r, t, t0, ke);
  const double l = ke.cosmology.ell;
  const cplx a = exponent_a(ke);
  const cplx pref = cpow_pos(2.0, 2.0 * a - 1.0) * std::pow(1.0 - l, l / (1.0 - l)) *
                    cpow_pos(c.phi_0, l / (1.0 - l) + 2.0 * a);
  return pref * cpow_pos(c.Q, -a) * hyp2f1({a, a, 1.0, c.z});
}

cplx kernel_K1(double r, double t, const KernelEval& ke) {
  ke.validate();
  const ConeArgs c = cone_args(r, t, ke.epsilon, ke);
  const cplx a = exponent_a(ke);
  const cplx pref = cpow_pos(2.0, 2.0 * a) * cpow_pos(c.phi_0, 2.0 * a - 1.0);
  return pref * cpow_pos(c.Q, -a) * hyp2f1({a, a, 1.0, c.z});
}

cplx kernel_K1_dt(double r, double t, const KernelEval& ke) {
  ke.validate();
  const ConeArgs c = cone_args(r, t, ke.epsilon, ke);
  const cplx a = exponent_a(ke);
  const double tl = std::pow(t, -ke.cosmology.ell);
  const double dQ = 2.0 * (c.phi_t + c.phi_0) * tl;
  const double dP = 2.0 * (c.phi_t - c.phi_0) * tl;
  const double dz = (dP * c.Q - c.P * dQ) / (c.Q * c.Q);
  const cplx pref = cpow_pos(2.0, 2.0 * a) * cpow_pos(c.phi_0, 2.0 * a - 1.0);
  const Hyp2F1Params hp{a, a, 1.0, c.z};
  const cplx qa = cpow_pos(c.Q, -a);
  return pref * (-a * qa / c.Q * dQ * hyp2f1(hp) + qa * hyp2f1_derivative(hp) * dz);
}

long mode_key(const Grid& g, std::size_t idx) {
  const auto ijk = g.unravel(idx);
  long s = 0;
  for (int d = 0; d < g.dim; ++d) {
    const int i = ijk[d];
    if (i == g.n / 2) continue;
    const long k = i < g.n / 2 ? i : i - g.n;
    s += k * k;
  }
  return s;
}

namespace {

constexpr int kRuleOrder = 16;
constexpr int kMaxPanels = 4096;

struct CosineTable {
  std::vector<cplx> values;
  int panels;
};

/// Integrals of g(r) cos(r xi) over [0, upper] for each xi, refining a
/// composite Gauss-Legendre rule until successive levels agree within tol.
CosineTable cosine_integrals(const std::function<cplx(double)>& g, double upper,
                             const std::vector<double>& xis, double tol) {
  CosineTable out{std::vector<cplx>(xis.size()), 0};
  if (upper <= 0.0) return out;
  std::vector<cplx> prev;
  for (int panels = 1; panels <= kMaxPanels; panels *= 2) {
    const QuadratureRule rule = composite_gauss_legendre(0.0, upper, panels, kRuleOrder);
    std::vector<cplx> gv(rule.nodes.size());
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      gv[q] = g(rule.nodes[q]) * rule.weights[q];
    std::vector<cplx> cur(xis.size());
    for (std::size_t k = 0; k < xis.size(); ++k) {
      cplx acc{};
      for (std::size_t q = 0; q < rule.nodes.size(); ++q)
        acc += gv[q] * std::cos(rule.nodes[q] * xis[k]);
      cur[k] = acc;
    }
    if (!prev.empty()) {
      double diff = 0.0;
      for (std::size_t k = 0; k < xis.size(); ++k) diff = std::max(diff, std::abs(cur[k] - prev[k]));
      if (diff <= tol) {
        out.values = std::move(cur);
        out.panels = panels;
        return out;
      }
    }
    prev = std::move(cur);
  }
  throw QuadratureError("kernel r-quadrature did not converge");
}

struct KeySet {
  std::vector<long> keys;
  std::vector<double> xis;
};

KeySet grid_keys(const Grid& g) {
  std::map<long, double> uniq;
  const double k0 = 2.0 * std::numbers::pi / g.box_length;
  for (std::size_t idx = 0; idx < g.points(); ++idx) {
    const long key = mode_key(g, idx);
    uniq.emplace(key, k0 * std::sqrt(static_cast<double>(key)));
  }
  KeySet ks;
  for (const auto& [k, x] : uniq) {
    ks.keys.push_back(k);
    ks.xis.push_back(x);
  }
  return ks;
}

cplx k1_prefactor(const KernelEval& ke) {
  const double l = ke.cosmology.ell;
  return -kI * cpow_pos(ke.epsilon, 1.0 + 0.5 * l - kI * ke.m) / (1.0 - l);
}

struct RawMultipliers {
  std::vector<cplx> value;
  std::vector<cplx> dt;
  int panels;
};

RawMultipliers raw_multipliers(const std::vector<double>& xis, double t,
                               const KernelEval& ke, bool with_dt) {
  const double span = phi(ke.cosmology, t) - phi(ke.cosmology, ke.epsilon);
  const cplx pref = k1_prefactor(ke);
  RawMultipliers out{std::vector<cplx>(xis.size()), std::vector<cplx>(xis.size()), 0};
  const auto val = cosine_integrals([&](double r) { return kernel_K1(r, t, ke); }, span,
                                    xis, ke.quad_tol);
  out.panels = val.panels;
  for (std::size_t k = 0; k < xis.size(); ++k) out.value[k] = pref * val.values[k];
  if (with_dt) {
    const auto der = cosine_integrals([&](double r) { return kernel_K1_dt(r, t, ke); },
                                      span, xis, ke.quad_tol);
    const cplx edge = kernel_K1(span, t, ke) * std::pow(t, -ke.cosmology.ell);
    for (std::size_t k = 0; k < xis.size(); ++k)
      out.dt[k] = pref * (edge * std::cos(span * xis[k]) + der.values[k]);
  }
  return out;
}

}  // namespace

cplx k1_multiplier(double xi_abs, double t, const KernelEval& ke) {
  ke.validate();
  if (!(t >= ke.epsilon)) throw std::domain_error("K1 operator requires t >= epsilon");
  return raw_multipliers({xi_abs}, t, ke, false).value[0];
}

MultiplierTable k1_multipliers(const Grid& g, double t, const KernelEval& ke,
                               bool self_check) {
  ke.validate();
  if (!(t >= ke.epsilon)) throw std::domain_error("K1 operator requires t >= epsilon");
  const KeySet ks = grid_keys(g);
  const RawMultipliers raw = raw_multipliers(ks.xis, t, ke, true);
  MultiplierTable table;
  table.k0 = 2.0 * std::numbers::pi / g.box_length;
  table.panels = raw.panels;
  for (std::size_t k = 0; k < ks.keys.size(); ++k) {
    table.value[ks.keys[k]] = raw.value[k];
    table.dt[ks.keys[k]] = raw.dt[k];
  }
  if (self_check) {
    const double h = 1e-4 * t;
    std::vector<cplx> fd(ks.xis.size());
    if (t - 2.0 * h >= ke.epsilon) {
      const auto m2 = raw_multipliers(ks.xis, t - 2.0 * h, ke, false).value;
      const auto m1 = raw_multipliers(ks.xis, t - h, ke, false).value;
      const auto p1 = raw_multipliers(ks.xis, t + h, ke, false).value;
      const auto p2 = raw_multipliers(ks.xis, t + 2.0 * h, ke, false).value;
      for (std::size_t k = 0; k < fd.size(); ++k)
        fd[k] = (m2[k] - 8.0 * m1[k] + 8.0 * p1[k] - p2[k]) / (12.0 * h);
    } else {
      std::vector<std::vector<cplx>> f;
      for (int j = 0; j <= 4; ++j) f.push_back(raw_multipliers(ks.xis, t + j * h, ke, false).value);
      for (std::size_t k = 0; k < fd.size(); ++k)
        fd[k] = (-25.0 * f[0][k] + 48.0 * f[1][k] - 36.0 * f[2][k] + 16.0 * f[3][k] -
                 3.0 * f[4][k]) / (12.0 * h);
    }
    double scale = 0.0, diff = 0.0;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      scale = std::max(scale, std::abs(raw.dt[k]));
      diff = std::max(diff, std::abs(raw.dt[k] - fd[k]));
    }
    if (diff > 1e-6 * std::max(scale, 1e-300))
      throw std::runtime_error("K1 multiplier derivative failed its finite-difference audit");
  }
  return table;
}

ScalarField apply_K1_operator(const ScalarField& phi0, double t, const KernelEval& ke) {
  if (phi0.grid.dim != 3) throw std::invalid_argument("K1 operator requires a dim=3 grid");
  const MultiplierTable table = k1_multipliers(phi0.grid, t, ke, false);
  ScalarField out = phi0;
  FftPlan plan(phi0.grid, 1);
  plan.forward(out.data.data());
  const double inv_n = 1.0 / static_cast<double>(phi0.grid.points());
  for (std::size_t idx = 0; idx < out.data.size(); ++idx)
    out.data[idx] *= table.value.at(mode_key(phi0.grid, idx)) * inv_n;
  plan.backward(out.data.data());
  return out;
}

SpinorField reconstruct_free(const SpinorField& psi1, double t, const KernelEval& ke,
                             bool self_check) {
  if (psi1.grid.dim != 3) throw std::invalid_argument("reconstruction requires a dim=3 grid");
  if (std::abs(psi1.time - ke.epsilon) > 1e-12 * ke.epsilon)
    throw std::invalid_argument("reconstruction data must be given at t = epsilon");
  const Grid& g = psi1.grid;
  const MultiplierTable plus = k1_multipliers(g, t, ke, self_check);
  const MultiplierTable minus = k1_multipliers(g, t, ke.negated_mass(), self_check);

  SpinorField out = psi1;
  FftPlan plan(g, 4);
  plan.forward(out.data.data());
  const std::size_t n = g.points();
  const double l = ke.cosmology.ell;
  const cplx p = std::exp(kI * ke.m * std::log(t));
  const cplx q = std::exp(-kI * ke.m * std::log(t));
  const cplx c_time = kI * std::pow(t, -0.5 * l);
  const cplx c_space = kI * std::pow(t, -1.5 * l);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const long key = mode_key(g, idx);
    const cplx mp = plus.value.at(key), mm = minus.value.at(key);
    const cplx dp = plus.dt.at(key), dm = minus.dt.at(key);
    const cplx s0 = out.data[idx], s1 = out.data[n + idx];
    const cplx s2 = out.data[2 * n + idx], s3 = out.data[3 * n + idx];
    // U = gamma^0 diag(K1(m) I2, K1(-m) I2) psi, then P U and P dU/dt.
    const cplx pu0 = p * mp * s0, pu1 = p * mp * s1;
    const cplx pu2 = -q * mm * s2, pu3 = -q * mm * s3;
    const cplx pd0 = p * dp * s0, pd1 = p * dp * s1;
    const cplx pd2 = -q * dm * s2, pd3 = -q * dm * s3;
    const auto xi = g.wavevector(idx, true);
    const cplx xm{xi[0], -xi[1]}, xp{xi[0], xi[1]};
    // sum_k gamma^k (i xi_k): upper <- i (sigma.xi) lower, lower <- -i (sigma.xi) upper
    const cplx w0 = kI * (xi[2] * pu2 + xm * pu3);
    const cplx w1 = kI * (xp * pu2 - xi[2] * pu3);
    const cplx w2 = -kI * (xi[2] * pu0 + xm * pu1);
    const cplx w3 = -kI * (xp * pu0 - xi[2] * pu1);
    out.data[idx] = (c_time * pd0 + c_space * w0) * inv_n;
    out.data[n + idx] = (c_time * pd1 + c_space * w1) * inv_n;
    out.data[2 * n + idx] = (-c_time * pd2 + c_space * w2) * inv_n;
    out.data[3 * n + idx] = (-c_time * pd3 + c_space * w3) * inv_n;
  }
  plan.backward(out.data.data());
  out.time = t;
  return out;
}

ScalarField apply_G_operator(const ScalarSourceProvider& source, const Grid& grid,
                             double t, const KernelEval& ke, const GOperatorOptions& opt) {
  ke.validate();
  if (grid.dim != 3) throw std::invalid_argument("G operator requires a dim=3 grid");
  if (!(t >= ke.epsilon)) throw std::domain_error("G operator requires t >= epsilon");
  ScalarField result(grid);
  if (t == ke.epsilon) return result;
  const KeySet ks = grid_keys(grid);
  std::map<long, std::size_t> slot;
  for (std::size_t k = 0; k < ks.keys.size(); ++k) slot[ks.keys[k]] = k;
  const std::size_t n = grid.points();
  std::vector<std::size_t> idx_slot(n);
  for (std::size_t idx = 0; idx < n; ++idx) idx_slot[idx] = slot.at(mode_key(grid, idx));
  FftPlan plan(grid, 1);
  const double l = ke.cosmology.ell;
  const double pt = phi(ke.cosmology, t);

  auto level = [&](int panels) {
    std::vector<cplx> acc(n);
    const QuadratureRule rule = composite_gauss_legendre(ke.epsilon, t, panels, opt.order);
    ScalarField f(grid);
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
      const double b = rule.nodes[j];
      std::fill(f.data.begin(), f.data.end(), cplx{});
      source(b, f);
      plan.forward(f.data.data());
      const double span = pt - phi(ke.cosmology, b);
      const auto inner = cosine_integrals(
          [&](double r) { return kernel_E(r, t, b, ke); }, span, ks.xis, ke.quad_tol);
      const cplx w = -2.0 * rule.weights[j] * cpow_pos(b, 0.5 * l - kI * ke.m);
      for (std::size_t idx = 0; idx < n; ++idx)
        acc[idx] += w * inner.values[idx_slot[idx]] * f.data[idx];
    }
    return acc;
  };

  std::vector<cplx> prev = level(opt.initial_panels);
  for (int panels = 2 * opt.initial_panels; panels <= opt.max_panels; panels *= 2) {
    std::vector<cplx> cur = level(panels);
    double diff = 0.0;
    for (std::size_t i = 0; i < n; ++i) diff = std::max(diff, std::abs(cur[i] - prev[i]));
    // Spectral coefficients carry a factor n relative to grid values.
    if (diff <= opt.tol * static_cast<double>(n)) {
      const double inv_n = 1.0 / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) result.data[i] = cur[i] * inv_n;
      plan.backward(result.data.data());
      return result;
    }
    prev = std::move(cur);
  }
  throw QuadratureError("G operator b-quadrature did not converge");
}

}  // namespace flrw
