#include "flrw_dirac/models.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "flrw_dirac/random.hpp"

namespace flrw {

void PotentialSpec::validate() const {
  if (kind == PotentialKind::zero) return;
  if (!std::isfinite(amplitude)) throw std::invalid_argument("potential.amplitude must be finite");
  if (!(width > 0.0)) throw std::invalid_argument("potential.width must be positive");
  if (!std::isfinite(time_decay)) throw std::invalid_argument("potential.time_decay must be finite");
  if (kind == PotentialKind::custom_matrix && !matrix.is_finite())
    throw std::invalid_argument("potential.matrix must be finite");
}

Mat4C PotentialSpec::structure() const {
  switch (kind) {
    case PotentialKind::zero: return Mat4C::zero();
    case PotentialKind::scalar_bump: return Mat4C::identity();
    case PotentialKind::custom_matrix: return matrix;
  }
  return Mat4C::zero();
}

double PotentialSpec::envelope(const std::array<double, 3>& x, double t) const {
  if (kind == PotentialKind::zero) return 0.0;
  double r2 = 0.0;
  for (int d = 0; d < 3; ++d) r2 += (x[d] - center[d]) * (x[d] - center[d]);
  return amplitude * std::exp(-r2 / (width * width)) * std::pow(t, -time_decay);
}

Mat4C eval_potential(const PotentialSpec& spec, const std::array<double, 3>& x,
                     double t) {
  if (!(t > 0.0)) throw std::domain_error("potential evaluated at nonpositive time");
  return spec.structure() * cplx{spec.envelope(x, t), 0.0};
}

Mat4C imaginary_part(const Mat4C& v) {
  return (v - v.adjoint()) * cplx{0.0, -0.5};
}

namespace {

void check_point(const PotentialSpec& spec, const std::array<double, 3>& x, double t) {
  const Mat4C v = eval_potential(spec, x, t);
  const double scale = std::max(1.0, std::abs(spec.amplitude));
  auto where = [&] {
    std::ostringstream os;
    os << " at x=(" << x[0] << "," << x[1] << "," << x[2] << "), t=" << t;
    return os.str();
  };
  if (spec.hermitian_required && max_abs_diff(v, v.adjoint()) > 1e-12 * scale)
    throw PotentialFlagError("potential is not Hermitian" + where(), x, t);
  if (spec.gamma2_condition_required) {
    const Mat4C& g2 = basis().g2;
    const Mat4C r = v.transpose() * g2 + g2 * v;
    if (max_abs_diff(r, Mat4C::zero()) > 1e-12 * scale)
      throw PotentialFlagError("potential violates V^T g2 + g2 V = 0" + where(), x, t);
  }
}

}  // namespace

void check_potential_flags(const PotentialSpec& spec, const Grid& grid,
                           double t_start, double t_end, std::uint64_t seed,
                           int samples_per_time) {
  if (!spec.hermitian_required && !spec.gamma2_condition_required) return;
  const CounterRng rng(seed, 0x706f74);
  std::vector<double> times{t_start};
  for (int i = 0; i < 8; ++i)
    times.push_back(rng.uniform(1000 + i, t_start, std::max(t_start, t_end)));
  const std::size_t pts = grid.points();
  std::uint64_t ctr = 0;
  for (double t : times) {
    check_point(spec, spec.center, t);
    for (int s = 0; s < samples_per_time; ++s) {
      const auto idx = static_cast<std::size_t>(rng.bits(ctr++) % pts);
      check_point(spec, grid.position(idx), t);
    }
  }
}

std::string to_string(NonlinearityKind k) {
  switch (k) {
    case NonlinearityKind::none: return "none";
    case NonlinearityKind::power_abs: return "power_abs";
    case NonlinearityKind::power_g0g5: return "power_g0g5";
    case NonlinearityKind::lochak_form: return "lochak_form";
    case NonlinearityKind::blowup_G: return "blowup_G";
  }
  return "none";
}

NonlinearityKind nonlinearity_from_string(const std::string& s) {
  for (auto k : {NonlinearityKind::none, NonlinearityKind::power_abs,
                 NonlinearityKind::power_g0g5, NonlinearityKind::lochak_form,
                 NonlinearityKind::blowup_G})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown nonlinearity kind: " + s);
}

BilinearFn bilinear_polynomial(std::vector<BilinearMonomial> terms) {
  for (const auto& m : terms)
    if (m.p < 0 || m.q < 0 || m.p + m.q < 1)
      throw std::invalid_argument("bilinear monomials need nonnegative powers of total degree >= 1");
  return [terms = std::move(terms)](double xi, double eta) {
    double acc = 0.0;
    for (const auto& m : terms) acc += m.coef * std::pow(xi, m.p) * std::pow(eta, m.q);
    return acc;
  };
}

void NonlinearitySpec::validate() const {
  if (kind == NonlinearityKind::none) return;
  if (!(alpha_exp > 0.0)) throw std::invalid_argument("nonlinearity.alpha must be positive");
  if (sign != 1 && sign != -1) throw std::invalid_argument("nonlinearity.sign must be +1 or -1");
  if (kind == NonlinearityKind::blowup_G && !(c0 > 0.0))
    throw std::invalid_argument("nonlinearity.c0 must be positive");
  if (kind == NonlinearityKind::lochak_form) {
    if (!alpha_fn || !beta_fn)
      throw std::invalid_argument("nonlinearity.alpha_fn and beta_fn are required for lochak_form");
    const CounterRng rng(17, 0x6c6f63);
    for (const auto* fn : {&alpha_fn, &beta_fn}) {
      if (std::abs((*fn)(0.0, 0.0)) > 1e-14)
        throw std::invalid_argument("lochak_form functions must vanish at the origin");
      double worst_coarse = 0.0, worst_fine = 0.0;
      for (int i = 0; i < 32; ++i) {
        const double th = rng.uniform(i, 0.0, 2.0 * std::numbers::pi);
        const double c = std::cos(th), s = std::sin(th);
        const double l1 = std::abs(c) + std::abs(s);
        const double v1 = (*fn)(1e-3 * c, 1e-3 * s);
        const double v2 = (*fn)(1e-6 * c, 1e-6 * s);
        if (!std::isfinite(v1) || !std::isfinite(v2))
          throw std::invalid_argument("lochak_form functions must be finite near the origin");
        worst_coarse = std::max(worst_coarse, std::abs(v1) / (1e-3 * l1));
        worst_fine = std::max(worst_fine, std::abs(v2) / (1e-6 * l1));
      }
      if (worst_fine > 10.0 * worst_coarse + 1.0)
        throw std::invalid_argument("lochak_form functions must be O(|xi|+|eta|) at the origin");
    }
  }
}

Spinor nonlinearity_point(const NonlinearitySpec& spec, const Spinor& s) {
  const GammaBasis& b = basis();
  Spinor out{};
  switch (spec.kind) {
    case NonlinearityKind::none:
      return out;
    case NonlinearityKind::power_abs: {
      const double w = spec.sign * std::pow(std::sqrt(norm_sq(s)), spec.alpha_exp);
      for (std::size_t c = 0; c < 4; ++c) out[c] = w * s[c];
      return out;
    }
    case NonlinearityKind::power_g0g5: {
      const Spinor g = flrw::apply(b.g0 * b.g5, s);
      const double w = spec.sign * std::pow(std::sqrt(norm_sq(g)), spec.alpha_exp);
      for (std::size_t c = 0; c < 4; ++c) out[c] = w * s[c];
      return out;
    }
    case NonlinearityKind::lochak_form: {
      const auto d = point_densities(s);
      const double a = spec.alpha_fn(d.xi, d.eta);
      const double be = spec.beta_fn(d.xi, d.eta);
      const Spinor g5s = flrw::apply(b.g5, s);
      for (std::size_t c = 0; c < 4; ++c) out[c] = a * s[c] + kI * be * g5s[c];
      return out;
    }
    case NonlinearityKind::blowup_G: {
      const double w = spec.c0 * std::pow(std::sqrt(norm_sq(s)), spec.alpha_exp);
      const Spinor g0s = flrw::apply(b.g0, s);
      for (std::size_t c = 0; c < 4; ++c) out[c] = kI * w * g0s[c];
      return out;
    }
  }
  return out;
}

Spinor evolution_source_point(const NonlinearitySpec& spec, const Spinor& s) {
  Spinor f = nonlinearity_point(spec, s);
  if (spec.kind == NonlinearityKind::lochak_form ||
      spec.kind == NonlinearityKind::blowup_G) {
    const Spinor g = flrw::apply(basis().g0, f);
    for (std::size_t c = 0; c < 4; ++c) f[c] = -kI * g[c];
  }
  return f;
}

namespace {

SpinorField pointwise(const SpinorField& f, Spinor (*op)(const NonlinearitySpec&, const Spinor&),
                      const NonlinearitySpec& spec) {
  SpinorField out(f.grid, f.time);
  const std::size_t n = f.points();
  for (std::size_t idx = 0; idx < n; ++idx) out.set(idx, op(spec, f.at(idx)));
  return out;
}

}  // namespace

SpinorField eval_nonlinearity(const NonlinearitySpec& spec, const SpinorField& f) {
  if (spec.kind == NonlinearityKind::none)
    throw std::invalid_argument("eval_nonlinearity requires a nonlinearity");
  return pointwise(f, &nonlinearity_point, spec);
}

SpinorField evolution_source(const NonlinearitySpec& spec, const SpinorField& f) {
  return pointwise(f, &evolution_source_point, spec);
}

namespace {

SpinorField random_smooth_field(const Grid& g, const CounterRng& rng, std::uint64_t base,
                                double amplitude) {
  SpinorField f(g, 1.0);
  const int qmax = g.dim == 1 ? 4 : 2;
  const double k0 = 2.0 * std::numbers::pi / g.box_length;
  std::uint64_t ctr = base;
  const std::size_t n = f.points();
  std::vector<std::array<int, 3>> modes;
  for (int a = -qmax; a <= qmax; ++a) {
    if (g.dim == 1) {
      modes.push_back({a, 0, 0});
      continue;
    }
    for (int b = -qmax; b <= qmax; ++b)
      for (int c = -qmax; c <= qmax; ++c) modes.push_back({a, b, c});
  }
  const double norm = amplitude / std::sqrt(static_cast<double>(modes.size()));
  for (const auto& q : modes) {
    Spinor v;
    for (auto& c : v) {
      c = cplx{rng.normal(ctr), rng.normal(ctr + 1)} * norm;
      ctr += 2;
    }
    for (std::size_t idx = 0; idx < n; ++idx) {
      const auto x = g.position(idx);
      const double ph = k0 * (q[0] * x[0] + q[1] * x[1] + q[2] * x[2]);
      const cplx e{std::cos(ph), std::sin(ph)};
      for (int c = 0; c < 4; ++c) f.component(c)[idx] += e * v[c];
    }
  }
  return f;
}

}  // namespace

double lipschitz_probe(const NonlinearitySpec& spec, int k, int trials,
                       std::uint64_t seed, const Grid& grid_in) {
  if (spec.kind == NonlinearityKind::none)
    throw std::invalid_argument("lipschitz_probe requires a nonlinearity");
  if (k < 2) throw std::invalid_argument("lipschitz_probe requires k >= 2");
  Grid grid = grid_in;
  if (!(grid.box_length > 0.0)) grid.box_length = 2.0 * std::numbers::pi;
  grid.validate();
  const CounterRng rng(seed, 0x6c6970);
  double best = 0.0;
  for (int tr = 0; tr < trials; ++tr) {
    const std::uint64_t base = static_cast<std::uint64_t>(tr) << 20;
    const double amp = 0.05 + 0.25 * rng.uniform(base + 999999);
    SpinorField p1 = random_smooth_field(grid, rng, base, amp);
    SpinorField p2 = random_smooth_field(grid, rng, base + 500000, amp);
    if (tr % 2 == 1) {
      // Nearby pair: probes the local constant.
      SpinorField d = p2;
      d *= cplx{1e-2, 0.0};
      p2 = p1 + d;
    }
    const SpinorField diff = p1 - p2;
    const double dn = sobolev_norm(diff, k);
    if (dn == 0.0) continue;
    const SpinorField fd = eval_nonlinearity(spec, p1) - eval_nonlinearity(spec, p2);
    const double denom = dn * (std::pow(sobolev_norm(p1, k), spec.alpha_exp) +
                               std::pow(sobolev_norm(p2, k), spec.alpha_exp));
    if (denom == 0.0) continue;
    best = std::max(best, sobolev_norm(fd, k) / denom);
  }
  return best;
}

InducedPotential induced_potential(const NonlinearitySpec& spec, const SpinorField& f) {
  if (spec.kind != NonlinearityKind::lochak_form)
    throw std::invalid_argument("induced_potential requires lochak_form");
  const auto d = bilinear_densities(f);
  InducedPotential p;
  p.alpha_field.resize(d.xi.size());
  p.beta_field.resize(d.xi.size());
  for (std::size_t i = 0; i < d.xi.size(); ++i) {
    p.alpha_field[i] = spec.alpha_fn(d.xi[i], d.eta[i]);
    p.beta_field[i] = spec.beta_fn(d.xi[i], d.eta[i]);
  }
  return p;
}

}  // namespace flrw
