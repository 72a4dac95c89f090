#include "flrw_dirac/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "flrw_dirac/fourier.hpp"

namespace flrw {

SpinorField::SpinorField(const Grid& g, double t) : grid(g), time(t) {
  grid.validate();
  data.assign(4 * grid.points(), cplx{});
}

Spinor SpinorField::at(std::size_t idx) const {
  const std::size_t n = points();
  return {data[idx], data[n + idx], data[2 * n + idx], data[3 * n + idx]};
}

void SpinorField::set(std::size_t idx, const Spinor& s) {
  const std::size_t n = points();
  for (std::size_t c = 0; c < 4; ++c) data[c * n + idx] = s[c];
}

bool SpinorField::is_finite() const {
  return std::all_of(data.begin(), data.end(), [](const cplx& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  });
}

namespace {

void require_same_grid(const SpinorField& a, const SpinorField& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("fields live on different grids");
}

}  // namespace

SpinorField& SpinorField::operator+=(const SpinorField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += o.data[i];
  return *this;
}

SpinorField& SpinorField::operator-=(const SpinorField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] -= o.data[i];
  return *this;
}

SpinorField& SpinorField::operator*=(cplx s) {
  for (auto& v : data) v *= s;
  return *this;
}

void SpinorField::axpy(cplx s, const SpinorField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += s * o.data[i];
}

SpinorField operator+(SpinorField a, const SpinorField& b) { return a += b; }
SpinorField operator-(SpinorField a, const SpinorField& b) { return a -= b; }
SpinorField operator*(cplx s, SpinorField a) { return a *= s; }

PointDensities point_densities(const Spinor& s) {
  PointDensities d{};
  d.xi = std::norm(s[0]) + std::norm(s[1]) - std::norm(s[2]) - std::norm(s[3]);
  d.eta = 2.0 * (s[0] * std::conj(s[2])).imag() + 2.0 * (s[1] * std::conj(s[3])).imag();
  d.rho2 = d.xi * d.xi + d.eta * d.eta;
  d.abs2 = norm_sq(s);
  return d;
}

cplx gamma2_form(const Spinor& s) {
  const Mat4C& g2 = basis().g2;
  cplx acc{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (g2.e[i][j] != cplx{}) acc += s[i] * g2.e[i][j] * s[j];
  return acc;
}

double l2_norm_sq(const SpinorField& f) {
  double acc = 0.0;
  for (const auto& v : f.data) acc += std::norm(v);
  return acc * f.grid.cell_volume();
}

double sobolev_norm(const SpinorField& f, int k) {
  if (k < 0 || k > 6) throw std::invalid_argument("sobolev order must be in [0, 6]");
  const std::size_t n = f.points();
  std::vector<cplx> work(f.data);
  FftPlan plan(f.grid, 4);
  plan.forward(work.data());
  double acc = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto q = f.grid.wavevector(idx);
    const double w = std::pow(1.0 + q[0] * q[0] + q[1] * q[1] + q[2] * q[2], k);
    double s = 0.0;
    for (std::size_t c = 0; c < 4; ++c) s += std::norm(work[c * n + idx]);
    acc += w * s;
  }
  return std::sqrt(acc * f.grid.cell_volume() / static_cast<double>(n));
}

SpinorField spectral_derivative(const SpinorField& f, int axis) {
  if (axis < 1 || axis > f.grid.dim)
    throw std::invalid_argument("derivative axis out of range for grid dimension");
  const std::size_t n = f.points();
  SpinorField out = f;
  FftPlan plan(f.grid, 4);
  plan.forward(out.data.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double q = f.grid.wavevector(idx, true)[axis - 1];
    const cplx mult{0.0, q * inv_n};
    for (std::size_t c = 0; c < 4; ++c) out.data[c * n + idx] *= mult;
  }
  plan.backward(out.data.data());
  return out;
}

BilinearDensities bilinear_densities(const SpinorField& f) {
  const std::size_t n = f.points();
  BilinearDensities b;
  b.xi.resize(n);
  b.eta.resize(n);
  b.rho2.resize(n);
  b.abs2.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto d = point_densities(f.at(idx));
    b.xi[idx] = d.xi;
    b.eta[idx] = d.eta;
    b.rho2[idx] = d.rho2;
    b.abs2[idx] = d.abs2;
  }
  return b;
}

cplx gamma2_bilinear(const SpinorField& f) {
  const std::size_t n = f.points();
  cplx acc{};
  for (std::size_t idx = 0; idx < n; ++idx) acc += gamma2_form(f.at(idx));
  return acc * f.grid.cell_volume();
}

double majorana_defect(const SpinorField& f, cplx z) {
  if (std::abs(std::abs(z) - 1.0) > 1e-12)
    throw std::invalid_argument("majorana_defect requires |z| = 1");
  const Mat4C& g2 = basis().g2;
  const std::size_t n = f.points();
  double acc = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    Spinor s = f.at(idx);
    Spinor sc;
    for (std::size_t c = 0; c < 4; ++c) sc[c] = std::conj(s[c]);
    const Spinor g = flrw::apply(g2, sc);
    for (std::size_t c = 0; c < 4; ++c) acc += std::norm(s[c] - z * g[c]);
  }
  return acc * f.grid.cell_volume();
}

DefectMinimum minimize_majorana_defect(const SpinorField& f) {
  const double e = l2_norm_sq(f);
  const cplx g = gamma2_bilinear(f);
  const double mag = std::abs(g);
  const cplx z = mag > 0.0 ? -g / mag : cplx{1.0, 0.0};
  return {z, std::max(0.0, 2.0 * e - 2.0 * mag)};
}

double periodic_distance(const Grid& g, std::size_t idx,
                         const std::array<double, 3>& center) {
  const auto x = g.position(idx);
  const double L = g.box_length;
  double s = 0.0;
  for (int d = 0; d < g.dim; ++d) {
    double dx = x[d] - center[d];
    dx -= L * std::round(dx / L);
    s += dx * dx;
  }
  return std::sqrt(s);
}

double cone_mass(const SpinorField& f, const Cone& cone, const Cosmology& c) {
  const double radius = cone_radius(cone, c, f.time);
  const std::size_t n = f.points();
  double acc = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (periodic_distance(f.grid, idx, cone.apex) <= radius) continue;
    double s = 0.0;
    for (std::size_t comp = 0; comp < 4; ++comp) s += std::norm(f.data[comp * n + idx]);
    acc += s;
  }
  return acc * f.grid.cell_volume();
}

double mass_radius(const SpinorField& f, const std::array<double, 3>& center,
                   double fraction) {
  const std::size_t n = f.points();
  std::vector<std::pair<double, double>> rm(n);
  double total = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    double s = 0.0;
    for (std::size_t comp = 0; comp < 4; ++comp) s += std::norm(f.data[comp * n + idx]);
    rm[idx] = {periodic_distance(f.grid, idx, center), s};
    total += s;
  }
  if (total == 0.0) return 0.0;
  std::sort(rm.begin(), rm.end());
  double acc = 0.0;
  for (const auto& [r, m] : rm) {
    acc += m;
    if (acc >= fraction * total) return r;
  }
  return rm.back().first;
}

}  // namespace flrw
