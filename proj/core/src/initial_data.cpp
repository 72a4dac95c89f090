#include "flrw_dirac/initial_data.hpp"

#include <cmath>
#include <stdexcept>

#include "flrw_dirac/random.hpp"

namespace flrw {

std::string to_string(InitialFamily f) {
  switch (f) {
    case InitialFamily::gaussian: return "gaussian";
    case InitialFamily::random_gaussian: return "random_gaussian";
    case InitialFamily::plane_wave: return "plane_wave";
    case InitialFamily::lm_bump: return "lm_bump";
    case InitialFamily::majorana_bump: return "majorana_bump";
    case InitialFamily::compact_bump: return "compact_bump";
  }
  return "gaussian";
}

InitialFamily initial_family_from_string(const std::string& s) {
  for (auto f : {InitialFamily::gaussian, InitialFamily::random_gaussian,
                 InitialFamily::plane_wave, InitialFamily::lm_bump,
                 InitialFamily::majorana_bump, InitialFamily::compact_bump})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown initial data family: " + s);
}

void InitialDataSpec::validate() const {
  if (!std::isfinite(amplitude)) throw std::invalid_argument("initial_data.amplitude must be finite");
  if (!(width > 0.0)) throw std::invalid_argument("initial_data.width must be positive");
  if (!std::isfinite(wavenumber)) throw std::invalid_argument("initial_data.wavenumber must be finite");
}

SpinorField make_initial_data(const InitialDataSpec& spec, const Grid& grid,
                              double t_start) {
  spec.validate();
  grid.validate();
  SpinorField f(grid, t_start);
  Spinor v = spec.components;
  if (spec.family == InitialFamily::random_gaussian) {
    const CounterRng rng(spec.seed, 0x696e69);
    double nrm = 0.0;
    for (int c = 0; c < 4; ++c) {
      v[c] = cplx{rng.normal(2 * c), rng.normal(2 * c + 1)};
      nrm += std::norm(v[c]);
    }
    for (auto& c : v) c /= std::sqrt(nrm);
  }
  const bool lm = spec.lm_constrained || spec.family == InitialFamily::lm_bump;
  const std::size_t n = f.points();
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double r = periodic_distance(grid, idx, spec.center);
    double g = 0.0;
    if (spec.family == InitialFamily::compact_bump) {
      const double s = r / spec.width;
      g = s < 1.0 ? spec.amplitude * std::exp(1.0 - 1.0 / (1.0 - s * s)) : 0.0;
    } else {
      g = spec.amplitude * std::exp(-(r * r) / (spec.width * spec.width));
    }
    cplx phase{1.0, 0.0};
    if (spec.family == InitialFamily::plane_wave) {
      const double x1 = grid.position(idx)[0];
      phase = cplx{std::cos(spec.wavenumber * x1), std::sin(spec.wavenumber * x1)};
    }
    Spinor s;
    if (lm) {
      s = {g * phase, cplx{}, g * phase, cplx{}};
    } else if (spec.family == InitialFamily::majorana_bump) {
      s = {cplx{}, kI * g * phase, g * phase, cplx{}};
    } else {
      for (int c = 0; c < 4; ++c) s[c] = v[c] * g * phase;
    }
    f.set(idx, s);
  }
  return f;
}

}  // namespace flrw
