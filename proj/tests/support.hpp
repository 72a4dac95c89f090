#pragma once

#include <cmath>
#include <complex>

#include <flrw_dirac/field.hpp>
#include <flrw_dirac/gamma.hpp>
#include <flrw_dirac/random.hpp>

namespace flrw::testing {

inline double rel_l2(const SpinorField& a, const SpinorField& b) {
  const double d = std::sqrt(l2_norm_sq(a - b));
  const double n = std::sqrt(l2_norm_sq(b));
  return n > 0.0 ? d / n : d;
}

inline double max_abs(const SpinorField& a, const SpinorField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) m = std::max(m, std::abs(a.data[i] - b.data[i]));
  return m;
}

inline Spinor random_spinor(std::uint64_t seed, std::uint64_t k) {
  CounterRng rng(seed, 99);
  Spinor s;
  for (int a = 0; a < 4; ++a)
    s[a] = {rng.normal(8 * k + 2 * a), rng.normal(8 * k + 2 * a + 1)};
  return s;
}

/// Gaussian bump with an independent random spinor at each of a few centres.
inline SpinorField smooth_random_field(const Grid& g, std::uint64_t seed, double width,
                                       double t = 1.0) {
  SpinorField f(g, t);
  const Spinor v = random_spinor(seed, 0);
  const Spinor w = random_spinor(seed, 1);
  for (std::size_t i = 0; i < f.points(); ++i) {
    const auto x = g.position(i);
    double r1 = 0.0, r2 = 0.0;
    for (int d = 0; d < g.dim; ++d) {
      r1 += (x[d] - 0.3) * (x[d] - 0.3);
      r2 += (x[d] + 0.7) * (x[d] + 0.7);
    }
    const double e1 = std::exp(-r1 / (width * width));
    const double e2 = std::exp(-r2 / (width * width));
    Spinor s;
    for (int a = 0; a < 4; ++a) s[a] = e1 * v[a] + 0.5 * e2 * w[a];
    f.set(i, s);
  }
  return f;
}

inline SpinorField constant_field(const Grid& g, const Spinor& s, double t = 1.0) {
  SpinorField f(g, t);
  for (std::size_t i = 0; i < f.points(); ++i) f.set(i, s);
  return f;
}

}  // namespace flrw::testing
