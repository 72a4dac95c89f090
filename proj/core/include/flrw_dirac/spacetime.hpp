#pragma once

#include <array>

namespace flrw {

struct Cosmology {
  double ell = 0.0;
  double a0 = 1.0;

  /// Throws std::invalid_argument unless a0 > 0 and ell is finite.
  void validate() const;
  bool is_log() const;
};

enum class ConeDirection { forward, backward };

struct Cone {
  std::array<double, 3> apex{0.0, 0.0, 0.0};
  double t0 = 1.0;
  ConeDirection direction = ConeDirection::backward;
  /// Radius of the cone section at t0; zero for a point apex.
  double base_radius = 0.0;
};

/// a0 * t^ell.
double scale(const Cosmology& c, double t);

/// t^(1-ell)/(1-ell), or ln t when ell = 1. Uses a0 = 1.
double phi(const Cosmology& c, double t);

/// Integral of 1/a over [1, t].
double travel_distance(const Cosmology& c, double t);

/// base_radius + |phi(t) - phi(t0)| / a0.
double cone_radius(const Cone& cone, const Cosmology& c, double t);

}  // namespace flrw
