#include "flrw_dirac/spacetime.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace flrw {

namespace {

constexpr double kLogTol = 1e-12;

void require_positive_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("time must be positive and finite, got " +
                            std::to_string(t));
}

}  // namespace

void Cosmology::validate() const {
  if (!std::isfinite(ell)) throw std::invalid_argument("cosmology.ell must be finite");
  if (!(a0 > 0.0) || !std::isfinite(a0))
    throw std::invalid_argument("cosmology.a0 must be positive");
}

bool Cosmology::is_log() const { return std::abs(ell - 1.0) < kLogTol; }

double scale(const Cosmology& c, double t) {
  require_positive_time(t);
  return c.a0 * std::pow(t, c.ell);
}

double phi(const Cosmology& c, double t) {
  require_positive_time(t);
  if (c.is_log()) return std::log(t);
  return std::pow(t, 1.0 - c.ell) / (1.0 - c.ell);
}

double travel_distance(const Cosmology& c, double t) {
  if (!(t >= 1.0)) throw std::domain_error("travel_distance requires t >= 1");
  if (c.is_log()) return std::log(t) / c.a0;
  // expm1 keeps accuracy near t = 1.
  const double e = 1.0 - c.ell;
  return std::expm1(e * std::log(t)) / (c.a0 * e);
}

double cone_radius(const Cone& cone, const Cosmology& c, double t) {
  require_positive_time(t);
  require_positive_time(cone.t0);
  if (cone.direction == ConeDirection::backward && t > cone.t0)
    throw std::domain_error("backward cone evaluated after its apex");
  if (cone.direction == ConeDirection::forward && t < cone.t0)
    throw std::domain_error("forward cone evaluated before its apex");
  const double d = std::abs(phi(c, t) - phi(c, cone.t0)) / c.a0;
  return cone.base_radius + d;
}

}  // namespace flrw
