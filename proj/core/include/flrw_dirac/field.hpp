#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "flrw_dirac/gamma.hpp"
#include "flrw_dirac/grid.hpp"
#include "flrw_dirac/spacetime.hpp"

namespace flrw {

/// Four complex components per grid point, stored component-major:
/// data[c * points + idx].
struct SpinorField {
  Grid grid;
  double time = 1.0;
  std::vector<cplx> data;

  SpinorField() = default;
  explicit SpinorField(const Grid& g, double t = 1.0);

  std::size_t points() const { return grid.points(); }
  cplx* component(int c) { return data.data() + c * points(); }
  const cplx* component(int c) const { return data.data() + c * points(); }

  Spinor at(std::size_t idx) const;
  void set(std::size_t idx, const Spinor& s);

  bool is_finite() const;

  SpinorField& operator+=(const SpinorField& o);
  SpinorField& operator-=(const SpinorField& o);
  SpinorField& operator*=(cplx s);
  /// this += s * o
  void axpy(cplx s, const SpinorField& o);
};

SpinorField operator+(SpinorField a, const SpinorField& b);
SpinorField operator-(SpinorField a, const SpinorField& b);
SpinorField operator*(cplx s, SpinorField a);

struct BilinearDensities {
  std::vector<double> xi;
  std::vector<double> eta;
  std::vector<double> rho2;
  std::vector<double> abs2;
};

/// Pointwise densities of one spinor.
struct PointDensities {
  double xi;
  double eta;
  double rho2;
  double abs2;
};
PointDensities point_densities(const Spinor& s);

/// psi^T gamma^2 psi (plain transpose).
cplx gamma2_form(const Spinor& s);

/// Riemann sum of |psi|^2.
double l2_norm_sq(const SpinorField& f);

/// H_(k) norm with symbol (1+|xi|^2)^k, normalized so that k = 0 gives the
/// L2 norm.
double sobolev_norm(const SpinorField& f, int k);

SpinorField spectral_derivative(const SpinorField& f, int axis);

BilinearDensities bilinear_densities(const SpinorField& f);

cplx gamma2_bilinear(const SpinorField& f);

double majorana_defect(const SpinorField& f, cplx z);

/// Minimizing unit z of the defect and its value, via the closed form
/// 2E - 2|integral of psi^T gamma^2 psi|.
struct DefectMinimum {
  cplx z;
  double value;
};
DefectMinimum minimize_majorana_defect(const SpinorField& f);

/// L2 mass outside the cone section at f.time. Distances use the periodic
/// minimum image; in dim = 1 only x1 enters.
double cone_mass(const SpinorField& f, const Cone& cone, const Cosmology& c);

/// Periodic minimum-image distance from a grid point to a center.
double periodic_distance(const Grid& g, std::size_t idx,
                         const std::array<double, 3>& center);

/// Smallest radius about center holding `fraction` of the L2 mass.
double mass_radius(const SpinorField& f, const std::array<double, 3>& center,
                   double fraction);

}  // namespace flrw
