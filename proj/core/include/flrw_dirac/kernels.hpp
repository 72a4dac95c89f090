#pragma once

#include <complex>
#include <functional>
#include <map>
#include <vector>

#include "flrw_dirac/field.hpp"
#include "flrw_dirac/hypergeometric.hpp"
#include "flrw_dirac/spacetime.hpp"

namespace flrw {

/// Parameters of the hypergeometric kernels. Requires a0 = 1 and ell < 1.
struct KernelEval {
  Cosmology cosmology{0.5, 1.0};
  cplx m{0.0, 0.0};
  double epsilon = 1.0;
  /// Absolute tolerance of the r-quadratures.
  double quad_tol = 1e-12;

  void validate() const;
  /// Same evaluator with m replaced by -m.
  KernelEval negated_mass() const;
};

/// Additional domain restriction of the command-line front end:
/// 0 < ell < 1 and t / epsilon <= 50.
void require_kernel_mode(const KernelEval& ke, double t);

cplx kernel_E(double r, double t, double t0, const KernelEval& ke);
cplx kernel_K1(double r, double t, const KernelEval& ke);
/// Partial derivative of kernel_K1 in t at fixed r.
cplx kernel_K1_dt(double r, double t, const KernelEval& ke);

/// Complex scalar field on a grid.
struct ScalarField {
  Grid grid;
  std::vector<cplx> data;

  ScalarField() = default;
  explicit ScalarField(const Grid& g) : grid(g), data(g.points()) {}
};

/// Fourier multiplier of the K1 operator and its t-derivative, tabulated per
/// distinct |xi|^2 of the grid (derivative wavenumbers).
struct MultiplierTable {
  std::map<long, cplx> value;
  std::map<long, cplx> dt;
  double k0 = 0.0;  // 2*pi/L; |xi|^2 = k0^2 * key
  int panels = 0;
};

/// Integer |xi|^2 / k0^2 key of a flat Fourier index.
long mode_key(const Grid& g, std::size_t idx);

/// Builds the K1 multiplier table at time t. With self_check the analytic
/// t-derivative is compared against a fourth-order central difference with
/// step 1e-4 t; a relative mismatch above 1e-6 throws.
MultiplierTable k1_multipliers(const Grid& g, double t, const KernelEval& ke,
                               bool self_check = true);

/// Multiplier -i eps^(1+l/2-im)/(1-l) * int_0^{dphi} K1(r,t) cos(r|xi|) dr for one |xi|.
cplx k1_multiplier(double xi_abs, double t, const KernelEval& ke);

ScalarField apply_K1_operator(const ScalarField& phi0, double t, const KernelEval& ke);

/// Free solution at time t from data psi1 given at t = epsilon.
SpinorField reconstruct_free(const SpinorField& psi1, double t, const KernelEval& ke,
                             bool self_check = true);

using ScalarSourceProvider = std::function<void(double b, ScalarField& out)>;

struct GOperatorOptions {
  int order = 8;            // Gauss-Legendre nodes per b-panel
  int initial_panels = 2;
  int max_panels = 256;
  double tol = 1e-10;       // absolute change between refinements
};

ScalarField apply_G_operator(const ScalarSourceProvider& source, const Grid& grid,
                             double t, const KernelEval& ke,
                             const GOperatorOptions& opt = {});

}  // namespace flrw
