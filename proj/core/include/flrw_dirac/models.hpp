#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "flrw_dirac/field.hpp"
#include "flrw_dirac/gamma.hpp"

namespace flrw {

/// Raised when a configured structural condition on V fails at a sample.
class PotentialFlagError : public std::runtime_error {
 public:
  PotentialFlagError(const std::string& what, std::array<double, 3> x, double t)
      : std::runtime_error(what), x_(x), t_(t) {}
  std::array<double, 3> x() const { return x_; }
  double t() const { return t_; }

 private:
  std::array<double, 3> x_;
  double t_;
};

enum class PotentialKind { zero, scalar_bump, custom_matrix };

/// V(x,t) = amplitude * exp(-|x-center|^2/width^2) * t^(-time_decay) * M, with
/// M = I for scalar_bump and M = matrix for custom_matrix.
struct PotentialSpec {
  PotentialKind kind = PotentialKind::zero;
  double amplitude = 0.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  double width = 1.0;
  double time_decay = 0.0;
  Mat4C matrix = Mat4C::identity();
  bool hermitian_required = false;
  bool gamma2_condition_required = false;

  void validate() const;
  Mat4C structure() const;
  double envelope(const std::array<double, 3>& x, double t) const;
};

Mat4C eval_potential(const PotentialSpec& spec, const std::array<double, 3>& x,
                     double t);

/// (V - V*)/(2i).
Mat4C imaginary_part(const Mat4C& v);

/// Checks the requested flags at random grid points at t_start and at 8
/// random later times in [t_start, t_end]. Throws PotentialFlagError.
void check_potential_flags(const PotentialSpec& spec, const Grid& grid,
                           double t_start, double t_end, std::uint64_t seed,
                           int samples_per_time = 64);

enum class NonlinearityKind { none, power_abs, power_g0g5, lochak_form, blowup_G };

std::string to_string(NonlinearityKind k);
NonlinearityKind nonlinearity_from_string(const std::string& s);

using BilinearFn = std::function<double(double xi, double eta)>;

/// Sum of coef * xi^p * eta^q with p + q >= 1.
struct BilinearMonomial {
  double coef;
  int p;
  int q;
};
BilinearFn bilinear_polynomial(std::vector<BilinearMonomial> terms);

struct NonlinearitySpec {
  NonlinearityKind kind = NonlinearityKind::none;
  double alpha_exp = 2.0;
  int sign = 1;
  double c0 = 1.0;
  BilinearFn alpha_fn;
  BilinearFn beta_fn;

  void validate() const;
  /// Forms whose evolution source is -i gamma^0 A psi with A = aI + i b gamma^5.
  bool is_a_form() const { return kind == NonlinearityKind::lochak_form; }
};

/// Right side in the form the operator is written: F(psi), or
/// G(psi) i gamma^0 psi for blowup_G.
Spinor nonlinearity_point(const NonlinearitySpec& spec, const Spinor& s);

/// Term contributed to d(psi)/dt at one point: -i gamma^0 times the right
/// side for lochak_form and blowup_G, the right side itself otherwise.
Spinor evolution_source_point(const NonlinearitySpec& spec, const Spinor& s);

SpinorField eval_nonlinearity(const NonlinearitySpec& spec, const SpinorField& f);
SpinorField evolution_source(const NonlinearitySpec& spec, const SpinorField& f);

/// Empirical constant of the H_(k) Lipschitz bound over random smooth pairs.
/// The default grid is dim 1, n 64, L 2*pi.
double lipschitz_probe(const NonlinearitySpec& spec, int k, int trials,
                       std::uint64_t seed, const Grid& grid = Grid{1, 64, 0.0});

struct InducedPotential {
  std::vector<double> alpha_field;
  std::vector<double> beta_field;
};

InducedPotential induced_potential(const NonlinearitySpec& spec, const SpinorField& f);

}  // namespace flrw
