#pragma once

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "flrw_dirac/field.hpp"
#include "flrw_dirac/fourier.hpp"
#include "flrw_dirac/models.hpp"
#include "flrw_dirac/spacetime.hpp"

namespace flrw {

struct Model {
  Cosmology cosmology;
  cplx mass{0.0, 0.0};
  PotentialSpec potential;
  NonlinearitySpec nonlinearity;

  void validate() const;
};

struct SolverConfig {
  double t_start = 1.0;
  double t_end = 2.0;
  double cfl = 0.5;
  double dt_max = 0.05;
  std::string method = "rk4";
  /// Blow-up when the L2 norm exceeds this multiple of its initial value.
  double blowup_norm_threshold = 1e6;
  /// Spacing of recorded times; 0 records after every step.
  double record_interval = 0.0;
  int sobolev_k = 1;
  /// z used for the recorded majorana_defect series.
  cplx defect_z{1.0, 0.0};
  /// Stop with cone_violation once the forward cone of the initial support
  /// reaches L/2 - 2h.
  bool cone_guard = false;
  bool record_cone_leak = false;
  std::array<double, 3> support_center{0.0, 0.0, 0.0};
  /// Negative: measured from the data as its 1 - 1e-12 mass radius.
  double support_radius = -1.0;
  /// Keep a copy of the field every this many records; 0 disables.
  int snapshot_every = 0;

  void validate() const;
};

/// Fills `out` with an additive term of d(psi)/dt at time t.
using SourceProvider = std::function<void(double t, SpinorField& out)>;

enum class RunStatus { completed, blowup, cone_violation };
std::string to_string(RunStatus s);
RunStatus run_status_from_string(const std::string& s);

struct RunRecord {
  std::vector<double> times;
  std::vector<double> energy;    // E(t) = ||psi||^2
  std::vector<double> l2;        // ||psi||
  std::vector<double> sobolev;   // ||psi||_(k), k = sobolev_k
  std::vector<double> xi_int;
  std::vector<double> eta_int;
  std::vector<double> rho2_int;
  std::vector<double> rho_int;   // integral of sqrt(rho^2)
  std::vector<double> imv_int;   // integral of psi* Im(V) psi
  std::vector<double> source_norm;
  std::vector<double> cone_leak;
  std::vector<double> defect;
  std::vector<cplx> gamma2;

  RunStatus status = RunStatus::completed;
  double blowup_time = std::numeric_limits<double>::quiet_NaN();

  double ell = 0.0;
  double a0 = 1.0;
  cplx mass{};
  Grid grid;
  int sobolev_k = 1;
  cplx defect_z{1.0, 0.0};
  std::string nonlinearity = "none";
  /// Right side is zero or of the form A psi with A = aI + i b g5.
  bool a_form = true;
  bool potential_zero = true;
  bool potential_gamma2 = true;
  bool sourced = false;
  double support_radius = 0.0;
  std::map<std::string, std::string> tags;
  std::vector<std::string> snapshots;

  std::size_t size() const { return times.size(); }
};

class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Method-of-lines right side with cached FFT plans and potential profile.
/// Not thread-safe: one instance per run.
class DiracOperator {
 public:
  DiracOperator(const Model& model, const Grid& grid);

  const Model& model() const { return model_; }
  const Grid& grid() const { return grid_; }

  /// out = d(psi)/dt at time t, plus source(t) if given.
  void rhs(const SpinorField& f, double t, SpinorField& out,
           const SourceProvider* source = nullptr);

  /// Largest admissible |dt| at time t for the given CFL number.
  double max_dt(double t, double cfl) const;

  /// One classical RK4 step; dt may be negative.
  SpinorField step(const SpinorField& f, double dt, double cfl,
                   const SourceProvider* source = nullptr);

  /// Integral of psi* Im(V) psi at time t.
  double imv_integral(const SpinorField& f, double t) const;

 private:
  Model model_;
  Grid grid_;
  FftPlan plan_;
  std::vector<std::array<double, 3>> k_;
  std::vector<double> envelope_;
  Mat4C vmat_;
  Mat4C imv_;
  bool has_potential_;
  std::vector<cplx> hat_;
  SpinorField k1_, k2_, k3_, k4_, tmp_, src_;
};

SpinorField rhs(const SpinorField& f, double t, const Model& model);

SpinorField step(const SpinorField& f, double dt, const Model& model, double cfl);

struct Propagation {
  RunRecord record;
  SpinorField final_field;
  std::vector<SpinorField> snapshots;
};

Propagation propagate(const SpinorField& f0, const SolverConfig& cfg, const Model& model,
                      const SourceProvider& source = {});

Propagation duhamel_source(const SpinorField& f0, const SourceProvider& source,
                           const SolverConfig& cfg, const Model& model);

/// Advances (or retreats) f to t_target with CFL-limited steps, no recording.
SpinorField evolve(const SpinorField& f, double t_target, const Model& model,
                   double cfl = 0.5, double dt_max = 0.05,
                   const SourceProvider& source = {});

/// Advances with exactly `steps` equal steps.
SpinorField evolve_fixed(const SpinorField& f, double t_target, int steps,
                         const Model& model, double cfl = 0.9);

}  // namespace flrw
