#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "flrw_dirac/field.hpp"
#include "flrw_dirac/solver.hpp"

namespace flrw {

class DiagnosticsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CheckReport {
  std::string check;
  bool passed = false;
  double max_mismatch = 0.0;
  std::map<std::string, double> fitted_constants;
  std::pair<double, double> window{0.0, 0.0};
  std::string note;
};

/// {check, status, max_mismatch, fitted_constants, window}; note when set.
nlohmann::json report_to_json(const CheckReport& r);

/// Both sides of the energy identity from the recorded E, xi-integral and
/// Im(V) series, referenced to the first recorded time. Integrals use the
/// fourth-order cumulative rule. Mismatch is relative to the larger side and
/// includes the agreement of a recorded l2 series with sqrt(E).
CheckReport check_energy_identity(const RunRecord& rec, double tol);

/// Relative constancy of t^(3l) times the integral of psi^T g2 psi, measured
/// against the first recorded value.
CheckReport check_gamma2_conservation(const RunRecord& rec, double tol);

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log residuals
  std::pair<double, double> window{0.0, 0.0};
};

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& values,
                   std::pair<double, double> window);

/// Majorana defect evolution at unit z. Initial defect below tol*E(1) is
/// treated as Lochak-Majorana data: with real mass the defect must stay below
/// tol*E(1); with complex mass it must respect the rho-integral bound.
/// Otherwise t^(3l) D(t) is compared with D(1) plus the mass and potential
/// integrals (constant when Im m = 0 and Im V = 0), relative tolerance tol.
CheckReport check_lm_evolution(const RunRecord& rec, cplx z, double tol);

/// Smallest c with ||psi(t)||_k <= c [w(t,s) ||psi(s)||_k + t^-b int_s^t tau^b S(tau)]
/// over recorded pairs s <= t, b = 3l/2 - |Im m|, w = (s/t)^b. Passes when
/// finite and at most `margin`.
CheckReport check_forward_bound(const RunRecord& rec, int k, double margin);

struct ScatterConfig {
  Model model;
  /// Increasing times starting at 1; the tail integral is tracked at each.
  std::vector<double> checkpoints{1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 128.0};
  /// Times at which ||psi(t) - psi_tilde(t)|| is recorded.
  std::vector<double> tail_times{2.0, 5.0, 10.0};
  double cfl = 0.5;
  double dt_max = 0.05;
  int order = 8;
  double tol = 1e-6;
};

struct ScatterResult {
  SpinorField psi_plus;
  std::vector<double> increments;
  std::vector<double> tail_times;
  std::vector<double> tail_norms;
  bool monotone = false;
  bool converged = false;
  bool condition_holds = false;
  /// 2|Im m| + alpha(|Im m| - 3l/2); the sufficient condition is < -1.
  double condition_value = 0.0;
};

ScatterResult scattering_profile(const SpinorField& psi0, const ScatterConfig& cfg);

}  // namespace flrw
