#pragma once

#include <string>
#include <vector>

#include "flrw_dirac/grid.hpp"
#include "flrw_dirac/solver.hpp"

namespace flrw {

struct BlowupCase {
  double ell = 0.0;
  double alpha_exp = 2.0;
  double im_m_abs = 0.0;
  double c0 = 1.0;
  double R = 1.0;
  double E1 = 1.0;

  void validate() const;
};

enum class Regime { no_global_any_size, no_global_large_data };
std::string to_string(Regime r);

struct RegimeVerdict {
  Regime regime = Regime::no_global_large_data;
  /// 1-3: any-size branches for ell < 1, ell > 1, ell = 1;
  /// 4-6: large-data branches in the same order.
  int branch = 0;
  std::string branch_name;
  /// 3a/2 + a|Im m| for ell <= 1, 3a ell/2 + a|Im m| for ell > 1.
  double threshold_value = 0.0;
};

RegimeVerdict classify(const BlowupCase& c);

/// Integral over [1, t] of (R + A(s))^(-3a/2) s^(-3a ell/2 - a|Im m|), with
/// A the travel distance for a0 = 1. Computed in u = ln s.
double j_integral(const BlowupCase& c, double t);

struct Lifespan {
  bool finite = false;
  double T = 0.0;       // meaningful when finite
  double log_T = 0.0;
  double lhs = 0.0;     // E1^(-a/2)
  /// (a/2) c0 J(T_horizon); equals the limit when J converges.
  double rhs_limit = 0.0;
  /// E1 above which the equation is solvable (0 when J diverges).
  double solvability_E1 = 0.0;
  bool j_converged = false;
};

/// Solves E1^(-a/2) = (a/2) c0 J(T) for T by bisection in ln T.
Lifespan lifespan(const BlowupCase& c);

struct EmpiricalBlowupConfig {
  Grid grid{3, 32, 8.0};
  SolverConfig solver;
  /// Relative slack on t_numerical <= T_bu.
  double slack = 0.1;
  /// Relative slack of the discrete energy inequality.
  double inequality_slack = 1e-2;
  /// Interior points whose E exceeds this multiple of E(1) are excluded from
  /// the inequality check, where one-step differences stop resolving E.
  double inequality_energy_cap = 1e2;
  bool nonlinear = true;
  /// Overrides the data amplitude; negative scales the bump to E1.
  double amplitude = -1.0;
};

struct EmpiricalBlowupReport {
  bool blew_up = false;
  double t_numerical = 0.0;
  double E1_measured = 0.0;
  double R_measured = 0.0;
  Lifespan bound;
  bool satisfied = false;
  bool inequality_ok = true;
  double inequality_worst = 0.0;
  std::size_t inequality_points = 0;
  /// satisfied, violated, inconclusive-budget, or no-blowup.
  std::string verdict;
  RunRecord record;
};

/// Compact C-infinity bump of nominal radius c.R centred at the origin,
/// scaled so its discrete energy equals c.E1, evolved with G = c0 |psi|^a.
EmpiricalBlowupReport empirical_blowup(const BlowupCase& c, const EmpiricalBlowupConfig& cfg);

}  // namespace flrw
