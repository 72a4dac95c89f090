#include "flrw_dirac/blowup.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "flrw_dirac/initial_data.hpp"
#include "flrw_dirac/quadrature.hpp"
#include "flrw_dirac/spacetime.hpp"

namespace flrw {

void BlowupCase::validate() const {
  if (!std::isfinite(ell)) throw std::invalid_argument("blowup case: ell must be finite");
  if (!(alpha_exp > 0.0)) throw std::invalid_argument("blowup case: alpha must be positive");
  if (!(im_m_abs >= 0.0)) throw std::invalid_argument("blowup case: |Im m| must be >= 0");
  if (!(c0 > 0.0)) throw std::invalid_argument("blowup case: c0 must be positive");
  if (!(R > 0.0)) throw std::invalid_argument("blowup case: R must be positive");
  if (!(E1 > 0.0)) throw std::invalid_argument("blowup case: E1 must be positive");
}

std::string to_string(Regime r) {
  return r == Regime::no_global_any_size ? "no_global_any_size" : "no_global_large_data";
}

RegimeVerdict classify(const BlowupCase& c) {
  const bool log_case = std::abs(c.ell - 1.0) < 1e-12;
  const double a = c.alpha_exp;
  RegimeVerdict v;
  v.threshold_value = (c.ell > 1.0 && !log_case ? 1.5 * a * c.ell : 1.5 * a) + a * c.im_m_abs;
  const bool any = 1.0 >= v.threshold_value - 1e-12;
  v.regime = any ? Regime::no_global_any_size : Regime::no_global_large_data;
  int base = 0;
  std::string where;
  if (log_case) {
    base = 3;
    where = "ell=1";
  } else if (c.ell < 1.0) {
    base = 1;
    where = "ell<1";
  } else {
    base = 2;
    where = "ell>1";
  }
  v.branch = any ? base : base + 3;
  v.branch_name = where + (any ? ", 1>=threshold" : ", 1<threshold");
  return v;
}

namespace {

/// log(R + A(e^u)) for a0 = 1 without overflow.
double log_r_plus_a(const BlowupCase& c, double u) {
  if (std::abs(c.ell - 1.0) < 1e-12) return std::log(c.R + u);
  const double e = 1.0 - c.ell;
  const double x = e * u;
  if (x > 50.0) {
    // A = (e^x - 1)/e, dominated by e^x/e.
    return x - std::log(e) + std::log1p((c.R - 1.0 / e) * e * std::exp(-x));
  }
  return std::log(c.R + std::expm1(x) / e);
}

double log_integrand_u(const BlowupCase& c, double u) {
  const double p = 1.0 - 1.5 * c.alpha_exp * c.ell - c.alpha_exp * c.im_m_abs;
  return -1.5 * c.alpha_exp * log_r_plus_a(c, u) + p * u;
}

double panel_u(const BlowupCase& c, double u0, double u1) {
  if (u1 <= u0) return 0.0;
  return integrate_adaptive<double>(
      [&](double u) { return std::exp(log_integrand_u(c, u)); }, u0, u1, 1e-15, 1e-14);
}

constexpr double kUHorizon = 2000.0;

}  // namespace

double j_integral(const BlowupCase& c, double t) {
  c.validate();
  if (!(t >= 1.0)) throw std::domain_error("j_integral requires t >= 1");
  const double U = std::log(t);
  double acc = 0.0;
  for (double u = 0.0; u < U; u += 1.0) acc += panel_u(c, u, std::min(U, u + 1.0));
  return acc;
}

Lifespan lifespan(const BlowupCase& c) {
  c.validate();
  Lifespan out;
  const double half = 0.5 * c.alpha_exp * c.c0;
  out.lhs = std::pow(c.E1, -0.5 * c.alpha_exp);
  // Walk unit panels in u until the right side passes the left side or the
  // panel contributions become negligible.
  double acc = 0.0;
  double u = 0.0;
  int quiet = 0;
  while (u < kUHorizon) {
    const double inc = half * panel_u(c, u, u + 1.0);
    if (acc + inc >= out.lhs) {
      double lo = u, hi = u + 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (acc + half * panel_u(c, u, mid) >= out.lhs)
          hi = mid;
        else
          lo = mid;
      }
      out.finite = true;
      out.log_T = 0.5 * (lo + hi);
      out.T = std::exp(out.log_T);
      // The limit is reported only when J converges, which the walk does not
      // need to establish here.
      out.rhs_limit = std::numeric_limits<double>::quiet_NaN();
      break;
    }
    acc += inc;
    u += 1.0;
    if (inc <= 1e-16 * acc) {
      if (++quiet >= 5) {
        out.j_converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (!out.finite) {
    out.rhs_limit = acc;
    out.solvability_E1 = acc > 0.0 ? std::pow(acc, -2.0 / c.alpha_exp) : 0.0;
  }
  return out;
}

EmpiricalBlowupReport empirical_blowup(const BlowupCase& c, const EmpiricalBlowupConfig& cfg) {
  c.validate();
  cfg.grid.validate();
  EmpiricalBlowupReport rep;

  InitialDataSpec ids;
  ids.family = InitialFamily::compact_bump;
  ids.width = c.R;
  ids.amplitude = 1.0;
  SpinorField f0 = make_initial_data(ids, cfg.grid, cfg.solver.t_start);
  const double e_unit = l2_norm_sq(f0);
  if (cfg.amplitude >= 0.0) {
    f0 *= cplx{cfg.amplitude, 0.0};
  } else if (e_unit > 0.0) {
    f0 *= cplx{std::sqrt(c.E1 / e_unit), 0.0};
  }
  rep.E1_measured = l2_norm_sq(f0);
  rep.R_measured = mass_radius(f0, {0.0, 0.0, 0.0}, 1.0 - 1e-5);

  Model model;
  model.cosmology = Cosmology{c.ell, 1.0};
  model.mass = cplx{0.0, c.im_m_abs};
  if (cfg.nonlinear) {
    model.nonlinearity.kind = NonlinearityKind::blowup_G;
    model.nonlinearity.alpha_exp = c.alpha_exp;
    model.nonlinearity.c0 = c.c0;
  }
  SolverConfig sc = cfg.solver;
  sc.support_radius = rep.R_measured;
  Propagation run = propagate(f0, sc, model);
  rep.record = run.record;
  const RunRecord& rec = rep.record;
  rep.blew_up = rec.status == RunStatus::blowup;
  rep.t_numerical = rep.blew_up ? rec.blowup_time : rec.times.back();

  if (rep.E1_measured > 0.0 && rep.R_measured > 0.0) {
    BlowupCase measured = c;
    measured.E1 = rep.E1_measured;
    measured.R = rep.R_measured;
    rep.bound = lifespan(measured);

    // Discrete form of dE/dt >= c0 (R + A)^(-3a/2) E^((2+a)/2) - (3l + 2|Im m|) E / t.
    const Cosmology cos{c.ell, 1.0};
    const auto& t = rec.times;
    const auto& e = rec.energy;
    for (std::size_t i = 1; i + 1 < t.size(); ++i) {
      if (e[i] > cfg.inequality_energy_cap * rep.E1_measured) break;
      const double h0 = t[i] - t[i - 1], h1 = t[i + 1] - t[i];
      const double de = (-h1 / (h0 * (h0 + h1))) * e[i - 1] +
                        ((h1 - h0) / (h0 * h1)) * e[i] + (h0 / (h1 * (h0 + h1))) * e[i + 1];
      const double rhs =
          c.c0 * std::pow(rep.R_measured + travel_distance(cos, t[i]), -1.5 * c.alpha_exp) *
              std::pow(e[i], 0.5 * (2.0 + c.alpha_exp)) -
          (3.0 * c.ell + 2.0 * c.im_m_abs) / t[i] * e[i];
      const double gap = (rhs - de) / std::max(std::abs(rhs), 1e-300);
      rep.inequality_worst = std::max(rep.inequality_worst, gap);
      ++rep.inequality_points;
      if (de < rhs - cfg.inequality_slack * std::abs(rhs)) rep.inequality_ok = false;
    }
  }

  if (rep.blew_up) {
    rep.satisfied = rep.bound.finite && rep.t_numerical <= rep.bound.T * (1.0 + cfg.slack);
    rep.verdict = rep.satisfied ? "satisfied" : "violated";
  } else if (cfg.nonlinear && rep.E1_measured > 0.0) {
    const bool bound_passed = rep.bound.finite &&
                              rep.bound.T * (1.0 + cfg.slack) < rec.times.back() &&
                              rec.status == RunStatus::completed;
    rep.verdict = bound_passed ? "violated" : "inconclusive-budget";
  } else {
    rep.verdict = "no-blowup";
  }
  return rep;
}

}  // namespace flrw
