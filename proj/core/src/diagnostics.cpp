#include "flrw_dirac/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "flrw_dirac/quadrature.hpp"

namespace flrw {

nlohmann::json report_to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check;
  j["status"] = r.passed ? "pass" : "fail";
  j["max_mismatch"] = std::isfinite(r.max_mismatch) ? nlohmann::json(r.max_mismatch)
                                                    : nlohmann::json(nullptr);
  nlohmann::json fc = nlohmann::json::object();
  for (const auto& [k, v] : r.fitted_constants)
    fc[k] = std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
  j["fitted_constants"] = fc;
  j["window"] = {r.window.first, r.window.second};
  if (!r.note.empty()) j["note"] = r.note;
  return j;
}

namespace {

void require_series(const RunRecord& rec, const std::vector<double>& s, const char* name) {
  if (s.size() != rec.times.size() || s.empty())
    throw DiagnosticsError(std::string("record is missing the series ") + name);
}

double rel_mismatch(double a, double b) {
  const double d = std::abs(a - b);
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : d / s;
}

std::vector<double> weighted(const RunRecord& rec, const std::vector<double>& y,
                             double power) {
  std::vector<double> out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::pow(rec.times[i], power) * y[i];
  return out;
}

}  // namespace

CheckReport check_energy_identity(const RunRecord& rec, double tol) {
  require_series(rec, rec.energy, "energy");
  require_series(rec, rec.xi_int, "xi_int");
  require_series(rec, rec.imv_int, "imv_int");
  if (!rec.a_form) throw DiagnosticsError("energy identity needs a zero or A-form right side");
  if (rec.sourced) throw DiagnosticsError("energy identity does not apply to sourced runs");
  const double l3 = 3.0 * rec.ell;
  const auto i_mass = cumulative_integral(rec.times, weighted(rec, rec.xi_int, l3 - 1.0));
  const auto i_pot = cumulative_integral(rec.times, weighted(rec, rec.imv_int, l3));
  const double base = std::pow(rec.times.front(), l3) * rec.energy.front();
  CheckReport r;
  r.check = "energy_identity";
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const double lhs = std::pow(rec.times[i], l3) * rec.energy[i];
    const double rhs = base + 2.0 * rec.mass.imag() * i_mass[i] - 2.0 * i_pot[i];
    worst = std::max(worst, rel_mismatch(lhs, rhs));
  }
  // The recorded norm must square to the recorded energy.
  if (rec.l2.size() == rec.times.size()) {
    double consistency = 0.0;
    for (std::size_t i = 0; i < rec.times.size(); ++i) {
      consistency = std::max(consistency, rel_mismatch(rec.l2[i] * rec.l2[i], rec.energy[i]));
    }
    r.fitted_constants["l2_energy_consistency"] = consistency;
    if (consistency > worst) {
      worst = consistency;
      r.note = "l2 and energy series disagree";
    }
  }
  r.max_mismatch = worst;
  r.passed = worst < tol;
  r.window = {rec.times.front(), rec.times.back()};
  r.fitted_constants["initial_weighted_energy"] = base;
  return r;
}

CheckReport check_gamma2_conservation(const RunRecord& rec, double tol) {
  if (rec.gamma2.size() != rec.times.size() || rec.gamma2.empty())
    throw DiagnosticsError("record is missing the series gamma2");
  if (!rec.a_form || !rec.potential_gamma2 || rec.sourced)
    throw DiagnosticsError("gamma2 conservation needs an A-form right side and V^T g2 + g2 V = 0");
  const double l3 = 3.0 * rec.ell;
  const cplx base = std::pow(rec.times.front(), l3) * rec.gamma2.front();
  CheckReport r;
  r.check = "gamma2_conservation";
  r.window = {rec.times.front(), rec.times.back()};
  r.fitted_constants["initial_abs"] = std::abs(base);
  // A vanishing initial integral is judged against the weighted energy.
  const double e_scale = std::pow(rec.times.front(), l3) * rec.energy.front();
  double scale = std::abs(base);
  if (scale <= 1e-14 * e_scale) {
    scale = e_scale;
    r.note = "initial integral vanishes; mismatch relative to weighted energy";
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const cplx v = std::pow(rec.times[i], l3) * rec.gamma2[i];
    if (scale > 0.0) worst = std::max(worst, std::abs(v - base) / scale);
  }
  r.max_mismatch = worst;
  r.passed = worst < tol;
  return r;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& values,
                   std::pair<double, double> window) {
  if (t.size() != values.size()) throw std::invalid_argument("fit_decay: length mismatch");
  if (!(window.first < window.second)) throw std::invalid_argument("fit_decay: empty window");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < window.first || t[i] > window.second) continue;
    if (!(values[i] > 0.0)) throw std::invalid_argument("fit_decay: nonpositive value in window");
    x.push_back(std::log(t[i]));
    y.push_back(std::log(values[i]));
  }
  if (x.size() < 2) throw std::invalid_argument("fit_decay: fewer than two samples in window");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_decay: degenerate time samples");
  DecayFit fit;
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.intercept + fit.exponent * x[i]);
    rss += e * e;
  }
  fit.residual = std::sqrt(rss / n);
  fit.window = window;
  return fit;
}

CheckReport check_lm_evolution(const RunRecord& rec, cplx z, double tol) {
  require_series(rec, rec.energy, "energy");
  require_series(rec, rec.xi_int, "xi_int");
  require_series(rec, rec.rho_int, "rho_int");
  require_series(rec, rec.imv_int, "imv_int");
  if (rec.gamma2.size() != rec.times.size() || rec.gamma2.empty())
    throw DiagnosticsError("record is missing the series gamma2");
  if (std::abs(std::abs(z) - 1.0) > 1e-12) throw std::invalid_argument("z must have modulus 1");
  if (!rec.a_form || !rec.potential_gamma2 || rec.sourced)
    throw DiagnosticsError("defect evolution needs an A-form right side and V^T g2 + g2 V = 0");

  const std::size_t n = rec.times.size();
  std::vector<double> defect(n);
  const bool recorded = std::abs(z - rec.defect_z) < 1e-14 && rec.defect.size() == n;
  for (std::size_t i = 0; i < n; ++i)
    defect[i] = recorded ? rec.defect[i]
                         : 2.0 * rec.energy[i] + 2.0 * (std::conj(z) * rec.gamma2[i]).real();

  const double l3 = 3.0 * rec.ell;
  const double e1 = rec.energy.front();
  const double im = rec.mass.imag();
  CheckReport r;
  r.check = "lm_evolution";
  r.window = {rec.times.front(), rec.times.back()};
  r.fitted_constants["initial_defect"] = defect.front();

  if (e1 == 0.0) {
    r.passed = std::all_of(defect.begin(), defect.end(), [](double d) { return d == 0.0; });
    r.note = "zero field";
    return r;
  }

  const double t1 = rec.times.front();
  const auto i_xi = cumulative_integral(rec.times, weighted(rec, rec.xi_int, l3 - 1.0));
  const auto i_pot = cumulative_integral(rec.times, weighted(rec, rec.imv_int, l3));
  const bool lm_data = defect.front() <= tol * e1;
  double worst = 0.0;
  if (lm_data && im == 0.0) {
    r.note = "lochak-majorana data, real mass";
    for (double d : defect) worst = std::max(worst, d / e1);
    r.passed = worst < tol;
  } else if (lm_data) {
    r.note = "lochak-majorana data, complex mass";
    const auto i_rho = cumulative_integral(rec.times, weighted(rec, rec.rho_int, l3 - 1.0));
    double excess = 0.0, eq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double tw = std::pow(rec.times[i], -l3);
      const double bound = 4.0 * std::abs(im) * tw * i_rho[i];
      excess = std::max(excess, (defect[i] - bound) / e1);
      const double exact =
          tw * (std::pow(t1, l3) * defect.front() + 4.0 * im * i_xi[i] - 4.0 * i_pot[i]);
      eq = std::max(eq, std::abs(defect[i] - exact) / e1);
    }
    worst = std::max(0.0, excess);
    r.fitted_constants["equality_mismatch"] = eq;
    r.passed = excess < tol;
  } else {
    r.note = "general data";
    const double base = std::pow(t1, l3) * defect.front();
    for (std::size_t i = 0; i < n; ++i) {
      const double lhs = std::pow(rec.times[i], l3) * defect[i];
      const double rhs = base + 4.0 * im * i_xi[i] - 4.0 * i_pot[i];
      worst = std::max(worst, rel_mismatch(lhs, rhs));
    }
    r.passed = worst < tol;
  }
  r.max_mismatch = worst;
  return r;
}

CheckReport check_forward_bound(const RunRecord& rec, int k, double margin) {
  require_series(rec, rec.sobolev, "sobolev");
  if (k != rec.sobolev_k)
    throw DiagnosticsError("record holds H_(" + std::to_string(rec.sobolev_k) +
                           ") norms, not H_(" + std::to_string(k) + ")");
  std::vector<double> src = rec.source_norm;
  if (src.size() != rec.times.size()) src.assign(rec.times.size(), 0.0);
  const double b = 1.5 * rec.ell - std::abs(rec.mass.imag());
  const auto cum = cumulative_integral(rec.times, weighted(rec, src, b));
  const std::size_t n = rec.times.size();
  double c = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double tj = rec.times[j];
    for (std::size_t i = 0; i <= j; ++i) {
      const double ti = rec.times[i];
      const double denom = std::pow(ti / tj, b) * rec.sobolev[i] +
                           std::pow(tj, -b) * std::max(0.0, cum[j] - cum[i]);
      if (denom <= 0.0) continue;
      c = std::max(c, rec.sobolev[j] / denom);
    }
  }
  CheckReport r;
  r.check = "forward_bound";
  r.fitted_constants["c"] = c;
  r.max_mismatch = c;
  r.window = {rec.times.front(), rec.times.back()};
  r.passed = std::isfinite(c) && c <= margin;
  return r;
}

ScatterResult scattering_profile(const SpinorField& psi0, const ScatterConfig& cfg) {
  cfg.model.validate();
  if (cfg.checkpoints.size() < 2 || cfg.checkpoints.front() != psi0.time)
    throw std::invalid_argument("checkpoints must start at the data time");
  for (std::size_t i = 1; i < cfg.checkpoints.size(); ++i)
    if (!(cfg.checkpoints[i] > cfg.checkpoints[i - 1]))
      throw std::invalid_argument("checkpoints must increase");

  ScatterResult res;
  const double im = std::abs(cfg.model.mass.imag());
  const double ell = cfg.model.cosmology.ell;
  const double alpha = cfg.model.nonlinearity.alpha_exp;
  res.condition_value = 2.0 * im + alpha * (im - 1.5 * ell);
  res.condition_holds = res.condition_value < -1.0;

  Model linear = cfg.model;
  linear.nonlinearity = NonlinearitySpec{};
  const NonlinearitySpec& nl = cfg.model.nonlinearity;
  const bool has_nl = nl.kind != NonlinearityKind::none;

  // Quadrature nodes in tau and the extra times where psi itself is needed.
  const auto& ref = gauss_legendre(cfg.order);
  struct Node {
    double t;
    double w;
    int panel;  // -1 for tail sample times
  };
  std::vector<Node> nodes;
  for (std::size_t p = 0; p + 1 < cfg.checkpoints.size(); ++p) {
    const auto rule = mapped_rule(ref, cfg.checkpoints[p], cfg.checkpoints[p + 1]);
    for (std::size_t q = 0; q < rule.nodes.size(); ++q)
      nodes.push_back({rule.nodes[q], rule.weights[q], static_cast<int>(p)});
  }
  for (double t : cfg.tail_times) nodes.push_back({t, 0.0, -1});
  std::sort(nodes.begin(), nodes.end(), [](const Node& a, const Node& b) { return a.t < b.t; });

  const std::size_t panels = cfg.checkpoints.size() - 1;
  std::vector<SpinorField> panel_sum(panels, SpinorField(psi0.grid, psi0.time));
  std::map<double, SpinorField> psi_at;
  SpinorField cur = psi0;
  for (const Node& nd : nodes) {
    cur = evolve(cur, nd.t, cfg.model, cfg.cfl, cfg.dt_max);
    if (nd.panel < 0) {
      psi_at.emplace(nd.t, cur);
      continue;
    }
    if (!has_nl) continue;
    SpinorField f = evolution_source(nl, cur);
    f.time = nd.t;
    const SpinorField back = evolve(f, psi0.time, linear, cfg.cfl, cfg.dt_max);
    panel_sum[nd.panel].axpy(nd.w, back);
  }

  res.increments.reserve(panels);
  SpinorField total(psi0.grid, psi0.time);
  for (std::size_t p = 0; p < panels; ++p) {
    res.increments.push_back(std::sqrt(l2_norm_sq(panel_sum[p])));
    total += panel_sum[p];
  }
  res.monotone = true;
  for (std::size_t p = 1; p < res.increments.size(); ++p)
    if (res.increments[p] > res.increments[p - 1]) res.monotone = false;
  const bool small = res.increments.back() < cfg.tol;
  res.converged = res.condition_holds && res.monotone && small;

  res.psi_plus = psi0;
  res.psi_plus += total;
  // The free comparison follows the same step sequence as psi.
  const double last_tail =
      cfg.tail_times.empty() ? psi0.time : *std::max_element(cfg.tail_times.begin(), cfg.tail_times.end());
  SpinorField free = res.psi_plus;
  for (const Node& nd : nodes) {
    if (nd.t > last_tail) break;
    free = evolve(free, nd.t, linear, cfg.cfl, cfg.dt_max);
    if (nd.panel >= 0) continue;
    if (!res.tail_times.empty() && res.tail_times.back() == nd.t) continue;
    res.tail_times.push_back(nd.t);
    res.tail_norms.push_back(std::sqrt(l2_norm_sq(psi_at.at(nd.t) - free)));
  }
  return res;
}

}  // namespace flrw
