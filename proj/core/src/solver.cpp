#include "flrw_dirac/solver.hpp"

#include <algorithm>
#include <cmath>

namespace flrw {

void Model::validate() const {
  cosmology.validate();
  if (!std::isfinite(mass.real()) || !std::isfinite(mass.imag()))
    throw std::invalid_argument("mass must be finite");
  potential.validate();
  nonlinearity.validate();
}

void SolverConfig::validate() const {
  if (!(t_start >= 1.0) || !std::isfinite(t_start))
    throw std::invalid_argument("solver.t_start must be >= 1");
  if (!std::isfinite(t_end) || !(t_end >= t_start))
    throw std::invalid_argument("solver.t_end must be >= solver.t_start");
  if (!(cfl > 0.0 && cfl < 1.0)) throw std::invalid_argument("solver.cfl must lie in (0,1)");
  if (!(dt_max > 0.0)) throw std::invalid_argument("solver.dt_max must be positive");
  if (method != "rk4") throw std::invalid_argument("solver.method must be rk4");
  if (!(blowup_norm_threshold > 1.0))
    throw std::invalid_argument("solver.blowup_norm_threshold must exceed 1");
  if (!(record_interval >= 0.0)) throw std::invalid_argument("solver.record_interval must be >= 0");
  if (sobolev_k < 0 || sobolev_k > 6) throw std::invalid_argument("solver.sobolev_k must lie in [0,6]");
  if (std::abs(std::abs(defect_z) - 1.0) > 1e-12)
    throw std::invalid_argument("solver.defect_z must have modulus 1");
  if (snapshot_every < 0) throw std::invalid_argument("solver.snapshot_every must be >= 0");
}

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed: return "completed";
    case RunStatus::blowup: return "blowup";
    case RunStatus::cone_violation: return "cone_violation";
  }
  return "completed";
}

RunStatus run_status_from_string(const std::string& s) {
  for (auto v : {RunStatus::completed, RunStatus::blowup, RunStatus::cone_violation})
    if (to_string(v) == s) return v;
  throw std::invalid_argument("unknown run status: " + s);
}

DiracOperator::DiracOperator(const Model& model, const Grid& grid)
    : model_(model),
      grid_(grid),
      plan_(grid, 4),
      has_potential_(model.potential.kind != PotentialKind::zero),
      k1_(grid), k2_(grid), k3_(grid), k4_(grid), tmp_(grid), src_(grid) {
  model_.validate();
  const std::size_t n = grid.points();
  k_.resize(n);
  for (std::size_t idx = 0; idx < n; ++idx) k_[idx] = grid.wavevector(idx, true);
  hat_.resize(4 * n);
  vmat_ = model.potential.structure();
  imv_ = imaginary_part(vmat_);
  if (has_potential_) {
    envelope_.resize(n);
    for (std::size_t idx = 0; idx < n; ++idx)
      envelope_[idx] = model.potential.envelope(grid.position(idx), 1.0);
  }
}

void DiracOperator::rhs(const SpinorField& f, double t, SpinorField& out,
                        const SourceProvider* source) {
  const std::size_t n = grid_.points();
  if (!(out.grid == grid_)) out = SpinorField(grid_, t);
  out.time = t;
  std::copy(f.data.begin(), f.data.end(), hat_.begin());
  plan_.forward(hat_.data());
  const double inv_n = 1.0 / static_cast<double>(n);
  cplx* h0 = hat_.data();
  cplx* h1 = h0 + n;
  cplx* h2 = h1 + n;
  cplx* h3 = h2 + n;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const auto& q = k_[idx];
    const cplx xm{q[0], -q[1]}, xp{q[0], q[1]};
    const cplx u0 = h0[idx], u1 = h1[idx], v0 = h2[idx], v1 = h3[idx];
    // i (sigma . xi) acting on the lower and upper halves.
    const cplx su0 = q[2] * v0 + xm * v1;
    const cplx su1 = xp * v0 - q[2] * v1;
    const cplx sv0 = q[2] * u0 + xm * u1;
    const cplx sv1 = xp * u0 - q[2] * u1;
    const cplx s = kI * inv_n;
    h0[idx] = s * su0;
    h1[idx] = s * su1;
    h2[idx] = s * sv0;
    h3[idx] = s * sv1;
  }
  plan_.backward(hat_.data());

  const Cosmology& c = model_.cosmology;
  const double inv_a = 1.0 / scale(c, t);
  const double damp = 1.5 * c.ell / t;
  const cplx mt = kI * model_.mass / t;
  const double vt = has_potential_ ? std::pow(t, -model_.potential.time_decay) : 0.0;
  const bool nonlinear = model_.nonlinearity.kind != NonlinearityKind::none;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const Spinor p = f.at(idx);
    Spinor r;
    for (std::size_t k = 0; k < 4; ++k) r[k] = -inv_a * hat_[k * n + idx] - damp * p[k];
    // gamma^0 = diag(1, 1, -1, -1)
    r[0] -= mt * p[0];
    r[1] -= mt * p[1];
    r[2] += mt * p[2];
    r[3] += mt * p[3];
    if (has_potential_) {
      const double e = envelope_[idx] * vt;
      if (e != 0.0) {
        const Spinor vp = flrw::apply(vmat_, p);
        for (std::size_t k = 0; k < 4; ++k) r[k] += kI * e * vp[k];
      }
    }
    if (nonlinear) {
      const Spinor nl = evolution_source_point(model_.nonlinearity, p);
      for (std::size_t k = 0; k < 4; ++k) r[k] += nl[k];
    }
    out.set(idx, r);
  }
  if (source && *source) {
    if (!(src_.grid == grid_)) src_ = SpinorField(grid_, t);
    std::fill(src_.data.begin(), src_.data.end(), cplx{});
    src_.time = t;
    (*source)(t, src_);
    out += src_;
  }
}

double DiracOperator::max_dt(double t, double cfl) const {
  return cfl * grid_.spacing() * scale(model_.cosmology, t);
}

SpinorField DiracOperator::step(const SpinorField& f, double dt, double cfl,
                                const SourceProvider* source) {
  const double t = f.time;
  const double a_min =
      std::min(scale(model_.cosmology, t), scale(model_.cosmology, t + dt));
  if (std::abs(dt) > cfl * grid_.spacing() * a_min * (1.0 + 1e-12))
    throw CflError("time step violates the CFL bound");
  rhs(f, t, k1_, source);
  tmp_ = f;
  tmp_.axpy(0.5 * dt, k1_);
  rhs(tmp_, t + 0.5 * dt, k2_, source);
  tmp_ = f;
  tmp_.axpy(0.5 * dt, k2_);
  rhs(tmp_, t + 0.5 * dt, k3_, source);
  tmp_ = f;
  tmp_.axpy(dt, k3_);
  rhs(tmp_, t + dt, k4_, source);
  SpinorField out = f;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.data.size(); ++i)
    out.data[i] += w * (k1_.data[i] + 2.0 * k2_.data[i] + 2.0 * k3_.data[i] + k4_.data[i]);
  out.time = t + dt;
  return out;
}

double DiracOperator::imv_integral(const SpinorField& f, double t) const {
  if (!has_potential_) return 0.0;
  const std::size_t n = grid_.points();
  const double vt = std::pow(t, -model_.potential.time_decay);
  double acc = 0.0;
  for (std::size_t idx = 0; idx < n; ++idx) {
    const double e = envelope_[idx] * vt;
    if (e == 0.0) continue;
    const Spinor p = f.at(idx);
    const Spinor q = flrw::apply(imv_, p);
    cplx s{};
    for (std::size_t k = 0; k < 4; ++k) s += std::conj(p[k]) * q[k];
    acc += e * s.real();
  }
  return acc * grid_.cell_volume();
}

SpinorField rhs(const SpinorField& f, double t, const Model& model) {
  DiracOperator op(model, f.grid);
  SpinorField out(f.grid, t);
  op.rhs(f, t, out);
  return out;
}

SpinorField step(const SpinorField& f, double dt, const Model& model, double cfl) {
  DiracOperator op(model, f.grid);
  return op.step(f, dt, cfl);
}

namespace {

bool potential_satisfies_gamma2(const PotentialSpec& p) {
  if (p.kind == PotentialKind::zero) return true;
  const Mat4C& g2 = basis().g2;
  const Mat4C m = p.structure();
  return max_abs_diff(m.transpose() * g2 + g2 * m, Mat4C::zero()) < 1e-12;
}

struct Recorder {
  const SolverConfig& cfg;
  const Model& model;
  DiracOperator& op;
  const SourceProvider* source;
  Cone cone;
  RunRecord& rec;

  void add(const SpinorField& f) {
    const double e = l2_norm_sq(f);
    rec.times.push_back(f.time);
    rec.energy.push_back(e);
    rec.l2.push_back(std::sqrt(e));
    rec.sobolev.push_back(sobolev_norm(f, cfg.sobolev_k));
    const auto d = bilinear_densities(f);
    double sx = 0.0, se = 0.0, sr2 = 0.0, sr = 0.0;
    for (std::size_t i = 0; i < d.xi.size(); ++i) {
      sx += d.xi[i];
      se += d.eta[i];
      sr2 += d.rho2[i];
      sr += std::sqrt(d.rho2[i]);
    }
    const double hv = f.grid.cell_volume();
    rec.xi_int.push_back(sx * hv);
    rec.eta_int.push_back(se * hv);
    rec.rho2_int.push_back(sr2 * hv);
    rec.rho_int.push_back(sr * hv);
    rec.imv_int.push_back(op.imv_integral(f, f.time));
    rec.gamma2.push_back(gamma2_bilinear(f));
    rec.defect.push_back(majorana_defect(f, cfg.defect_z));
    double sn = 0.0;
    const bool nonlinear = model.nonlinearity.kind != NonlinearityKind::none;
    if (nonlinear || (source && *source)) {
      SpinorField s = nonlinear ? evolution_source(model.nonlinearity, f)
                                : SpinorField(f.grid, f.time);
      if (source && *source) {
        SpinorField ext(f.grid, f.time);
        (*source)(f.time, ext);
        s += ext;
      }
      sn = sobolev_norm(s, cfg.sobolev_k);
    }
    rec.source_norm.push_back(sn);
    rec.cone_leak.push_back(cfg.record_cone_leak ? cone_mass(f, cone, model.cosmology) : 0.0);
  }
};

}  // namespace

Propagation propagate(const SpinorField& f0, const SolverConfig& cfg, const Model& model,
                      const SourceProvider& source) {
  cfg.validate();
  model.validate();
  if (std::abs(f0.time - cfg.t_start) > 1e-12 * std::max(1.0, cfg.t_start))
    throw std::invalid_argument("initial field time must equal solver.t_start");

  Propagation out;
  RunRecord& rec = out.record;
  rec.ell = model.cosmology.ell;
  rec.a0 = model.cosmology.a0;
  rec.mass = model.mass;
  rec.grid = f0.grid;
  rec.sobolev_k = cfg.sobolev_k;
  rec.defect_z = cfg.defect_z;
  rec.nonlinearity = to_string(model.nonlinearity.kind);
  rec.a_form = model.nonlinearity.kind == NonlinearityKind::none ||
               model.nonlinearity.is_a_form();
  rec.potential_zero = model.potential.kind == PotentialKind::zero ||
                       model.potential.amplitude == 0.0;
  rec.potential_gamma2 = potential_satisfies_gamma2(model.potential);
  rec.sourced = static_cast<bool>(source);

  DiracOperator op(model, f0.grid);
  const SourceProvider* src = source ? &source : nullptr;

  Cone cone;
  cone.apex = cfg.support_center;
  cone.t0 = cfg.t_start;
  cone.direction = ConeDirection::forward;
  cone.base_radius = cfg.support_radius >= 0.0
                         ? cfg.support_radius
                         : mass_radius(f0, cfg.support_center, 1.0 - 1e-12);
  rec.support_radius = cone.base_radius;
  const double wrap_limit = 0.5 * f0.grid.box_length - 2.0 * f0.grid.spacing();

  Recorder recorder{cfg, model, op, src, cone, rec};
  SpinorField f = f0;
  recorder.add(f);
  std::size_t n_records = 1;
  if (cfg.snapshot_every > 0) out.snapshots.push_back(f);

  const double e0 = rec.energy.front();
  const double limit_sq = cfg.blowup_norm_threshold * cfg.blowup_norm_threshold * e0;
  std::size_t next_index = 1;
  auto next_record_time = [&] {
    if (cfg.record_interval <= 0.0) return cfg.t_end;
    return std::min(cfg.t_end, cfg.t_start + next_index * cfg.record_interval);
  };

  while (f.time < cfg.t_end) {
    const double target = next_record_time();
    double dt = std::min(cfg.dt_max, op.max_dt(f.time, cfg.cfl));
    // Shrink when the scale factor decreases across the step.
    while (dt > 0.0 && dt > cfg.cfl * f0.grid.spacing() *
                                std::min(scale(model.cosmology, f.time),
                                         scale(model.cosmology, f.time + dt)))
      dt *= 0.5;
    bool lands = false;
    if (f.time + dt >= target * (1.0 - 1e-14)) {
      dt = target - f.time;
      lands = true;
    }
    if (cfg.cone_guard && cone_radius(cone, model.cosmology, f.time + dt) >= wrap_limit) {
      rec.status = RunStatus::cone_violation;
      break;
    }
    SpinorField next = op.step(f, dt, cfg.cfl, src);
    if (lands) next.time = target;
    const double e = l2_norm_sq(next);
    if (!next.is_finite() || !std::isfinite(e) || (e0 > 0.0 && e > limit_sq)) {
      rec.status = RunStatus::blowup;
      rec.blowup_time = f.time + 0.5 * dt;
      break;
    }
    f = std::move(next);
    const bool record_now = cfg.record_interval <= 0.0 || lands;
    if (record_now) {
      recorder.add(f);
      ++n_records;
      if (lands) ++next_index;
      if (cfg.snapshot_every > 0 && n_records % cfg.snapshot_every == 0)
        out.snapshots.push_back(f);
    }
  }
  out.final_field = std::move(f);
  return out;
}

Propagation duhamel_source(const SpinorField& f0, const SourceProvider& source,
                           const SolverConfig& cfg, const Model& model) {
  return propagate(f0, cfg, model, source);
}

SpinorField evolve(const SpinorField& f, double t_target, const Model& model, double cfl,
                   double dt_max, const SourceProvider& source) {
  if (!(t_target > 0.0)) throw std::domain_error("evolve target time must be positive");
  DiracOperator op(model, f.grid);
  const SourceProvider* src = source ? &source : nullptr;
  SpinorField cur = f;
  const double dir = t_target >= f.time ? 1.0 : -1.0;
  while (dir * (t_target - cur.time) > 0.0) {
    double dt = std::min(dt_max, op.max_dt(cur.time, cfl));
    while (cfl * f.grid.spacing() *
               std::min(scale(model.cosmology, cur.time),
                        scale(model.cosmology, cur.time + dir * dt)) < dt)
      dt *= 0.5;
    bool lands = false;
    if (dt >= dir * (t_target - cur.time) * (1.0 - 1e-14)) {
      dt = dir * (t_target - cur.time);
      lands = true;
    }
    cur = op.step(cur, dir * dt, cfl, src);
    if (lands) cur.time = t_target;
    if (!cur.is_finite()) throw std::runtime_error("non-finite field during evolve");
  }
  return cur;
}

SpinorField evolve_fixed(const SpinorField& f, double t_target, int steps,
                         const Model& model, double cfl) {
  if (steps < 1) throw std::invalid_argument("evolve_fixed needs at least one step");
  DiracOperator op(model, f.grid);
  const double dt = (t_target - f.time) / steps;
  const double t0 = f.time;
  SpinorField cur = f;
  for (int i = 0; i < steps; ++i) {
    cur = op.step(cur, dt, cfl);
    cur.time = t0 + (i + 1) * dt;
  }
  cur.time = t_target;
  return cur;
}

}  // namespace flrw
