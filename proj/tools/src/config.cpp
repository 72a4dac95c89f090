#include "flrw_app/app.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <flrw_dirac/field.hpp>
#include <flrw_dirac/spacetime.hpp>

namespace flrw::app {
namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) throw ValidationError(path, "must be an object");
}

void reject_unknown(const json& j, const std::string& path, std::set<std::string> allowed) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ValidationError(path.empty() ? it.key() : path + "." + it.key(), "unknown key");
    }
  }
}

double get_double(const json& j, const std::string& key, const std::string& path, double dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError(path + "." + key, "must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ValidationError(path + "." + key, "must be finite");
  return x;
}

long long get_int(const json& j, const std::string& key, const std::string& path, long long dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_number_integer()) throw ValidationError(path + "." + key, "must be an integer");
  return v.get<long long>();
}

bool get_bool(const json& j, const std::string& key, const std::string& path, bool dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_boolean()) throw ValidationError(path + "." + key, "must be a boolean");
  return v.get<bool>();
}

std::string get_string(const json& j, const std::string& key, const std::string& path,
                       const std::string& dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_string()) throw ValidationError(path + "." + key, "must be a string");
  return v.get<std::string>();
}

cplx parse_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ValidationError(path, "must be a number or a [re, im] pair");
}

std::array<double, 3> get_point(const json& j, const std::string& key, const std::string& path) {
  std::array<double, 3> p{0.0, 0.0, 0.0};
  if (!j.contains(key)) return p;
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty() || v.size() > 3) {
    throw ValidationError(path + "." + key, "must be an array of 1 to 3 numbers");
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) throw ValidationError(path + "." + key, "must contain numbers");
    p[i] = v[i].get<double>();
  }
  return p;
}

// Core validators prefix their messages with the dotted field name.
template <class F>
void validated(const std::string& section, F&& f) {
  try {
    f();
  } catch (const ValidationError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    const auto sp = msg.find(' ');
    const std::string head = msg.substr(0, sp);
    if (head.rfind(section + ".", 0) == 0) {
      throw ValidationError(head, sp == std::string::npos ? "invalid" : msg.substr(sp + 1));
    }
    throw ValidationError(section, msg);
  }
}

std::vector<BilinearMonomial> parse_monomials(const json& v, const std::string& path) {
  if (!v.is_array()) throw ValidationError(path, "must be an array of [coef, p, q] triples");
  std::vector<BilinearMonomial> out;
  for (const auto& t : v) {
    if (!t.is_array() || t.size() != 3 || !t[0].is_number() || !t[1].is_number_integer() ||
        !t[2].is_number_integer()) {
      throw ValidationError(path, "entries must be [coef, p, q] with integer powers");
    }
    out.push_back({t[0].get<double>(), t[1].get<int>(), t[2].get<int>()});
  }
  return out;
}

PotentialSpec parse_potential(const json& j) {
  const std::string path = "potential";
  require_object(j, path);
  reject_unknown(j, path, {"kind", "amplitude", "center", "width", "time_decay", "matrix",
                           "hermitian_required", "gamma2_condition_required"});
  PotentialSpec p;
  const std::string kind = get_string(j, "kind", path, "zero");
  if (kind == "zero") {
    p.kind = PotentialKind::zero;
  } else if (kind == "scalar_bump") {
    p.kind = PotentialKind::scalar_bump;
  } else if (kind == "custom_matrix") {
    p.kind = PotentialKind::custom_matrix;
  } else {
    throw ValidationError("potential.kind", "unknown kind '" + kind + "'");
  }
  p.amplitude = get_double(j, "amplitude", path, 0.0);
  p.center = get_point(j, "center", path);
  p.width = get_double(j, "width", path, 1.0);
  p.time_decay = get_double(j, "time_decay", path, 0.0);
  p.hermitian_required = get_bool(j, "hermitian_required", path, false);
  p.gamma2_condition_required = get_bool(j, "gamma2_condition_required", path, false);
  if (j.contains("matrix")) {
    const auto& m = j.at("matrix");
    if (!m.is_array() || m.size() != 4) throw ValidationError("potential.matrix", "must be 4x4");
    for (std::size_t r = 0; r < 4; ++r) {
      if (!m[r].is_array() || m[r].size() != 4) {
        throw ValidationError("potential.matrix", "must be 4x4");
      }
      for (std::size_t c = 0; c < 4; ++c) p.matrix(r, c) = parse_complex(m[r][c], "potential.matrix");
    }
  } else if (p.kind == PotentialKind::custom_matrix) {
    throw ValidationError("potential.matrix", "required for custom_matrix");
  }
  validated(path, [&] { p.validate(); });
  return p;
}

NonlinearitySpec parse_nonlinearity(const json& j) {
  const std::string path = "nonlinearity";
  require_object(j, path);
  reject_unknown(j, path, {"kind", "alpha", "sign", "c0", "alpha_fn", "beta_fn"});
  NonlinearitySpec n;
  const std::string kind = get_string(j, "kind", path, "none");
  try {
    n.kind = nonlinearity_from_string(kind);
  } catch (const std::invalid_argument&) {
    throw ValidationError("nonlinearity.kind", "unknown kind '" + kind + "'");
  }
  n.alpha_exp = get_double(j, "alpha", path, 2.0);
  n.sign = static_cast<int>(get_int(j, "sign", path, 1));
  n.c0 = get_double(j, "c0", path, 1.0);
  validated(path, [&] {
    if (j.contains("alpha_fn")) n.alpha_fn = bilinear_polynomial(parse_monomials(j.at("alpha_fn"), "nonlinearity.alpha_fn"));
    if (j.contains("beta_fn")) n.beta_fn = bilinear_polynomial(parse_monomials(j.at("beta_fn"), "nonlinearity.beta_fn"));
    n.validate();
  });
  return n;
}

}  // namespace

json load_json(const std::string& path, const std::string& what) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + what + " '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(what, std::string("malformed JSON: ") + e.what());
  }
}

RunConfig parse_run_config(const json& j) {
  require_object(j, "config");
  reject_unknown(j, "", {"cosmology", "mass", "grid", "potential", "nonlinearity", "solver",
                         "initial_data", "outputs", "diagnostics"});
  for (const char* req : {"cosmology", "grid", "solver", "initial_data"}) {
    if (!j.contains(req)) throw ValidationError(req, "section is required");
  }
  RunConfig cfg;

  const auto& cj = j.at("cosmology");
  require_object(cj, "cosmology");
  reject_unknown(cj, "cosmology", {"ell", "a0"});
  if (!cj.contains("ell")) throw ValidationError("cosmology.ell", "is required");
  cfg.model.cosmology.ell = get_double(cj, "ell", "cosmology", 0.0);
  cfg.model.cosmology.a0 = get_double(cj, "a0", "cosmology", 1.0);
  validated("cosmology", [&] { cfg.model.cosmology.validate(); });

  if (j.contains("mass")) {
    const auto& mj = j.at("mass");
    require_object(mj, "mass");
    reject_unknown(mj, "mass", {"re", "im"});
    cfg.model.mass = {get_double(mj, "re", "mass", 0.0), get_double(mj, "im", "mass", 0.0)};
  }

  const auto& gj = j.at("grid");
  require_object(gj, "grid");
  reject_unknown(gj, "grid", {"dim", "n", "box_length"});
  cfg.grid.dim = static_cast<int>(get_int(gj, "dim", "grid", 1));
  const long long n = get_int(gj, "n", "grid", 64);
  if (n < 0 || n > (1LL << 20)) throw ValidationError("grid.n", "out of range");
  cfg.grid.n = static_cast<std::size_t>(n);
  cfg.grid.box_length = get_double(gj, "box_length", "grid", 0.0);
  validated("grid", [&] { cfg.grid.validate(); });
  if (cfg.grid.points() > (std::size_t{1} << 24)) {
    throw ValidationError("grid.n", "grid exceeds 2^24 points");
  }

  if (j.contains("potential")) cfg.model.potential = parse_potential(j.at("potential"));
  if (j.contains("nonlinearity")) cfg.model.nonlinearity = parse_nonlinearity(j.at("nonlinearity"));
  validated("mass", [&] { cfg.model.validate(); });

  const auto& sj = j.at("solver");
  require_object(sj, "solver");
  reject_unknown(sj, "solver", {"t_start", "t_end", "cfl", "dt_max", "record_every", "method",
                                "sobolev_k", "blowup_norm_threshold", "cone_guard",
                                "record_cone_leak", "defect_z", "support_radius"});
  auto& s = cfg.solver;
  s.t_start = get_double(sj, "t_start", "solver", 1.0);
  if (!sj.contains("t_end")) throw ValidationError("solver.t_end", "is required");
  s.t_end = get_double(sj, "t_end", "solver", 2.0);
  s.cfl = get_double(sj, "cfl", "solver", 0.5);
  s.dt_max = get_double(sj, "dt_max", "solver", 0.05);
  s.record_interval = get_double(sj, "record_every", "solver", 0.0);
  s.method = get_string(sj, "method", "solver", "rk4");
  s.sobolev_k = static_cast<int>(get_int(sj, "sobolev_k", "solver", 1));
  s.blowup_norm_threshold = get_double(sj, "blowup_norm_threshold", "solver", 1e6);
  s.cone_guard = get_bool(sj, "cone_guard", "solver", false);
  s.record_cone_leak = get_bool(sj, "record_cone_leak", "solver", false);
  if (sj.contains("defect_z")) s.defect_z = parse_complex(sj.at("defect_z"), "solver.defect_z");
  s.support_radius = get_double(sj, "support_radius", "solver", -1.0);
  validated("solver", [&] { s.validate(); });

  const auto& ij = j.at("initial_data");
  require_object(ij, "initial_data");
  reject_unknown(ij, "initial_data", {"family", "amplitude", "width", "center", "components",
                                      "wavenumber", "lm_constrained", "seed"});
  auto& d = cfg.initial;
  const std::string fam = get_string(ij, "family", "initial_data", "gaussian");
  try {
    d.family = initial_family_from_string(fam);
  } catch (const std::invalid_argument&) {
    throw ValidationError("initial_data.family", "unknown family '" + fam + "'");
  }
  d.amplitude = get_double(ij, "amplitude", "initial_data", 1.0);
  d.width = get_double(ij, "width", "initial_data", 1.0);
  d.center = get_point(ij, "center", "initial_data");
  if (ij.contains("components")) {
    const auto& cv = ij.at("components");
    if (!cv.is_array() || cv.size() != 4) {
      throw ValidationError("initial_data.components", "must have 4 entries");
    }
    for (std::size_t a = 0; a < 4; ++a) d.components[a] = parse_complex(cv[a], "initial_data.components");
  }
  d.wavenumber = get_double(ij, "wavenumber", "initial_data", 0.0);
  d.lm_constrained = get_bool(ij, "lm_constrained", "initial_data", false);
  const long long seed = get_int(ij, "seed", "initial_data", 0);
  if (seed < 0) throw ValidationError("initial_data.seed", "must be nonnegative");
  d.seed = static_cast<std::uint64_t>(seed);
  cfg.seed = d.seed;
  validated("initial_data", [&] { d.validate(); });

  if (j.contains("outputs")) {
    const auto& oj = j.at("outputs");
    require_object(oj, "outputs");
    reject_unknown(oj, "outputs", {"dir", "name", "snapshots", "snapshot_every"});
    cfg.out_dir = get_string(oj, "dir", "outputs", ".");
    cfg.name = get_string(oj, "name", "outputs", "run");
    if (cfg.name.empty() || cfg.name.find('/') != std::string::npos) {
      throw ValidationError("outputs.name", "must be a plain file stem");
    }
    cfg.snapshots = get_bool(oj, "snapshots", "outputs", false);
    const long long every = get_int(oj, "snapshot_every", "outputs", cfg.snapshots ? 1 : 0);
    if (every < 0) throw ValidationError("outputs.snapshot_every", "must be >= 0");
    if (cfg.snapshots && every == 0) {
      throw ValidationError("outputs.snapshot_every", "must be positive when snapshots are on");
    }
    s.snapshot_every = cfg.snapshots ? static_cast<int>(every) : 0;
  }

  if (cfg.model.potential.hermitian_required || cfg.model.potential.gamma2_condition_required) {
    try {
      check_potential_flags(cfg.model.potential, cfg.grid, s.t_start, s.t_end, cfg.seed);
    } catch (const PotentialFlagError& e) {
      throw ValidationError("potential", e.what());
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  return parse_run_config(load_json(path, "config"));
}

void cone_safety_precheck(const RunConfig& cfg, const SpinorField& f0) {
  if (!cfg.solver.cone_guard) return;
  const Grid& g = cfg.grid;
  double r0 = cfg.solver.support_radius;
  if (r0 < 0.0) r0 = mass_radius(f0, cfg.solver.support_center, 1.0 - 1e-12);
  const double limit = 0.5 * g.box_length - 2.0 * g.spacing();
  const Cosmology& c = cfg.model.cosmology;
  const double reach = r0 + std::abs(phi(c, cfg.solver.t_end) - phi(c, cfg.solver.t_start)) / c.a0;
  if (reach > limit) {
    std::ostringstream os;
    os << "forward cone radius " << reach << " at t_end exceeds the periodic limit " << limit;
    throw ValidationError("solver.t_end", os.str());
  }
}

}  // namespace flrw::app
