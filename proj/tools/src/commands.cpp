#include "flrw_app/app.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <flrw_dirac/diagnostics.hpp>
#include <flrw_dirac/record_io.hpp>
#include <flrw_dirac/snapshot.hpp>

namespace flrw::app {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir + "': " + ec.message());
}

std::string snapshot_name(const std::string& stem, std::size_t i) {
  std::ostringstream os;
  os << stem << ".snap." << std::setw(4) << std::setfill('0') << i << ".bin";
  return os.str();
}

template <class F>
int guarded(std::ostream& err, F&& f) {
  try {
    return f();
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRuntime;
  }
}

double param_double(const json& params, const std::string& key, double dflt, const std::string& check) {
  if (!params.contains(key)) return dflt;
  if (!params.at(key).is_number()) throw ValidationError(check + ".params." + key, "must be a number");
  return params.at(key).get<double>();
}

cplx param_complex(const json& params, const std::string& key, cplx dflt, const std::string& check) {
  if (!params.contains(key)) return dflt;
  const auto& v = params.at(key);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ValidationError(check + ".params." + key, "must be a [re, im] pair");
}

CheckReport decay_check(const RunRecord& rec, double tol, const json& params) {
  if (rec.l2.size() != rec.times.size() || rec.l2.empty())
    throw DiagnosticsError("record is missing the series l2");
  std::pair<double, double> window{rec.times.front(), rec.times.back()};
  if (params.contains("window")) {
    const auto& w = params.at("window");
    if (!w.is_array() || w.size() != 2 || !w[0].is_number() || !w[1].is_number())
      throw ValidationError("decay_fit.params.window", "must be [t_lo, t_hi]");
    window = {w[0].get<double>(), w[1].get<double>()};
  }
  const double expected = param_double(params, "expected", -1.5 * rec.ell, "decay_fit");
  const DecayFit fit = fit_decay(rec.times, rec.l2, window);
  CheckReport r;
  r.check = "decay_fit";
  r.window = fit.window;
  r.fitted_constants["exponent"] = fit.exponent;
  r.fitted_constants["intercept"] = fit.intercept;
  r.fitted_constants["residual"] = fit.residual;
  r.fitted_constants["expected"] = expected;
  r.max_mismatch = std::abs(fit.exponent - expected);
  r.passed = r.max_mismatch <= tol;
  return r;
}

}  // namespace

SimulationOutput simulate(const RunConfig& cfg, bool write_files) {
  SpinorField f0 = make_initial_data(cfg.initial, cfg.grid, cfg.solver.t_start);
  cone_safety_precheck(cfg, f0);
  SimulationOutput out;
  out.run = propagate(f0, cfg.solver, cfg.model);
  RunRecord& rec = out.run.record;
  rec.tags["initial_family"] = to_string(cfg.initial.family);
  rec.tags["seed"] = std::to_string(cfg.seed);
  rec.tags["name"] = cfg.name;
  if (!write_files) return out;
  ensure_dir(cfg.out_dir);
  const fs::path dir(cfg.out_dir);
  rec.snapshots.clear();
  for (std::size_t i = 0; i < out.run.snapshots.size(); ++i) {
    const std::string name = snapshot_name(cfg.name, i);
    write_snapshot((dir / name).string(), out.run.snapshots[i]);
    rec.snapshots.push_back(name);
    out.snapshot_paths.push_back((dir / name).string());
  }
  out.record_path = (dir / (cfg.name + ".record.json")).string();
  write_record(out.record_path, rec);
  return out;
}

json run_suite(const RunRecord& rec, const json& suite, bool& all_passed) {
  all_passed = true;
  json checks = json::array();
  if (suite.is_null()) return checks;
  if (!suite.is_object()) throw ValidationError("suite", "must be an object");
  for (auto it = suite.begin(); it != suite.end(); ++it) {
    if (it.key() != "checks") throw ValidationError("suite." + it.key(), "unknown key");
  }
  if (!suite.contains("checks")) return checks;
  const auto& list = suite.at("checks");
  if (!list.is_array()) throw ValidationError("suite.checks", "must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& c = list[i];
    const std::string where = "suite.checks[" + std::to_string(i) + "]";
    if (!c.is_object() || !c.contains("name") || !c.at("name").is_string())
      throw ValidationError(where + ".name", "is required");
    for (auto kt = c.begin(); kt != c.end(); ++kt) {
      if (kt.key() != "name" && kt.key() != "tolerance" && kt.key() != "params")
        throw ValidationError(where + "." + kt.key(), "unknown key");
    }
    const std::string name = c.at("name").get<std::string>();
    const json params = c.value("params", json::object());
    if (!params.is_object()) throw ValidationError(where + ".params", "must be an object");
    double tol = 0.0;
    if (c.contains("tolerance")) {
      if (!c.at("tolerance").is_number() || !(c.at("tolerance").get<double>() > 0.0))
        throw ValidationError(where + ".tolerance", "must be a positive number");
      tol = c.at("tolerance").get<double>();
    }
    CheckReport r;
    if (name == "energy_identity") {
      r = check_energy_identity(rec, tol > 0 ? tol : 1e-6);
    } else if (name == "gamma2_conservation") {
      r = check_gamma2_conservation(rec, tol > 0 ? tol : 1e-6);
    } else if (name == "lm_evolution") {
      r = check_lm_evolution(rec, param_complex(params, "z", rec.defect_z, name), tol > 0 ? tol : 1e-8);
    } else if (name == "forward_bound") {
      const double k = param_double(params, "k", rec.sobolev_k, name);
      r = check_forward_bound(rec, static_cast<int>(k), tol > 0 ? tol : 10.0);
    } else if (name == "decay_fit") {
      r = decay_check(rec, tol > 0 ? tol : 1e-2, params);
    } else {
      throw ValidationError(where + ".name", "unknown check '" + name + "'");
    }
    all_passed = all_passed && r.passed;
    checks.push_back(report_to_json(r));
  }
  return checks;
}

int cmd_simulate(const std::string& config_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig cfg = load_run_config(config_path);
    const SimulationOutput res = simulate(cfg, true);
    const RunRecord& rec = res.run.record;
    out << "status " << to_string(rec.status) << "\n";
    out << "records " << rec.size() << " t_final " << rec.times.back() << "\n";
    if (rec.status == RunStatus::blowup) out << "blowup_time " << rec.blowup_time << "\n";
    out << "record " << res.record_path << "\n";
    for (const auto& p : res.snapshot_paths) out << "snapshot " << p << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_verify(const std::string& record_path, const std::string& suite_path,
               const std::string& report_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (!fs::exists(record_path)) throw std::runtime_error("record '" + record_path + "' not found");
    const RunRecord rec = read_record(record_path);
    const json suite = load_json(suite_path, "suite");
    bool all = true;
    json report;
    report["record"] = record_path;
    report["checks"] = run_suite(rec, suite, all);
    report["status"] = all ? "pass" : "fail";
    const std::string text = report.dump(2) + "\n";
    if (report_path.empty()) {
      out << text;
    } else {
      std::ofstream f(report_path);
      if (!f) throw std::runtime_error("cannot write report '" + report_path + "'");
      f << text;
    }
    std::ostream& summary = report_path.empty() ? err : out;
    for (const auto& c : report["checks"]) {
      summary << c["check"].get<std::string>() << " " << c["status"].get<std::string>() << " "
          << c["max_mismatch"].dump() << "\n";
    }
    return all ? static_cast<int>(kOk) : static_cast<int>(kVerifyFailed);
  });
}

int cmd_kernel(const KernelRequest& req, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    KernelEval ke;
    ke.cosmology = Cosmology{req.ell, req.a0};
    ke.m = req.m;
    ke.epsilon = req.epsilon;
    SpinorField snap;
    if (!req.reconstruct_snapshot.empty()) {
      snap = read_snapshot(req.reconstruct_snapshot);
      ke.epsilon = snap.time;
    }
    if (req.times.empty()) throw ValidationError("kernel.t", "at least one time is required");
    try {
      ke.validate();
      for (double t : req.times) {
        if (!(t >= ke.epsilon)) throw std::invalid_argument("kernel.t must be >= epsilon");
        require_kernel_mode(ke, t);
      }
      if (req.kind == "E" && !(req.t0 >= 1.0))
        throw std::invalid_argument("kernel.t0 must be >= 1");
    } catch (const std::logic_error& e) {
      throw ValidationError("kernel", e.what());
    }
    if (req.kind != "K1" && req.kind != "E") throw ValidationError("kernel.kind", "must be K1 or E");
    if (req.r_points < 1) throw ValidationError("kernel.r_points", "must be positive");

    if (!req.reconstruct_snapshot.empty()) {
      if (req.times.size() != 1) throw ValidationError("kernel.t", "reconstruction takes one time");
      if (req.out.empty()) throw ValidationError("kernel.out", "required for reconstruction");
      const SpinorField res = reconstruct_free(snap, req.times.front(), ke);
      write_snapshot(req.out, res);
      out << "snapshot " << req.out << " t " << res.time << "\n";
      return static_cast<int>(kOk);
    }

    std::ostringstream csv;
    csv << "r,t,t0_or_eps,Re,Im\n";
    csv << std::setprecision(17);
    for (double t : req.times) {
      const double lower = req.kind == "E" ? req.t0 : ke.epsilon;
      const double span = phi(ke.cosmology, t) - phi(ke.cosmology, lower);
      if (req.kind == "E" && !(t > req.t0)) throw ValidationError("kernel.t", "must exceed t0 for E");
      for (int j = 0; j < req.r_points; ++j) {
        const double r = span * static_cast<double>(j) / static_cast<double>(req.r_points);
        const cplx v = req.kind == "E" ? kernel_E(r, t, req.t0, ke) : kernel_K1(r, t, ke);
        csv << r << "," << t << "," << lower << "," << v.real() << "," << v.imag() << "\n";
      }
    }
    if (req.out.empty()) {
      out << csv.str();
    } else {
      std::ofstream f(req.out);
      if (!f) throw std::runtime_error("cannot write '" + req.out + "'");
      f << csv.str();
    }
    return static_cast<int>(kOk);
  });
}

int cmd_sweep(const std::string& sweep_path, const std::string& csv_path, std::ostream& out,
              std::ostream& err) {
  return guarded(err, [&] {
    const auto rows = run_sweep(load_json(sweep_path, "sweep"));
    const std::string csv = sweep_csv(rows);
    if (csv_path.empty()) {
      out << csv;
    } else {
      std::ofstream f(csv_path);
      if (!f) throw std::runtime_error("cannot write '" + csv_path + "'");
      f << csv;
    }
    return static_cast<int>(kOk);
  });
}

int cmd_lifespan(const BlowupCase& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError("case", e.what());
    }
    const Lifespan l = lifespan(c);
    json j;
    j["finite"] = l.finite;
    j["T_bu"] = l.finite ? json(l.T) : json(nullptr);
    j["log_T"] = l.finite ? json(l.log_T) : json(nullptr);
    j["lhs"] = l.lhs;
    j["rhs_limit"] = l.rhs_limit;
    j["j_converged"] = l.j_converged;
    j["solvability_E1"] = l.solvability_E1;
    out << std::setprecision(17) << j.dump(2) << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_classify(const BlowupCase& c, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    try {
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ValidationError("case", e.what());
    }
    const RegimeVerdict v = classify(c);
    json j;
    j["regime"] = to_string(v.regime);
    j["branch"] = v.branch;
    j["branch_name"] = v.branch_name;
    j["threshold_value"] = v.threshold_value;
    out << j.dump(2) << "\n";
    return static_cast<int>(kOk);
  });
}

}  // namespace flrw::app
