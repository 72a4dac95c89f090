#include "flrw_app/app.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <tuple>

#include <flrw_dirac/parallel.hpp>

namespace flrw::app {
namespace {

using nlohmann::json;

std::vector<double> axis(const json& j, const std::string& key, std::vector<double> dflt) {
  if (!j.contains(key)) return dflt;
  const auto& v = j.at(key);
  if (!v.is_array()) throw ValidationError("sweep." + key, "must be an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw ValidationError("sweep." + key, "must be an array of numbers");
    out.push_back(x.get<double>());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::optional<EmpiricalBlowupConfig> parse_empirical(const json& j) {
  if (!j.contains("empirical") || j.at("empirical").is_null()) return std::nullopt;
  const auto& e = j.at("empirical");
  if (!e.is_object()) throw ValidationError("sweep.empirical", "must be an object");
  EmpiricalBlowupConfig cfg;
  for (auto it = e.begin(); it != e.end(); ++it) {
    const std::string& k = it.key();
    const std::string path = "sweep.empirical." + k;
    if (k == "dim" || k == "n") {
      if (!it->is_number_integer()) throw ValidationError(path, "must be an integer");
      if (k == "dim") cfg.grid.dim = it->get<int>();
      else cfg.grid.n = it->get<std::size_t>();
      continue;
    }
    if (!it->is_number()) throw ValidationError(path, "must be a number");
    const double v = it->get<double>();
    if (k == "box_length") cfg.grid.box_length = v;
    else if (k == "t_end") cfg.solver.t_end = v;
    else if (k == "cfl") cfg.solver.cfl = v;
    else if (k == "dt_max") cfg.solver.dt_max = v;
    else if (k == "slack") cfg.slack = v;
    else throw ValidationError(path, "unknown key");
  }
  try {
    cfg.grid.validate();
    cfg.solver.validate();
  } catch (const std::invalid_argument& ex) {
    throw ValidationError("sweep.empirical", ex.what());
  }
  return cfg;
}

}  // namespace

std::vector<SweepRow> run_sweep(const json& sweep) {
  if (!sweep.is_object()) throw ValidationError("sweep", "must be an object");
  for (auto it = sweep.begin(); it != sweep.end(); ++it) {
    static const std::vector<std::string> known{"ell", "alpha", "im_m", "c0", "R", "E1", "empirical"};
    if (std::find(known.begin(), known.end(), it.key()) == known.end())
      throw ValidationError("sweep." + it.key(), "unknown key");
  }
  const auto ells = axis(sweep, "ell", {});
  const auto alphas = axis(sweep, "alpha", {});
  const auto ims = axis(sweep, "im_m", {0.0});
  const auto c0s = axis(sweep, "c0", {1.0});
  const auto Rs = axis(sweep, "R", {1.0});
  const auto E1s = axis(sweep, "E1", {1.0});
  const auto empirical = parse_empirical(sweep);

  std::vector<SweepRow> rows;
  for (double l : ells)
    for (double a : alphas)
      for (double im : ims)
        for (double c0 : c0s)
          for (double R : Rs)
            for (double e1 : E1s) {
              SweepRow row;
              row.c = BlowupCase{l, a, im, c0, R, e1};
              rows.push_back(row);
            }

  parallel_for(rows.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      SweepRow& row = rows[i];
      try {
        row.c.validate();
        const RegimeVerdict v = classify(row.c);
        row.regime = to_string(v.regime);
        row.branch = v.branch;
        const Lifespan ls = lifespan(row.c);
        row.T_bu = ls.finite ? fmt(ls.T) : "inf";
        if (empirical) {
          const auto rep = empirical_blowup(row.c, *empirical);
          row.t_numerical = rep.blew_up ? fmt(rep.t_numerical) : "none";
          row.satisfied = rep.blew_up ? (rep.satisfied ? "true" : "false") : rep.verdict;
        }
      } catch (const std::exception& ex) {
        row.regime = std::string("error: ") + ex.what();
        row.branch = 0;
        row.T_bu.clear();
        row.t_numerical.clear();
        row.satisfied.clear();
      }
    }
  }, 1);
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "ell,alpha,im_m,c0,R,E1,regime,branch,T_bu,t_numerical,satisfied\n";
  for (const auto& r : rows) {
    os << fmt(r.c.ell) << ',' << fmt(r.c.alpha_exp) << ',' << fmt(r.c.im_m_abs) << ','
       << fmt(r.c.c0) << ',' << fmt(r.c.R) << ',' << fmt(r.c.E1) << ',' << csv_field(r.regime)
       << ',' << r.branch << ',' << r.T_bu << ',' << r.t_numerical << ',' << r.satisfied << '\n';
  }
  return os.str();
}

}  // namespace flrw::app
