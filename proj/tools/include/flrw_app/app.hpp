#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <flrw_dirac/blowup.hpp>
#include <flrw_dirac/initial_data.hpp>
#include <flrw_dirac/kernels.hpp>
#include <flrw_dirac/solver.hpp>

namespace flrw::app {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2, kVerifyFailed = 3 };

/// Configuration error naming the offending field, e.g. "solver.cfl".
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string field, const std::string& msg)
      : std::runtime_error(field + ": " + msg), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  Model model;
  Grid grid;
  SolverConfig solver;
  InitialDataSpec initial;
  std::string out_dir = ".";
  std::string name = "run";
  bool snapshots = false;
  std::uint64_t seed = 0;
};

/// Parses and validates every section; unknown keys are rejected.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);

nlohmann::json load_json(const std::string& path, const std::string& what);

/// Throws ValidationError on solver.t_end when the forward cone of the
/// data support reaches L/2 - 2h before t_end.
void cone_safety_precheck(const RunConfig& cfg, const SpinorField& f0);

struct SimulationOutput {
  Propagation run;
  std::string record_path;
  std::vector<std::string> snapshot_paths;
};
SimulationOutput simulate(const RunConfig& cfg, bool write_files);

/// Runs the named checks; sets all_passed. Throws DiagnosticsError for a
/// check whose series is missing and ValidationError for unknown names.
nlohmann::json run_suite(const RunRecord& rec, const nlohmann::json& suite, bool& all_passed);

struct KernelRequest {
  double ell = 0.5;
  double a0 = 1.0;
  cplx m{0.0, 0.0};
  double epsilon = 1.0;
  std::string kind = "K1";  // K1 or E
  std::vector<double> times{2.0};
  double t0 = 1.0;          // lower time for E
  int r_points = 11;
  std::string reconstruct_snapshot;
  std::string out;
};

struct SweepRow {
  BlowupCase c;
  std::string regime;
  int branch = 0;
  std::string T_bu;
  std::string t_numerical;
  std::string satisfied;
};

std::vector<SweepRow> run_sweep(const nlohmann::json& sweep);
std::string sweep_csv(const std::vector<SweepRow>& rows);

int cmd_simulate(const std::string& config_path, std::ostream& out, std::ostream& err);
int cmd_verify(const std::string& record_path, const std::string& suite_path,
               const std::string& report_path, std::ostream& out, std::ostream& err);
int cmd_kernel(const KernelRequest& req, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& sweep_path, const std::string& csv_path, std::ostream& out,
              std::ostream& err);
int cmd_lifespan(const BlowupCase& c, std::ostream& out, std::ostream& err);
int cmd_classify(const BlowupCase& c, std::ostream& out, std::ostream& err);

}  // namespace flrw::app
