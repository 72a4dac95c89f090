#include <gtest/gtest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <flrw_dirac/record_io.hpp>
#include <flrw_dirac/snapshot.hpp>
#include <flrw_dirac/spacetime.hpp>

#include "flrw_app/app.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kFixtures{FLRW_FIXTURE_DIR};

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    static std::atomic<int> counter{0};
    dir_ = fs::temp_directory_path() /
           ("flrw_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  CliResult run(const std::string& args) const {
    const fs::path out = dir_ / "stdout.txt";
    const fs::path err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + FLRW_CLI_PATH + "\" " + args + " > \"" +
                            out.string() + "\" 2> \"" + err.string() + "\"";
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
  }

  fs::path write_json(const std::string& name, const json& j) const {
    const fs::path p = dir_ / name;
    std::ofstream(p) << j.dump(1);
    return p;
  }

  json canary_config(const std::string& name = "canary") const {
    json cfg = json::parse(slurp(kFixtures / "canary.json"));
    cfg["outputs"]["dir"] = dir_.string();
    cfg["outputs"]["name"] = name;
    return cfg;
  }

  fs::path simulate_canary(const std::string& name = "canary") {
    const fs::path cfg = write_json(name + ".json", canary_config(name));
    const CliResult r = run("simulate \"" + cfg.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.err;
    return dir_ / (name + ".record.json");
  }

  static std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

  fs::path dir_;
};

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (c == '"') {
        if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
          cell += '"';
          ++i;
        } else {
          quoted = !quoted;
        }
      } else if (c == ',' && !quoted) {
        cells.push_back(cell);
        cell.clear();
      } else {
        cell += c;
      }
    }
    cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

void expect_json_close(const json& got, const json& want, const std::string& path) {
  ASSERT_EQ(got.type(), want.type()) << path;
  if (want.is_object()) {
    ASSERT_EQ(got.size(), want.size()) << path;
    for (auto it = want.begin(); it != want.end(); ++it) {
      ASSERT_TRUE(got.contains(it.key())) << path << "." << it.key();
      expect_json_close(got.at(it.key()), *it, path + "." + it.key());
    }
  } else if (want.is_array()) {
    ASSERT_EQ(got.size(), want.size()) << path;
    for (std::size_t i = 0; i < want.size(); ++i)
      expect_json_close(got[i], want[i], path + "[" + std::to_string(i) + "]");
  } else if (want.is_number_float()) {
    const double a = got.get<double>(), b = want.get<double>();
    EXPECT_LE(std::abs(a - b), 1e-10 * std::max(1.0, std::abs(b))) << path;
  } else {
    EXPECT_EQ(got, want) << path;
  }
}

}  // namespace

TEST_F(CliTest, MinimalFreeRunHasL2Series) {
  const fs::path rec = simulate_canary();
  ASSERT_TRUE(fs::exists(rec));
  const flrw::RunRecord r = flrw::read_record(rec.string());
  ASSERT_GT(r.times.size(), 10u);
  EXPECT_EQ(r.l2.size(), r.times.size());
  EXPECT_NEAR(r.ell, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.times.back(), 3.0, 1e-12);
}

TEST_F(CliTest, CflAboveOneNamesField) {
  json cfg = canary_config();
  cfg["solver"]["cfl"] = 1.5;
  const CliResult r = run("simulate " + q(write_json("bad.json", cfg)));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("solver.cfl"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(dir_ / "canary.record.json"));
}

TEST_F(CliTest, ValidationNamesOffendingField) {
  struct Case {
    std::string pointer;
    json value;
    std::string field;
  };
  const std::vector<Case> cases = {
      {"/grid/n", 0, "grid.n"},
      {"/grid/dim", 4, "grid.dim"},
      {"/cosmology/ell", "flat", "cosmology.ell"},
      {"/solver/t_end", 0.5, "solver.t_end"},
      {"/initial_data/family", "banana", "initial_data.family"},
      {"/solver/frobnicate", 1, "solver.frobnicate"},
      {"/initial_data/seed", -3, "initial_data.seed"},
  };
  for (const auto& c : cases) {
    json cfg = canary_config();
    cfg[json::json_pointer(c.pointer)] = c.value;
    const CliResult r = run("simulate " + q(write_json("bad.json", cfg)));
    EXPECT_EQ(r.code, 1) << c.pointer;
    EXPECT_NE(r.err.find(c.field), std::string::npos) << c.pointer << ": " << r.err;
  }
}

TEST_F(CliTest, MissingConfigIsRejected) {
  const CliResult r = run("simulate " + q(dir_ / "nope.json"));
  EXPECT_NE(r.code, 0);
}

TEST_F(CliTest, UnknownSubcommandIsValidationError) {
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("").code, 1);
}

TEST_F(CliTest, SameSeedGivesIdenticalSeries) {
  const json a = json::parse(slurp(simulate_canary("a")));
  const json b = json::parse(slurp(simulate_canary("b")));
  EXPECT_EQ(a.at("series").dump(), b.at("series").dump());
}

TEST_F(CliTest, DifferentSeedChangesSeries) {
  json cfg = canary_config("other");
  cfg["initial_data"]["seed"] = 8;
  ASSERT_EQ(run("simulate " + q(write_json("other.json", cfg))).code, 0);
  const json a = json::parse(slurp(simulate_canary("a")));
  const json b = json::parse(slurp(dir_ / "other.record.json"));
  EXPECT_NE(a.at("series").at("energy").dump(), b.at("series").at("energy").dump());
}

TEST_F(CliTest, CanaryPassesEnergyIdentity) {
  const fs::path rec = simulate_canary();
  const fs::path report = dir_ / "report.json";
  const CliResult r =
      run("verify " + q(rec) + " " + q(kFixtures / "energy_suite.json") + " -o " + q(report));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const json rep = json::parse(slurp(report));
  EXPECT_EQ(rep.at("status"), "pass");
  ASSERT_EQ(rep.at("checks").size(), 1u);
  EXPECT_EQ(rep.at("checks")[0].at("check"), "energy_identity");
  EXPECT_EQ(rep.at("checks")[0].at("status"), "pass");
}

TEST_F(CliTest, CanaryPassesFullSuite) {
  const fs::path rec = simulate_canary();
  const CliResult r = run("verify " + q(rec) + " " + q(kFixtures / "full_suite.json"));
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep.at("checks").size(), 5u);
}

TEST_F(CliTest, TamperedL2FailsNamedCheck) {
  json rec = json::parse(slurp(simulate_canary()));
  for (auto& v : rec["series"]["l2"]) v = v.get<double>() * 1.01;
  const fs::path tampered = write_json("tampered.record.json", rec);
  const CliResult r = run("verify " + q(tampered) + " " + q(kFixtures / "energy_suite.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("energy_identity fail"), std::string::npos) << r.err;
  const json rep = json::parse(r.out);
  EXPECT_EQ(rep.at("status"), "fail");
  EXPECT_EQ(rep.at("checks")[0].at("check"), "energy_identity");
  EXPECT_EQ(rep.at("checks")[0].at("status"), "fail");
}

TEST_F(CliTest, EmptySuitePassesWithEmptyReport) {
  const fs::path rec = simulate_canary();
  const fs::path suite = write_json("empty.json", json{{"checks", json::array()}});
  const fs::path report = dir_ / "report.json";
  const CliResult r = run("verify " + q(rec) + " " + q(suite) + " -o " + q(report));
  EXPECT_EQ(r.code, 0) << r.err;
  const json rep = json::parse(slurp(report));
  EXPECT_EQ(rep.at("status"), "pass");
  EXPECT_TRUE(rep.at("checks").empty());
}

TEST_F(CliTest, MissingSeriesIsRuntimeError) {
  json rec = json::parse(slurp(simulate_canary()));
  rec["series"].erase("energy");
  const fs::path stripped = write_json("stripped.record.json", rec);
  const CliResult r = run("verify " + q(stripped) + " " + q(kFixtures / "energy_suite.json"));
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("energy"), std::string::npos) << r.err;
}

TEST_F(CliTest, UnknownCheckNameIsValidationError) {
  const fs::path rec = simulate_canary();
  const fs::path suite = write_json("s.json", json{{"checks", {{{"name", "vibes"}}}}});
  EXPECT_EQ(run("verify " + q(rec) + " " + q(suite)).code, 1);
}

TEST_F(CliTest, MissingRecordFails) {
  const CliResult r = run("verify " + q(dir_ / "none.json") + " " + q(kFixtures / "energy_suite.json"));
  EXPECT_EQ(r.code, 2);
}

TEST_F(CliTest, MasslessKernelIsInversePhi) {
  const double eps = 1.5;
  const CliResult r = run("kernel --ell 0.5 --m-re 0 --m-im 0 --eps 1.5 --t 2 3 4 --r-points 7");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 1u + 3u * 7u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"r", "t", "t0_or_eps", "Re", "Im"}));
  const double want = 1.0 / flrw::phi(flrw::Cosmology{0.5, 1.0}, eps);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NEAR(std::stod(rows[i][3]), want, 1e-13);
    EXPECT_NEAR(std::stod(rows[i][4]), 0.0, 1e-13);
  }
}

TEST_F(CliTest, KernelRejectsEllOne) {
  const CliResult r = run("kernel --ell 1 --m-re 0.3 --t 2");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("ell"), std::string::npos) << r.err;
}

TEST_F(CliTest, KernelRejectsBadScaleFactor) {
  EXPECT_EQ(run("kernel --ell 0.5 --a0 2 --t 2").code, 1);
  EXPECT_EQ(run("kernel --ell 0.5 --eps 2 --t 1").code, 1);
}

TEST_F(CliTest, ReconstructionAtEpsilonReturnsInput) {
  json cfg = canary_config("snap");
  cfg["cosmology"]["ell"] = 0.5;
  cfg["mass"] = {{"re", 0.3}, {"im", 0.0}};
  cfg["grid"] = {{"dim", 3}, {"n", 16}, {"box_length", 16.0}};
  cfg["solver"]["t_end"] = 1.05;
  cfg["solver"]["record_every"] = 0.05;
  cfg["outputs"]["snapshots"] = true;
  ASSERT_EQ(run("simulate " + q(write_json("snap.json", cfg))).code, 0);
  const fs::path snap = dir_ / "snap.snap.0000.bin";
  ASSERT_TRUE(fs::exists(snap));
  const flrw::SpinorField in = flrw::read_snapshot(snap.string());
  ASSERT_NEAR(in.time, 1.0, 1e-15);

  const fs::path out = dir_ / "rec.bin";
  const CliResult r = run("kernel --ell 0.5 --m-re 0.3 --t 1 --reconstruct " + q(snap) + " -o " + q(out));
  ASSERT_EQ(r.code, 0) << r.err;
  const flrw::SpinorField res = flrw::read_snapshot(out.string());
  ASSERT_EQ(res.data.size(), in.data.size());
  double diff = 0.0, norm = 0.0;
  for (std::size_t i = 0; i < in.data.size(); ++i) {
    diff += std::norm(res.data[i] - in.data[i]);
    norm += std::norm(in.data[i]);
  }
  EXPECT_LE(std::sqrt(diff / norm), 1e-12);
}

TEST_F(CliTest, SweepTwoByTwoHasFourRows) {
  const fs::path sw = write_json("sw.json", json{{"ell", {2.0, 0.5}}, {"alpha", {2.0, 2.0 / 3.0}}});
  const fs::path csv = dir_ / "sw.csv";
  ASSERT_EQ(run("sweep " + q(sw) + " -o " + q(csv)).code, 0);
  const auto rows = parse_csv(slurp(csv));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0].size(), 11u);
  EXPECT_EQ(rows[0][0], "ell");
  EXPECT_EQ(rows[0][10], "satisfied");
  std::vector<std::pair<double, double>> keys;
  for (std::size_t i = 1; i < rows.size(); ++i)
    keys.emplace_back(std::stod(rows[i][0]), std::stod(rows[i][1]));
  EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

TEST_F(CliTest, SweepReportsNoGlobalAnySize) {
  const double third2 = 2.0 / 3.0;
  const fs::path sw = write_json("sw.json", json{{"ell", {third2}}, {"alpha", {third2}}});
  const CliResult r = run("sweep " + q(sw));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[1][6], "no_global_any_size");
}

TEST_F(CliTest, EmptySweepIsHeaderOnly) {
  const fs::path sw = write_json("sw.json", json{{"ell", json::array()}, {"alpha", {2.0}}});
  const CliResult r = run("sweep " + q(sw));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "ell,alpha,im_m,c0,R,E1,regime,branch,T_bu,t_numerical,satisfied\n");
}

TEST_F(CliTest, SweepRecordsCaseErrorsInRow) {
  const fs::path sw = write_json("sw.json", json{{"ell", {0.5}}, {"alpha", {-1.0, 2.0}}});
  const CliResult r = run("sweep " + q(sw));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][6].rfind("error", 0), 0u) << rows[1][6];
  EXPECT_EQ(rows[2][6].rfind("error", 0), std::string::npos);
}

TEST_F(CliTest, LifespanClosedFormCase) {
  const CliResult r = run("lifespan --ell 0 --alpha 2 --c0 1 --R 1 --E1 4");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_TRUE(j.at("finite").get<bool>());
  EXPECT_NEAR(j.at("T_bu").get<double>(), std::sqrt(2.0), 1e-8);
}

TEST_F(CliTest, ClassifyPrintsRegime) {
  const CliResult r = run("classify --ell 0.6666666666666666 --alpha 0.6666666666666666");
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = json::parse(r.out);
  EXPECT_EQ(j.at("regime"), "no_global_any_size");
  EXPECT_EQ(run("classify --ell 0.5").code, 1);
}

// Golden files were produced by this CLI on the reference platform.
TEST_F(CliTest, GoldenCanaryRecord) {
  const json got = json::parse(slurp(simulate_canary()));
  const json want = json::parse(slurp(kFixtures / "canary.record.json"));
  expect_json_close(got.at("series"), want.at("series"), "series");
  json gm = got.at("metadata"), wm = want.at("metadata");
  gm.erase("tags");
  wm.erase("tags");
  expect_json_close(gm, wm, "metadata");
  EXPECT_EQ(got.at("format"), want.at("format"));
  EXPECT_EQ(got.at("version"), want.at("version"));
}

TEST_F(CliTest, GoldenCanaryReport) {
  const fs::path rec = simulate_canary();
  const CliResult r = run("verify " + q(rec) + " " + q(kFixtures / "full_suite.json"));
  ASSERT_EQ(r.code, 0);
  json got = json::parse(r.out);
  json want = json::parse(slurp(kFixtures / "canary.report.json"));
  got.erase("record");
  want.erase("record");
  expect_json_close(got, want, "report");
}

TEST_F(CliTest, GoldenSweepTable) {
  const CliResult r = run("sweep " + q(kFixtures / "sweep.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(kFixtures / "sweep.csv"));
}

TEST_F(CliTest, GoldenKernelTable) {
  const CliResult r = run("kernel --ell 0.5 --m-re 0.3 --m-im 0.1 --eps 1 --t 2 4 --r-points 5");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto got = parse_csv(r.out);
  const auto want = parse_csv(slurp(kFixtures / "kernel.csv"));
  ASSERT_EQ(got.size(), want.size());
  EXPECT_EQ(got[0], want[0]);
  for (std::size_t i = 1; i < want.size(); ++i) {
    ASSERT_EQ(got[i].size(), want[i].size());
    for (std::size_t k = 0; k < want[i].size(); ++k) {
      const double w = std::stod(want[i][k]);
      EXPECT_NEAR(std::stod(got[i][k]), w, 1e-12 * std::max(1.0, std::abs(w))) << i << "," << k;
    }
  }
}
