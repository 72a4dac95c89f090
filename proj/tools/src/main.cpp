#include <iostream>

#include <CLI11.hpp>

#include "flrw_app/app.hpp"

namespace {

void add_case_options(CLI::App* sub, flrw::BlowupCase& c) {
  sub->add_option("--ell", c.ell, "Scale factor exponent")->required();
  sub->add_option("--alpha", c.alpha_exp, "Nonlinearity exponent")->required();
  sub->add_option("--im-m", c.im_m_abs, "|Im m|");
  sub->add_option("--c0", c.c0, "Nonlinearity constant");
  sub->add_option("--R", c.R, "Initial support radius");
  sub->add_option("--E1", c.E1, "Initial energy");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace flrw::app;
  CLI::App app{"Dirac fields on power-law FLRW backgrounds"};
  app.require_subcommand(1);

  std::string config;
  auto* sim = app.add_subcommand("simulate", "Run a configured simulation and write its record");
  sim->add_option("config", config, "Run configuration (JSON)")->required();

  std::string record, suite, report;
  auto* ver = app.add_subcommand("verify", "Run a verification suite against a record");
  ver->add_option("record", record, "Record JSON")->required();
  ver->add_option("suite", suite, "Suite JSON")->required();
  ver->add_option("-o,--report", report, "Report path (stdout when absent)");

  KernelRequest kreq;
  double m_re = 0.0, m_im = 0.0;
  auto* ker = app.add_subcommand("kernel", "Tabulate kernels or reconstruct a free field");
  ker->add_option("--ell", kreq.ell, "Scale factor exponent, 0 < ell < 1");
  ker->add_option("--a0", kreq.a0, "Scale factor prefactor (must be 1)");
  ker->add_option("--m-re", m_re, "Re m");
  ker->add_option("--m-im", m_im, "Im m");
  ker->add_option("--eps", kreq.epsilon, "Initial time epsilon for K1");
  ker->add_option("--kind", kreq.kind, "K1 or E")->check(CLI::IsMember({"K1", "E"}));
  ker->add_option("--t", kreq.times, "Evaluation times")->expected(1, -1);
  ker->add_option("--t0", kreq.t0, "Lower time for E");
  ker->add_option("--r-points", kreq.r_points, "Radial samples per time");
  ker->add_option("--reconstruct", kreq.reconstruct_snapshot,
                  "Snapshot of data at t = epsilon to propagate freely");
  ker->add_option("-o,--out", kreq.out, "CSV or snapshot output path");

  std::string sweep_cfg, csv;
  auto* swp = app.add_subcommand("sweep", "Classify and bound a grid of blow-up cases");
  swp->add_option("config", sweep_cfg, "Sweep configuration (JSON)")->required();
  swp->add_option("-o,--out", csv, "CSV path (stdout when absent)");

  flrw::BlowupCase lcase, ccase;
  auto* lif = app.add_subcommand("lifespan", "Solve the lifespan equation for one case");
  add_case_options(lif, lcase);
  auto* cls = app.add_subcommand("classify", "Blow-up regime of one case");
  add_case_options(cls, ccase);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kValidation;
  }

  if (*sim) return cmd_simulate(config, std::cout, std::cerr);
  if (*ver) return cmd_verify(record, suite, report, std::cout, std::cerr);
  if (*ker) {
    kreq.m = {m_re, m_im};
    return cmd_kernel(kreq, std::cout, std::cerr);
  }
  if (*swp) return cmd_sweep(sweep_cfg, csv, std::cout, std::cerr);
  if (*lif) return cmd_lifespan(lcase, std::cout, std::cerr);
  if (*cls) return cmd_classify(ccase, std::cout, std::cerr);
  return kValidation;
}
