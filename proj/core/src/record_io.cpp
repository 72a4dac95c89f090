#include "flrw_dirac/record_io.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace flrw {

namespace {

nlohmann::json cjson(cplx z) { return nlohmann::json::array({z.real(), z.imag()}); }

cplx from_cjson(const nlohmann::json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

nlohmann::json record_to_json(const RunRecord& rec) {
  nlohmann::json meta;
  meta["ell"] = rec.ell;
  meta["a0"] = rec.a0;
  meta["mass"] = cjson(rec.mass);
  meta["grid"] = {{"dim", rec.grid.dim}, {"n", rec.grid.n}, {"box_length", rec.grid.box_length}};
  meta["sobolev_k"] = rec.sobolev_k;
  meta["defect_z"] = cjson(rec.defect_z);
  meta["nonlinearity"] = rec.nonlinearity;
  meta["a_form"] = rec.a_form;
  meta["potential_zero"] = rec.potential_zero;
  meta["potential_gamma2"] = rec.potential_gamma2;
  meta["sourced"] = rec.sourced;
  meta["support_radius"] = rec.support_radius;
  meta["status"] = to_string(rec.status);
  meta["blowup_time"] = std::isnan(rec.blowup_time) ? nlohmann::json(nullptr)
                                                    : nlohmann::json(rec.blowup_time);
  meta["tags"] = rec.tags;

  nlohmann::json series;
  series["times"] = rec.times;
  series["energy"] = rec.energy;
  series["l2"] = rec.l2;
  series["sobolev"] = rec.sobolev;
  series["xi_int"] = rec.xi_int;
  series["eta_int"] = rec.eta_int;
  series["rho2_int"] = rec.rho2_int;
  series["rho_int"] = rec.rho_int;
  series["imv_int"] = rec.imv_int;
  series["source_norm"] = rec.source_norm;
  series["cone_leak"] = rec.cone_leak;
  series["defect"] = rec.defect;
  nlohmann::json g2 = nlohmann::json::array();
  for (const auto& z : rec.gamma2) g2.push_back(cjson(z));
  series["gamma2"] = g2;

  return {{"format", "flrw-dirac-record"}, {"version", 1}, {"metadata", meta},
          {"series", series}, {"snapshots", rec.snapshots}};
}

namespace {

RunRecord parse_record(const nlohmann::json& j) {
  if (!j.is_object() || j.value("format", "") != "flrw-dirac-record")
    throw std::runtime_error("not a run record");
  RunRecord rec;
  const auto& meta = j.at("metadata");
  rec.ell = meta.at("ell").get<double>();
  rec.a0 = meta.at("a0").get<double>();
  rec.mass = from_cjson(meta.at("mass"));
  rec.grid.dim = meta.at("grid").at("dim").get<int>();
  rec.grid.n = meta.at("grid").at("n").get<int>();
  rec.grid.box_length = meta.at("grid").at("box_length").get<double>();
  rec.sobolev_k = meta.at("sobolev_k").get<int>();
  rec.defect_z = from_cjson(meta.at("defect_z"));
  rec.nonlinearity = meta.at("nonlinearity").get<std::string>();
  rec.a_form = meta.at("a_form").get<bool>();
  rec.potential_zero = meta.at("potential_zero").get<bool>();
  rec.potential_gamma2 = meta.at("potential_gamma2").get<bool>();
  rec.sourced = meta.value("sourced", false);
  rec.support_radius = meta.value("support_radius", 0.0);
  rec.status = run_status_from_string(meta.at("status").get<std::string>());
  if (!meta.at("blowup_time").is_null()) rec.blowup_time = meta.at("blowup_time").get<double>();
  if (meta.contains("tags")) rec.tags = meta.at("tags").get<std::map<std::string, std::string>>();

  const auto& s = j.at("series");
  auto vec = [&](const char* key, std::vector<double>& out) {
    if (s.contains(key)) out = s.at(key).get<std::vector<double>>();
  };
  vec("times", rec.times);
  vec("energy", rec.energy);
  vec("l2", rec.l2);
  vec("sobolev", rec.sobolev);
  vec("xi_int", rec.xi_int);
  vec("eta_int", rec.eta_int);
  vec("rho2_int", rec.rho2_int);
  vec("rho_int", rec.rho_int);
  vec("imv_int", rec.imv_int);
  vec("source_norm", rec.source_norm);
  vec("cone_leak", rec.cone_leak);
  vec("defect", rec.defect);
  if (s.contains("gamma2"))
    for (const auto& z : s.at("gamma2")) rec.gamma2.push_back(from_cjson(z));
  if (j.contains("snapshots")) rec.snapshots = j.at("snapshots").get<std::vector<std::string>>();

  const std::size_t n = rec.times.size();
  for (std::size_t i = 1; i < n; ++i)
    if (!(rec.times[i] > rec.times[i - 1])) throw std::runtime_error("record times must increase");
  for (const auto* v : {&rec.energy, &rec.l2, &rec.sobolev, &rec.xi_int, &rec.eta_int, &rec.rho2_int,
                        &rec.rho_int, &rec.imv_int, &rec.source_norm, &rec.cone_leak, &rec.defect})
    if (!v->empty() && v->size() != n) throw std::runtime_error("record series length mismatch");
  if (!rec.gamma2.empty() && rec.gamma2.size() != n)
    throw std::runtime_error("record series length mismatch");
  return rec;
}

}  // namespace

RunRecord record_from_json(const nlohmann::json& j) {
  try {
    return parse_record(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed run record: ") + e.what());
  }
}

void write_record(const std::string& path, const RunRecord& rec) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open record for writing: " + path);
  os << record_to_json(rec).dump(1) << '\n';
}

RunRecord read_record(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open record: " + path);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("cannot parse record " + path + ": " + e.what());
  }
  return record_from_json(j);
}

}  // namespace flrw
