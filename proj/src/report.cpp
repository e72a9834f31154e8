#include <cmath>
#include <map>
#include <sstream>

#include <json.hpp>

#include "pform/forms.hpp"
#include "pform/suites.hpp"

namespace pform {

namespace {

nlohmann::ordered_json number(double x) {
  if (std::isfinite(x)) return x;
  return nullptr;
}

}  // namespace

std::string report_json(const Report& r, bool timings) {
  using nlohmann::ordered_json;
  const ExperimentConfig& c = r.config;
  ordered_json j;
  j["schema"] = report_schema;
  ordered_json cfg;
  cfg["d"] = c.d;
  cfg["N"] = c.N;
  cfg["L"] = c.L;
  cfg["degrees"] = c.active_degrees();
  cfg["dt"] = r.dt;
  cfg["cfl_number"] = r.cfl_number;
  cfg["steps"] = c.steps;
  cfg["quantum"] = {{"degree", c.active_quantum_degree()},
                    {"modes", c.quantum_modes},
                    {"n_max", c.n_max}};
  cfg["suite"] = c.suite;
  cfg["seed"] = c.seed;
  ordered_json tol = ordered_json::object();
  for (const auto& [k, v] : c.tolerances) tol[k] = v;
  cfg["tolerance_overrides"] = tol;
  j["config"] = cfg;

  ordered_json checks = ordered_json::array();
  std::map<std::string, std::pair<int, int>> per_suite;
  int passed = 0;
  for (const auto& rec : r.checks) {
    ordered_json e;
    e["name"] = rec.info.name;
    e["suite"] = rec.info.suite;
    e["anchor"] = rec.info.anchor;
    e["inputs_digest"] = rec.digest;
    e["residual"] = number(rec.residual);
    e["tolerance"] = rec.tolerance;
    e["pass"] = rec.pass;
    e["known_unattainable"] = rec.info.known_unattainable;
    e["detail"] = rec.detail;
    if (timings) e["wall_ms"] = rec.wall_ms;
    checks.push_back(e);
    auto& s = per_suite[rec.info.suite];
    ++s.first;
    if (rec.pass) {
      ++s.second;
      ++passed;
    }
  }
  j["checks"] = checks;

  if (!r.quantum_modes.empty()) {
    ordered_json q;
    q["degree"] = r.quantum_degree;
    q["harmonic_modes_excluded"] = r.harmonic_excluded;
    ordered_json rows = ordered_json::array();
    for (const auto& m : r.quantum_modes)
      rows.push_back({{"m", m.index}, {"lambda", m.lambda}, {"omega", m.omega}});
    q["quantized"] = rows;
    j["quantum_modes"] = q;
  }

  ordered_json summary;
  summary["total"] = r.checks.size();
  summary["passed"] = passed;
  summary["failed"] = static_cast<int>(r.checks.size()) - passed;
  ordered_json suites = ordered_json::object();
  for (const auto& [name, counts] : per_suite)
    suites[name] = {{"total", counts.first}, {"passed", counts.second}};
  summary["suites"] = suites;
  summary["all_pass"] = r.all_pass();
  j["summary"] = summary;
  return j.dump(2) + "\n";
}

std::string report_csv(const Report& r, bool timings) {
  std::ostringstream os;
  os.precision(17);
  os << "name,suite,inputs_digest,residual,tolerance,pass" << (timings ? ",wall_ms" : "") << "\n";
  for (const auto& rec : r.checks) {
    os << rec.info.name << ',' << rec.info.suite << ',' << rec.digest << ',';
    if (std::isfinite(rec.residual))
      os << rec.residual;
    else
      os << "inf";
    os << ',' << rec.tolerance << ',' << (rec.pass ? "true" : "false");
    if (timings) os << ',' << rec.wall_ms;
    os << "\n";
  }
  return os.str();
}

std::string mode_table_csv(const ExperimentConfig& cfg, int p) {
  cfg.validate();
  require(p >= 0 && p <= cfg.d, ErrorCode::invalid_argument, "degree out of range");
  const SlicePtr s = Slice::make(CubicalComplex::build(cfg.d, cfg.N, cfg.L));
  const ModeBasis& b = s->spectrum(p);
  std::ostringstream os;
  os.precision(17);
  os << "m,lambda,omega,harmonic\n";
  for (std::size_t m = 0; m < b.size(); ++m) {
    const auto i = static_cast<Eigen::Index>(m);
    os << m << ',' << b.eigenvalues[i] << ',' << b.omega[i] << ',' << (b.harmonic[m] ? 1 : 0)
       << "\n";
  }
  return os.str();
}

}  // namespace pform
