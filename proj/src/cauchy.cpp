#include "pform/cauchy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pform {

namespace {

double floor_scale(double s) { return std::max(s, 1e-12); }

}  // namespace

LorenzDataCheck is_lorenz_data(const Slice& s, const CauchyData& data,
                               const Cochain* rho_n_source) {
  LorenzDataCheck r;
  Cochain dAd = s.delta(data.Ad);
  if (rho_n_source) dAd -= *rho_n_source;
  r.delta_Ad = s.norm(dAd);
  if (data.degree() >= 1) r.delta_An = s.norm(s.delta(data.An));
  r.Adelta = s.norm(data.Adelta);
  const double scale = floor_scale(
      std::max({s.norm(data.A0), s.norm(data.Ad), s.norm(data.An), s.norm(data.Adelta)}));
  const double tol = 1e-8 * scale;
  r.ok = r.delta_Ad <= tol && r.delta_An <= tol && r.Adelta <= tol;
  return r;
}

double lorenz_residual(const SpacetimeForm& A) {
  if (A.degree == 0) return 0.0;
  return max_slice_norm(spacetime_delta(A));
}

double lorenz_equivalence_check(const CauchyData& data, const SpacetimePtr& st) {
  return lorenz_residual(leapfrog_evolve(data, st, 0));
}

double maxwell_residual(const SpacetimeForm& A, const Current* J) {
  SpacetimeForm r = -1.0 * spacetime_delta(spacetime_d(A));
  double scale = max_slice_norm(A);
  if (J) {
    r -= J->form;
    scale = std::max(scale, max_slice_norm(J->form));
  }
  return max_slice_norm(r) / floor_scale(scale);
}

SpacetimeForm solve_maxwell_homogeneous(const Cochain& A0, const Cochain& Ad,
                                        const SpacetimePtr& st, const Cochain* An) {
  const Slice& s = *st->slice();
  const int p = A0.degree;
  require(Ad.degree == p, ErrorCode::degree_mismatch, "A0 and Ad must share a degree");
  require(s.norm(s.delta(Ad)) <= 1e-8 * floor_scale(s.norm(Ad)), ErrorCode::precondition,
          "momentum datum is not co-closed");
  CauchyData data = CauchyData::zero(st->complex(), p);
  data.A0 = A0;
  data.Ad = Ad;
  if (An) {
    require(An->degree == p - 1, ErrorCode::degree_mismatch, "An must have degree p-1");
    require(s.norm(s.delta(*An)) <= 1e-8 * floor_scale(s.norm(*An)), ErrorCode::precondition,
            "normal datum is not co-closed");
    data.An = *An;
  }
  return leapfrog_evolve(data, st, 0);
}

SpacetimeForm solve_maxwell_inhomogeneous(const Cochain& A0, const Current& J,
                                          const SpacetimePtr& st, int m) {
  const Slice& s = *st->slice();
  const int p = A0.degree;
  require(J.degree() == p, ErrorCode::degree_mismatch, "source degree differs from A0");
  require(J.co_closed, ErrorCode::precondition, "source current is not co-closed");
  CauchyData data = CauchyData::zero(st->complex(), p);
  data.A0 = A0;
  if (p >= 1) data.Ad = s.solve_coderivative(trace(J.form, m, TraceKind::n));
  return leapfrog_evolve(data, st, m, &J);
}

SpacetimeForm gauge_transform(const SpacetimeForm& A, const SpacetimeForm& Lambda) {
  require(Lambda.degree == A.degree - 1, ErrorCode::degree_mismatch,
          "gauge parameter must have degree p-1");
  return A + spacetime_d(Lambda);
}

GaugeEquivalence is_gauge_equivalent(const SpacetimeForm& A, const SpacetimeForm& B, int k,
                                     const Current* J) {
  require(maxwell_residual(A, J) <= 1e-6 && maxwell_residual(B, J) <= 1e-6,
          ErrorCode::precondition, "gauge comparison needs two Maxwell solutions");
  const Slice& s = *A.st->slice();
  const Cochain a0 = trace(A, k, TraceKind::zero), b0 = trace(B, k, TraceKind::zero);
  const Cochain ad = trace(A, k, TraceKind::d), bd = trace(B, k, TraceKind::d);
  const double scale =
      floor_scale(std::max({s.norm(a0), s.norm(b0), s.norm(ad), s.norm(bd)}));
  const HodgeParts parts = s.hodge_decompose(a0 - b0);
  GaugeEquivalence r;
  r.momentum_diff = s.norm(ad - bd) / scale;
  r.class_diff = s.norm(parts.coexact + parts.harmonic) / scale;
  r.equivalent = r.momentum_diff <= 1e-6 && r.class_diff <= 1e-6;
  return r;
}

std::pair<CauchyData, SpacetimeForm> make_coulomb(const CauchyData& data,
                                                  const SpacetimePtr& st) {
  const Slice& s = *st->slice();
  require(is_lorenz_data(s, data).ok, ErrorCode::precondition,
          "Coulomb reduction needs Lorenz data");
  const int p = data.degree();
  CauchyData coulomb = data;
  coulomb.An = Cochain(st->complex(), p - 1);
  coulomb.Adelta = Cochain(st->complex(), p - 1);
  if (p == 0) return {coulomb, SpacetimeForm::zero(st, -1)};
  CauchyData lam = CauchyData::zero(st->complex(), p - 1);
  lam.Ad = -data.An;
  return {coulomb, leapfrog_evolve(lam, st, 0)};
}

FundamentalCheck fundamental_solution_check(const Current& J, Direction dir) {
  const SpacetimeForm A = GreensOperator(dir).apply(J);
  FundamentalCheck r;
  const SpacetimeForm res = -1.0 * spacetime_delta(spacetime_d(A)) - J.form;
  r.residual = max_slice_norm(res) / floor_scale(max_slice_norm(J.form));
  r.applicable = J.co_closed;
  return r;
}

FieldCauchyResult solve_F_cauchy(const Cochain& F0, const Cochain& Fn, const SpacetimePtr& st) {
  const Slice& s = *st->slice();
  const int p = F0.degree;
  require(p >= 1 && p <= s.dim(), ErrorCode::degree_mismatch, "F0 must have degree 1..d");
  require(Fn.degree == p - 1, ErrorCode::degree_mismatch, "Fn must have degree p-1");
  const double scale = floor_scale(std::max(s.norm(F0), s.norm(Fn)));
  require(s.norm(s.d(F0)) <= 1e-8 * scale, ErrorCode::precondition, "F0 is not closed");
  require(s.norm(s.delta(Fn)) <= 1e-8 * scale, ErrorCode::precondition, "Fn is not co-closed");

  CauchyData data = CauchyData::zero(st->complex(), p - 1);
  data.A0 = s.solve_exterior(F0);
  data.Ad = Fn;
  FieldCauchyResult r;
  r.A = leapfrog_evolve(data, st, 0);
  r.F = spacetime_d(r.A);
  r.dF = max_slice_norm(spacetime_d(r.F)) / scale;
  r.deltaF = max_slice_norm(spacetime_delta(r.F)) / scale;
  r.rho0_match = s.norm(trace(r.F, 0, TraceKind::zero) - F0) / scale;
  r.rhon_match = s.norm(trace(r.F, 0, TraceKind::n) - Fn) / scale;
  for (int k = 0; k <= st->steps(); ++k) {
    r.rhod_vanish = std::max(r.rhod_vanish, s.norm(trace(r.F, k, TraceKind::d)) / scale);
    r.rhodelta_vanish =
        std::max(r.rhodelta_vanish, s.norm(trace(r.F, k, TraceKind::delta)) / scale);
  }
  return r;
}

void export_cauchy(const CauchyData& data, int slice, const std::string& base) {
  const CubicalComplex& c = *data.A0.complex;
  std::ofstream csv(base + ".csv");
  require(csv.good(), ErrorCode::io, "cannot write " + base + ".csv");
  csv << "component,degree,cell,value\n";
  csv.precision(17);
  const std::pair<const char*, const Cochain*> parts[] = {
      {"A0", &data.A0}, {"Ad", &data.Ad}, {"An", &data.An}, {"Adelta", &data.Adelta}};
  for (const auto& [name, x] : parts)
    for (Eigen::Index i = 0; i < x->values.size(); ++i)
      csv << name << ',' << x->degree << ',' << i << ',' << x->values[i] << '\n';
  require(csv.good(), ErrorCode::io, "failed writing " + base + ".csv");

  nlohmann::ordered_json j;
  j["schema"] = "pform-cauchy/1";
  j["d"] = c.dim();
  j["N"] = c.resolution();
  j["L"] = c.lengths();
  j["p"] = data.degree();
  j["slice"] = slice;
  std::ofstream js(base + ".json");
  require(js.good(), ErrorCode::io, "cannot write " + base + ".json");
  js << j.dump(2) << '\n';
}

CauchyFile import_cauchy(const std::string& base) {
  std::ifstream js(base + ".json");
  require(js.good(), ErrorCode::io, "cannot read " + base + ".json");
  nlohmann::json j;
  try {
    js >> j;
  } catch (const std::exception& e) {
    fail(ErrorCode::io, base + ".json: " + e.what());
  }
  CauchyFile out;
  int p = 0;
  try {
    require(j.at("schema").get<std::string>() == "pform-cauchy/1", ErrorCode::io,
            "unknown Cauchy sidecar schema");
    out.complex = CubicalComplex::build(j.at("d").get<int>(), j.at("N").get<int>(),
                                        j.at("L").get<std::vector<double>>());
    p = j.at("p").get<int>();
    out.slice = j.at("slice").get<int>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, base + ".json: " + e.what());
  }
  require(p >= 0 && p <= out.complex->dim(), ErrorCode::io, "sidecar degree out of range");
  out.data = CauchyData::zero(out.complex, p);

  std::ifstream csv(base + ".csv");
  require(csv.good(), ErrorCode::io, "cannot read " + base + ".csv");
  std::string line;
  std::getline(csv, line);
  require(line == "component,degree,cell,value", ErrorCode::io, "unexpected CSV header");
  int lineno = 1;
  std::size_t seen = 0;
  while (std::getline(csv, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string name, deg, cell, val;
    std::getline(ss, name, ',');
    std::getline(ss, deg, ',');
    std::getline(ss, cell, ',');
    std::getline(ss, val, ',');
    Cochain* target = name == "A0"       ? &out.data.A0
                      : name == "Ad"     ? &out.data.Ad
                      : name == "An"     ? &out.data.An
                      : name == "Adelta" ? &out.data.Adelta
                                         : nullptr;
    const std::string where = base + ".csv:" + std::to_string(lineno);
    require(target != nullptr, ErrorCode::io, where + ": unknown component '" + name + "'");
    try {
      require(std::stoi(deg) == target->degree, ErrorCode::io, where + ": degree mismatch");
      const long idx = std::stol(cell);
      require(idx >= 0 && idx < target->values.size(), ErrorCode::io,
              where + ": cell index out of range");
      target->values[idx] = std::stod(val);
    } catch (const std::logic_error&) {
      fail(ErrorCode::io, where + ": malformed number");
    }
    ++seen;
  }
  const std::size_t expected = out.data.A0.size() + out.data.Ad.size() + out.data.An.size() +
                               out.data.Adelta.size();
  require(seen == expected, ErrorCode::io,
          base + ".csv: expected " + std::to_string(expected) + " rows, found " +
              std::to_string(seen));
  return out;
}

}  // namespace pform
