#include "pform/pform.h"

#include <cstdlib>
#include <cstring>
#include <random>
#include <string>

#include "pform/cauchy.hpp"
#include "pform/suites.hpp"

struct pform_config {
  pform::ExperimentConfig cfg;
};

struct pform_report {
  pform::Report report;
};

namespace {

thread_local std::string last_error;

template <class F>
int guarded(F&& f) {
  try {
    last_error.clear();
    f();
    return PFORM_OK;
  } catch (const pform::Error& e) {
    last_error = e.what();
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    last_error = e.what();
    return PFORM_ERR_INTERNAL;
  }
}

int null_arg(const char* what) {
  last_error = std::string("null ") + what;
  return PFORM_ERR_INVALID_ARGUMENT;
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* pform_last_error(void) { return last_error.c_str(); }
const char* pform_version(void) { return "1.0.0"; }
void pform_string_free(char* s) { std::free(s); }

int pform_config_default(pform_config** out) {
  if (!out) return null_arg("output");
  return guarded([&] { *out = new pform_config{}; });
}

int pform_config_load(const char* path, pform_config** out) {
  if (!path || !out) return null_arg("argument");
  return guarded([&] { *out = new pform_config{pform::load_config(path)}; });
}

int pform_config_parse(const char* text, pform_config** out) {
  if (!text || !out) return null_arg("argument");
  return guarded([&] { *out = new pform_config{pform::parse_config(text)}; });
}

int pform_config_set_suite(pform_config* c, const char* suite) {
  if (!c || !suite) return null_arg("argument");
  return guarded([&] {
    pform::ExperimentConfig next = c->cfg;
    next.suite = suite;
    next.validate();
    c->cfg = next;
  });
}

int pform_config_set_seed(pform_config* c, unsigned long long seed) {
  if (!c) return null_arg("config");
  c->cfg.seed = seed;
  return PFORM_OK;
}

int pform_config_set_dimension(pform_config* c, int d) {
  if (!c) return null_arg("config");
  return guarded([&] {
    pform::ExperimentConfig next = c->cfg;
    if (d != next.d) {
      next.L.assign(static_cast<std::size_t>(d > 0 ? d : 0), 6.283185307179586);
      next.degrees.clear();
    }
    next.d = d;
    next.validate();
    c->cfg = next;
  });
}

int pform_config_set_resolution(pform_config* c, int N) {
  if (!c) return null_arg("config");
  return guarded([&] {
    pform::ExperimentConfig next = c->cfg;
    next.N = N;
    next.validate();
    c->cfg = next;
  });
}

int pform_config_text(const pform_config* c, char** out) {
  if (!c || !out) return null_arg("argument");
  return guarded([&] { *out = dup(c->cfg.to_text()); });
}

void pform_config_free(pform_config* c) { delete c; }

int pform_run(const pform_config* c, pform_report** out) {
  if (!c || !out) return null_arg("argument");
  return guarded([&] { *out = new pform_report{pform::run_experiment(c->cfg)}; });
}

int pform_report_all_pass(const pform_report* r) { return r && r->report.all_pass() ? 1 : 0; }

size_t pform_report_size(const pform_report* r) { return r ? r->report.checks.size() : 0; }

int pform_report_check(const pform_report* r, size_t i, const char** name, double* residual,
                       double* tolerance, int* pass) {
  if (!r) return null_arg("report");
  if (i >= r->report.checks.size()) {
    last_error = "check index out of range";
    return PFORM_ERR_INVALID_ARGUMENT;
  }
  const auto& rec = r->report.checks[i];
  if (name) *name = rec.info.name.c_str();
  if (residual) *residual = rec.residual;
  if (tolerance) *tolerance = rec.tolerance;
  if (pass) *pass = rec.pass ? 1 : 0;
  return PFORM_OK;
}

int pform_report_json(const pform_report* r, int timings, char** out) {
  if (!r || !out) return null_arg("argument");
  return guarded([&] { *out = dup(pform::report_json(r->report, timings != 0)); });
}

int pform_report_csv(const pform_report* r, int timings, char** out) {
  if (!r || !out) return null_arg("argument");
  return guarded([&] { *out = dup(pform::report_csv(r->report, timings != 0)); });
}

void pform_report_free(pform_report* r) { delete r; }

size_t pform_check_count(void) { return pform::check_catalog().size(); }

int pform_check_info(size_t i, const char** name, const char** suite, const char** anchor,
                     double* tolerance) {
  const auto& cat = pform::check_catalog();
  if (i >= cat.size()) {
    last_error = "check index out of range";
    return PFORM_ERR_INVALID_ARGUMENT;
  }
  if (name) *name = cat[i].name.c_str();
  if (suite) *suite = cat[i].suite.c_str();
  if (anchor) *anchor = cat[i].anchor.c_str();
  if (tolerance) *tolerance = cat[i].tolerance;
  return PFORM_OK;
}

int pform_dump_modes(const pform_config* c, int p, char** out) {
  if (!c || !out) return null_arg("argument");
  return guarded([&] { *out = dup(pform::mode_table_csv(c->cfg, p)); });
}

int pform_export_cauchy(const pform_config* c, int p, int slice, const char* base) {
  if (!c || !base) return null_arg("argument");
  return guarded([&] {
    using namespace pform;
    const ExperimentConfig& cfg = c->cfg;
    cfg.validate();
    require(p >= 0 && p <= cfg.d, ErrorCode::invalid_argument, "degree out of range");
    require(slice >= 0 && slice <= cfg.steps, ErrorCode::invalid_argument, "slice out of range");
    const SlicePtr s = Slice::make(CubicalComplex::build(cfg.d, cfg.N, cfg.L));
    double dt = cfg.dt;
    if (dt <= 0.0) dt = cfg.cfl / std::sqrt(Spacetime::make(s, 1e-9, 2)->lambda_bound());
    const SpacetimePtr st = Spacetime::make(s, dt, cfg.steps);

    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g;
    auto rnd = [&](int q) {
      Cochain x(s->complex(), q);
      for (Eigen::Index i = 0; i < x.values.size(); ++i) x.values[i] = g(rng);
      return x;
    };
    CauchyData data = CauchyData::zero(s->complex(), p);
    data.A0 = rnd(p);
    if (p < cfg.d) data.Ad = s->codifferential(rnd(p + 1));
    if (p >= 1) data.An = s->codifferential(rnd(p));
    export_cauchy(traces(leapfrog_evolve(data, st), slice), slice, base);
  });
}

}  // extern "C"
