#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "pform/pform.h"

namespace {

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Options {
  std::string config;
  std::optional<std::string> suite;
  std::optional<unsigned long long> seed;
  std::optional<int> d;
  std::optional<int> N;
  std::string out_dir = ".";
  std::string format = "json";
  bool timings = false;
  int degree = 1;
  int slice = 0;
  std::string name = "cauchy";
};

struct ConfigDeleter {
  void operator()(pform_config* c) const { pform_config_free(c); }
};
struct ReportDeleter {
  void operator()(pform_report* r) const { pform_report_free(r); }
};
using ConfigPtr = std::unique_ptr<pform_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<pform_report, ReportDeleter>;

struct CliError {
  int exit_code;
};

void check(int rc, int exit_code) {
  if (rc == PFORM_OK) return;
  std::cerr << "pformlab: " << pform_last_error() << "\n";
  throw CliError{exit_code};
}

std::string take(char* s) {
  std::string out(s);
  pform_string_free(s);
  return out;
}

ConfigPtr load(const Options& o) {
  pform_config* raw = nullptr;
  if (o.config.empty())
    check(pform_config_default(&raw), exit_usage);
  else
    check(pform_config_load(o.config.c_str(), &raw), exit_usage);
  ConfigPtr cfg(raw);
  if (o.d) check(pform_config_set_dimension(cfg.get(), *o.d), exit_usage);
  if (o.N) check(pform_config_set_resolution(cfg.get(), *o.N), exit_usage);
  if (o.suite) check(pform_config_set_suite(cfg.get(), o.suite->c_str()), exit_usage);
  if (o.seed) check(pform_config_set_seed(cfg.get(), *o.seed), exit_usage);
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) {
    std::cerr << "pformlab: cannot write " << path.string() << "\n";
    throw CliError{exit_usage};
  }
  f << content;
}

int cmd_run(const Options& o) {
  ConfigPtr cfg = load(o);
  pform_report* raw = nullptr;
  check(pform_run(cfg.get(), &raw), exit_usage);
  ReportPtr rep(raw);

  std::filesystem::create_directories(o.out_dir);
  char* text = nullptr;
  if (o.format == "csv")
    check(pform_report_csv(rep.get(), o.timings, &text), exit_usage);
  else
    check(pform_report_json(rep.get(), o.timings, &text), exit_usage);
  const auto path = std::filesystem::path(o.out_dir) / ("report." + o.format);
  write_file(path, take(text));

  const size_t n = pform_report_size(rep.get());
  size_t passed = 0;
  for (size_t i = 0; i < n; ++i) {
    const char* name = nullptr;
    double res = 0.0, tol = 0.0;
    int pass = 0;
    pform_report_check(rep.get(), i, &name, &res, &tol, &pass);
    std::printf("%s  %-28s residual %.3e  tolerance %.1e\n", pass ? "PASS" : "FAIL", name, res, tol);
    passed += pass ? 1 : 0;
  }
  std::printf("%zu/%zu checks passed; report written to %s\n", passed, n, path.string().c_str());
  return pform_report_all_pass(rep.get()) ? exit_pass : exit_fail;
}

int cmd_list() {
  const size_t n = pform_check_count();
  for (size_t i = 0; i < n; ++i) {
    const char *name = nullptr, *suite = nullptr, *anchor = nullptr;
    double tol = 0.0;
    pform_check_info(i, &name, &suite, &anchor, &tol);
    std::printf("%-11s %-28s %8.1e  %s\n", suite, name, tol, anchor);
  }
  return exit_pass;
}

int cmd_dump_modes(const Options& o) {
  ConfigPtr cfg = load(o);
  char* text = nullptr;
  check(pform_dump_modes(cfg.get(), o.degree, &text), exit_usage);
  std::filesystem::create_directories(o.out_dir);
  const auto path = std::filesystem::path(o.out_dir) / ("modes_p" + std::to_string(o.degree) + ".csv");
  write_file(path, take(text));
  std::printf("mode table written to %s\n", path.string().c_str());
  return exit_pass;
}

int cmd_export(const Options& o) {
  ConfigPtr cfg = load(o);
  std::filesystem::create_directories(o.out_dir);
  const auto base = (std::filesystem::path(o.out_dir) / o.name).string();
  check(pform_export_cauchy(cfg.get(), o.degree, o.slice, base.c_str()), exit_usage);
  std::printf("Cauchy data written to %s.csv and %s.json\n", base.c_str(), base.c_str());
  return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical lab for p-form Maxwell fields on flat spatial tori"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "Experiment config file")->check(CLI::ExistingFile);
    sub->add_option("--suite", o.suite, "identities|evolution|green|gauge|phase|quantum|appendix|all");
    sub->add_option("--seed", o.seed, "Seed for randomized inputs");
    sub->add_option("--d", o.d, "Spatial dimension (overrides config)");
    sub->add_option("--N", o.N, "Cells per axis (overrides config)");
    sub->add_option("--out-dir", o.out_dir, "Directory for written artifacts");
  };

  CLI::App* run = app.add_subcommand("run", "Run verification suites and write a report");
  common(run);
  run->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  run->add_flag("--timings", o.timings, "Include wall times (breaks byte-determinism)");

  CLI::App* list = app.add_subcommand("list-checks", "List the check catalog");

  CLI::App* modes = app.add_subcommand("dump-modes", "Write the Laplacian mode table as CSV");
  common(modes);
  modes->add_option("--degree", o.degree, "Form degree");

  CLI::App* exp = app.add_subcommand("export-cauchy", "Write seeded Lorenz Cauchy data");
  common(exp);
  exp->add_option("--degree", o.degree, "Form degree");
  exp->add_option("--slice", o.slice, "Slice whose traces are exported");
  exp->add_option("--name", o.name, "Base file name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_pass : exit_usage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*list) return cmd_list();
    if (*modes) return cmd_dump_modes(o);
    if (*exp) return cmd_export(o);
  } catch (const CliError& e) {
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "pformlab: " << e.what() << "\n";
    return exit_usage;
  }
  return exit_usage;
}
