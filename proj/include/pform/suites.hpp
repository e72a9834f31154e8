#pragma once

#include <string>
#include <vector>

#include "pform/config.hpp"

namespace pform {

inline constexpr const char* report_schema = "pformlab-report/1";

struct CheckInfo {
  std::string name;
  std::string suite;
  std::string anchor;     // the statement the check exercises
  double tolerance = 0.0;
  /// Checks that are implemented as stated but cannot pass; see README.
  bool known_unattainable = false;
};

struct CheckRecord {
  CheckInfo info;
  std::string digest;
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
  std::string detail;
};

struct ModeRow {
  int index = 0;
  double lambda = 0.0;
  double omega = 0.0;
};

struct Report {
  ExperimentConfig config;
  std::vector<CheckRecord> checks;
  double dt = 0.0;
  double cfl_number = 0.0;
  int quantum_degree = 0;
  int harmonic_excluded = 0;           // zero modes left out of the quantization
  std::vector<ModeRow> quantum_modes;  // filled when the quantum suite runs

  bool all_pass() const;
};

const std::vector<CheckInfo>& check_catalog();

/// Runs the selected suites in catalog order. Check failures, including
/// thrown errors inside a check, are recorded rather than propagated.
Report run_experiment(const ExperimentConfig& config);

std::string report_json(const Report& r, bool timings);
std::string report_csv(const Report& r, bool timings);

/// m, lambda, omega, harmonic for the full degree-p spectrum of the
/// configured lattice.
std::string mode_table_csv(const ExperimentConfig& config, int p);

/// FNV-1a, hex.
std::string digest_hex(const std::string& text);

}  // namespace pform
