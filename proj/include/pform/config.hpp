#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pform/error.hpp"

namespace pform {

/// Sectioned "key = value" experiment description.
///
///   [lattice]    d, N, L (one value or one per axis)
///   [fields]     degrees (comma list)
///   [time]       dt or cfl (fraction of the stability bound), steps
///   [quantum]    degree, modes, n_max
///   [run]        suite, seed
///   [tolerances] <check name> = value
struct ExperimentConfig {
  int d = 2;
  int N = 8;
  std::vector<double> L{6.283185307179586, 6.283185307179586};
  std::vector<int> degrees;  // empty = all of 0..d
  double dt = 0.0;           // 0 = derive from cfl
  double cfl = 0.5;
  int steps = 64;
  int quantum_degree = -1;   // -1 = 0 on a circle, 1 otherwise
  int quantum_modes = 3;
  int n_max = 6;
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::map<std::string, double> tolerances;

  /// Throws Error(config) naming the offending field.
  void validate() const;
  std::vector<int> active_degrees() const;
  int active_quantum_degree() const;
  /// Canonical text form; parse(to_text()) reproduces the config.
  std::string to_text() const;
};

ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<config>");
ExperimentConfig load_config(const std::string& path);

const std::vector<std::string>& suite_names();

}  // namespace pform
