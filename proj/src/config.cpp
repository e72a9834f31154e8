#include "pform/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pform/error.hpp"

namespace pform {

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"identities", "evolution", "green", "gauge",
                                              "phase",      "quantum",   "appendix"};
  return names;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

struct LineError {
  std::string where;
  [[noreturn]] void operator()(const std::string& msg) const {
    fail(ErrorCode::config, where + ": " + msg);
  }
};

double to_double(const std::string& v, const LineError& err) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) err("trailing characters in number '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    err("expected a number, got '" + v + "'");
  }
}

long long to_int(const std::string& v, const LineError& err) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) err("expected an integer, got '" + v + "'");
    return x;
  } catch (const std::logic_error&) {
    err("expected an integer, got '" + v + "'");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  ExperimentConfig c;
  bool have_L = false;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const LineError err{origin + ":" + std::to_string(lineno)};
    std::string line = raw;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') err("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      static const char* known[] = {"lattice", "fields", "time", "quantum", "run", "tolerances"};
      if (std::find(std::begin(known), std::end(known), section) == std::end(known))
        err("unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) err("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (section.empty()) err("key '" + key + "' outside any section");
    if (val.empty()) err("empty value for '" + key + "'");
    const std::string full = section + "." + key;

    if (section == "tolerances") {
      const double t = to_double(val, err);
      if (!(t > 0.0) || !std::isfinite(t)) err("tolerance for '" + key + "' must be positive");
      c.tolerances[key] = t;
    } else if (full == "lattice.d") {
      c.d = static_cast<int>(to_int(val, err));
    } else if (full == "lattice.N") {
      c.N = static_cast<int>(to_int(val, err));
    } else if (full == "lattice.L") {
      c.L.clear();
      for (const auto& x : split_list(val)) c.L.push_back(to_double(x, err));
      have_L = true;
    } else if (full == "fields.degrees") {
      c.degrees.clear();
      for (const auto& x : split_list(val)) c.degrees.push_back(static_cast<int>(to_int(x, err)));
    } else if (full == "time.dt") {
      c.dt = to_double(val, err);
      if (!(c.dt > 0.0)) err("dt must be positive");
    } else if (full == "time.cfl") {
      c.cfl = to_double(val, err);
    } else if (full == "time.steps") {
      c.steps = static_cast<int>(to_int(val, err));
    } else if (full == "quantum.degree") {
      c.quantum_degree = static_cast<int>(to_int(val, err));
    } else if (full == "quantum.modes") {
      c.quantum_modes = static_cast<int>(to_int(val, err));
    } else if (full == "quantum.n_max") {
      c.n_max = static_cast<int>(to_int(val, err));
    } else if (full == "run.suite") {
      c.suite = val;
    } else if (full == "run.seed") {
      const long long s = to_int(val, err);
      if (s < 0) err("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else {
      err("unknown key '" + key + "' in [" + section + "]");
    }
  }
  if (!have_L) c.L.assign(static_cast<std::size_t>(std::max(c.d, 1)), 6.283185307179586);
  if (c.L.size() == 1 && c.d > 1) c.L.assign(static_cast<std::size_t>(c.d), c.L.front());
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::config, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str(), path);
}

void ExperimentConfig::validate() const {
  auto bad = [](const std::string& m) { fail(ErrorCode::config, m); };
  if (d < 1 || d > 3) bad("lattice.d must be 1, 2 or 3");
  if (N < 2) bad("lattice.N must be at least 2");
  if (static_cast<int>(L.size()) != d) bad("lattice.L needs one value or one per axis");
  for (double x : L)
    if (!(x > 0.0) || !std::isfinite(x)) bad("lattice.L entries must be positive");
  for (int p : degrees)
    if (p < 0 || p > d) bad("fields.degrees entries must lie in 0..d");
  if (dt < 0.0) bad("time.dt must be positive");
  if (dt == 0.0 && !(cfl > 0.0 && cfl <= 1.8)) bad("time.cfl must lie in (0, 1.8]");
  if (steps < 8) bad("time.steps must be at least 8");
  if (quantum_degree != -1 && (quantum_degree < 0 || quantum_degree >= d))
    bad("quantum.degree must lie in 0..d-1");
  if (quantum_modes < 1 || quantum_modes > 3) bad("quantum.modes must be 1..3");
  if (n_max < 2 || n_max > 6) bad("quantum.n_max must be 2..6");
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    bad("run.suite '" + suite + "' is not a known suite");
}

std::vector<int> ExperimentConfig::active_degrees() const {
  if (!degrees.empty()) return degrees;
  std::vector<int> all;
  for (int p = 0; p <= d; ++p) all.push_back(p);
  return all;
}

int ExperimentConfig::active_quantum_degree() const {
  if (quantum_degree >= 0) return quantum_degree;
  return d == 1 ? 0 : 1;
}

std::string ExperimentConfig::to_text() const {
  std::ostringstream os;
  os.precision(17);
  os << "[lattice]\nd = " << d << "\nN = " << N << "\nL = ";
  for (std::size_t i = 0; i < L.size(); ++i) os << (i ? ", " : "") << L[i];
  os << "\n\n[fields]\n";
  if (!degrees.empty()) {
    os << "degrees = ";
    for (std::size_t i = 0; i < degrees.size(); ++i) os << (i ? ", " : "") << degrees[i];
    os << "\n";
  }
  os << "\n[time]\n";
  if (dt > 0.0)
    os << "dt = " << dt << "\n";
  else
    os << "cfl = " << cfl << "\n";
  os << "steps = " << steps << "\n\n[quantum]\n";
  if (quantum_degree >= 0) os << "degree = " << quantum_degree << "\n";
  os << "modes = " << quantum_modes << "\nn_max = " << n_max << "\n\n[run]\nsuite = " << suite
     << "\nseed = " << seed << "\n";
  if (!tolerances.empty()) {
    os << "\n[tolerances]\n";
    for (const auto& [k, v] : tolerances) os << k << " = " << v << "\n";
  }
  return os.str();
}

}  // namespace pform
