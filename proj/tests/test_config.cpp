#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "pform/config.hpp"

using namespace pform;

namespace {

std::string config_error(const std::string& text) {
  try {
    parse_config(text, "exp.ini");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::config);
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const ExperimentConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.active_degrees() == std::vector<int>{0, 1, 2});
  CHECK(c.active_quantum_degree() == 1);
  ExperimentConfig circle;
  circle.d = 1;
  circle.L = {1.0};
  CHECK(circle.active_quantum_degree() == 0);
}

TEST_CASE("parsing") {
  const ExperimentConfig c = parse_config(R"(
# lattice
[lattice]
d = 3
N = 4
L = 1.5          ; broadcast
[fields]
degrees = 1, 2
[time]
cfl = 0.25
steps = 32
[quantum]
degree = 2
modes = 2
n_max = 4
[run]
suite = gauge
seed = 42
[tolerances]
f_invariance = 1e-9
)");
  CHECK(c.d == 3);
  CHECK(c.N == 4);
  CHECK(c.L == std::vector<double>{1.5, 1.5, 1.5});
  CHECK(c.active_degrees() == std::vector<int>{1, 2});
  CHECK(c.cfl == 0.25);
  CHECK(c.steps == 32);
  CHECK(c.active_quantum_degree() == 2);
  CHECK(c.quantum_modes == 2);
  CHECK(c.n_max == 4);
  CHECK(c.suite == "gauge");
  CHECK(c.seed == 42);
  CHECK(c.tolerances.at("f_invariance") == 1e-9);
}

TEST_CASE("canonical text round-trips") {
  ExperimentConfig c;
  c.d = 1;
  c.L = {0.1 + 0.2};
  c.dt = 0.0123456789012345;
  c.degrees = {1};
  c.tolerances["ccr"] = 3e-3;
  const ExperimentConfig back = parse_config(c.to_text());
  CHECK(back.to_text() == c.to_text());
  CHECK(back.L == c.L);
  CHECK(back.dt == c.dt);
}

TEST_CASE("errors name the line") {
  CHECK(config_error("[lattice]\nN = 8\nwidth = 3\n").find("exp.ini:3") != std::string::npos);
  CHECK(config_error("[lattice]\n[extras]\n").find("exp.ini:2") != std::string::npos);
  CHECK(config_error("N = 4\n").find("exp.ini:1") != std::string::npos);
  CHECK(config_error("[lattice]\nN = four\n").find("exp.ini:2") != std::string::npos);
  CHECK(config_error("[lattice]\nN\n").find("exp.ini:2") != std::string::npos);
}

TEST_CASE("validation") {
  CHECK(config_error("[lattice]\nN = 1\n").find("N") != std::string::npos);
  CHECK_FALSE(config_error("[lattice]\nd = 4\n").empty());
  CHECK_FALSE(config_error("[lattice]\nd = 2\nL = 1, 2, 3\n").empty());
  CHECK_FALSE(config_error("[time]\ncfl = 2\n").empty());
  CHECK_FALSE(config_error("[time]\nsteps = 2\n").empty());
  CHECK_FALSE(config_error("[quantum]\nn_max = 7\n").empty());
  CHECK_FALSE(config_error("[quantum]\nmodes = 4\n").empty());
  CHECK_FALSE(config_error("[quantum]\ndegree = 2\n").empty());
  CHECK_FALSE(config_error("[fields]\ndegrees = 3\n").empty());
  CHECK_FALSE(config_error("[run]\nsuite = everything\n").empty());
}

TEST_CASE("loading from disk") {
  const auto path = std::filesystem::temp_directory_path() / "pform_config_test.ini";
  {
    std::ofstream f(path);
    f << "[lattice]\nN = 6\n";
  }
  CHECK(load_config(path.string()).N == 6);
  std::filesystem::remove(path);
  try {
    load_config(path.string());
    FAIL("missing file accepted");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::io || e.code() == ErrorCode::config));
  }
}
