#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace testing;

namespace {

CauchyData lorenz_data(const Slice& s, Rng& rng, int p) {
  CauchyData data = CauchyData::zero(s.complex(), p);
  data.A0 = rng.cochain(s.complex(), p);
  data.Ad = s.codifferential(rng.cochain(s.complex(), p + 1));
  if (p >= 1) data.An = s.codifferential(rng.cochain(s.complex(), p));
  return data;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return static_cast<ErrorCode>(0);
}

}  // namespace

TEST_CASE("Lorenz data conditions") {
  auto s = torus(2, 5);
  Rng rng(1);
  CauchyData data = lorenz_data(*s, rng, 1);
  CHECK(is_lorenz_data(*s, data).ok);
  data.Ad += s->d(rng.cochain(s->complex(), 0));
  const LorenzDataCheck bad = is_lorenz_data(*s, data);
  CHECK_FALSE(bad.ok);
  CHECK(bad.delta_Ad > 0.1);
  CHECK(is_lorenz_data(*s, lorenz_data(*s, rng, 0)).ok);
  CauchyData scalar = CauchyData::zero(s->complex(), 0);
  scalar.A0 = rng.cochain(s->complex(), 0);
  scalar.Ad = rng.cochain(s->complex(), 0);
  CHECK(is_lorenz_data(*s, scalar).ok);
}

TEST_CASE("Lorenz gauge propagation on a single mode") {
  auto s = torus(2, 16);
  auto st = Spacetime::make(s, 0.1, 256);
  const ModeBasis modes = s->coexact_modes(1);
  CauchyData data = CauchyData::zero(s->complex(), 1);
  data.A0 = modes.mode(0);
  data.Ad = modes.mode(1);
  CHECK(lorenz_equivalence_check(data, st) <= 1e-6);
  CHECK(lorenz_equivalence_check(CauchyData::zero(s->complex(), 1), st) == 0.0);
  // divergence datum of norm 0.1 persists
  CauchyData bad = data;
  bad.Adelta.values.setRandom();
  bad.Adelta *= 0.1 / s->norm(bad.Adelta);
  CHECK(lorenz_equivalence_check(bad, st) >= 0.05);
}

TEST_CASE("homogeneous Maxwell solutions") {
  auto s = torus(2, 6);
  auto st = Spacetime::make(s, 0.2, 60);
  const ModeBasis modes = s->coexact_modes(1);
  const Cochain zero(s->complex(), 1);
  const SpacetimeForm A = solve_maxwell_homogeneous(modes.mode(0), zero, st);
  CHECK(maxwell_residual(A) <= 1e-6);
  const Cochain An = s->coexact_modes(0).mode(0);
  const SpacetimeForm B = solve_maxwell_homogeneous(modes.mode(0), zero, st, &An);
  CHECK(max_slice_norm(spacetime_d(A) - spacetime_d(B)) <= 1e-6);
  CHECK(max_slice_norm(solve_maxwell_homogeneous(zero, zero, st)) == 0.0);
  Rng rng(2);
  CHECK(code_of([&] { solve_maxwell_homogeneous(zero, rng.cochain(s->complex(), 1), st); }) ==
        ErrorCode::precondition);
}

TEST_CASE("sourced Lorenz solutions") {
  auto s = torus(2, 5);
  auto st = Spacetime::make(s, 0.2, 50);
  Rng rng(3);
  const Current J = rng.coclosed_current(st, 1, 10, 30);
  for (int m : {0, 15, 20}) {
    const SpacetimeForm A = solve_maxwell_inhomogeneous(rng.cochain(s->complex(), 1), J, st, m);
    CHECK(lorenz_residual(A) <= 1e-6 * max_slice_norm(A));
    CHECK(maxwell_residual(A, &J) <= 1e-6);
  }
  // zero source reduces to the homogeneous solution
  const Cochain A0 = rng.cochain(s->complex(), 1);
  const SpacetimeForm H = solve_maxwell_inhomogeneous(A0, Current::zero(st, 1), st);
  const SpacetimeForm G = solve_maxwell_homogeneous(A0, Cochain(s->complex(), 1), st);
  CHECK(max_slice_norm(H - G) == 0.0);
  CHECK(code_of([&] { solve_maxwell_inhomogeneous(A0, rng.current(st, 1, 5, 9), st); }) ==
        ErrorCode::precondition);
}

TEST_CASE("future-supported source matches the retarded solution up to gauge") {
  auto s = torus(2, 5);
  auto st = Spacetime::make(s, 0.2, 50);
  Rng rng(4);
  const Current J = rng.coclosed_current(st, 1, 10, 30);
  const SpacetimeForm A = solve_maxwell_inhomogeneous(s->d(rng.cochain(s->complex(), 0)), J, st);
  for (int k : {5, 25, 50}) CHECK(is_gauge_equivalent(A, apply_retarded(J), k, &J).equivalent);
}

TEST_CASE("gauge transformations") {
  auto s = torus(2, 5);
  auto st = Spacetime::make(s, 0.2, 40);
  Rng rng(5);
  const SpacetimeForm A = leapfrog_evolve(lorenz_data(*s, rng, 1), st);
  CHECK(max_slice_norm(gauge_transform(A, SpacetimeForm::zero(st, 0)) - A) == 0.0);
  const SpacetimeForm F = spacetime_d(A);
  for (int i = 0; i < 20; ++i) {
    const SpacetimeForm B = gauge_transform(A, rng.form(st, 0, 0, 40));
    CHECK(max_slice_norm(spacetime_d(B) - F) <= 1e-10 * max_slice_norm(F));
  }
  // a free Lorenz gauge parameter keeps the Lorenz gauge
  CauchyData lam = CauchyData::zero(s->complex(), 0);
  lam.A0 = rng.cochain(s->complex(), 0);
  lam.Ad = rng.cochain(s->complex(), 0);
  lam.Ad.values.array() -= lam.Ad.values.mean();
  const SpacetimeForm B = gauge_transform(A, leapfrog_evolve(lam, st));
  CHECK(lorenz_residual(B) <= 1e-6 * max_slice_norm(B));
  CHECK_THROWS_AS(gauge_transform(A, SpacetimeForm::zero(st, 1)), Error);
}

TEST_CASE("gauge equivalence decisions") {
  auto s = torus(2, 5);
  auto st = Spacetime::make(s, 0.2, 40);
  Rng rng(6);
  const SpacetimeForm A = leapfrog_evolve(lorenz_data(*s, rng, 1), st);
  CHECK(is_gauge_equivalent(A, gauge_transform(A, rng.form(st, 0, 0, 40)), 20).equivalent);
  CHECK_FALSE(is_gauge_equivalent(A, 2.0 * A, 20).equivalent);
  CauchyData shifted = CauchyData::zero(s->complex(), 1);
  shifted.A0.values.setOnes();  // harmonic on the flat torus
  const GaugeEquivalence h = is_gauge_equivalent(A, A + leapfrog_evolve(shifted, st), 20);
  CHECK_FALSE(h.equivalent);
  CHECK(h.momentum_diff <= 1e-12);
  CHECK(h.class_diff > 1e-3);
  CHECK(code_of([&] { is_gauge_equivalent(A, rng.form(st, 1, 0, 40), 20); }) ==
        ErrorCode::precondition);
}

TEST_CASE("Coulomb reduction") {
  auto s = torus(2, 5);
  auto st = Spacetime::make(s, 0.2, 40);
  Rng rng(7);
  CauchyData data = lorenz_data(*s, rng, 1);
  const auto [C, L] = make_coulomb(data, st);
  CHECK(s->norm(C.An) == 0.0);
  const SpacetimeForm diff = leapfrog_evolve(C, st) - leapfrog_evolve(data, st);
  CHECK(max_slice_norm(diff - spacetime_d(L)) <= 1e-5 * max_slice_norm(diff));
  data.An = Cochain(s->complex(), 0);
  CHECK(max_slice_norm(make_coulomb(data, st).second) == 0.0);
  const CauchyData scalar = lorenz_data(*s, rng, 0);
  const auto [C0, L0] = make_coulomb(scalar, st);
  CHECK(s->norm(C0.A0 - scalar.A0) == 0.0);
  CHECK(L0.degree == -1);
}

TEST_CASE("fundamental solutions") {
  auto s = torus(2, 5);
  auto st = Spacetime::make(s, 0.2, 40);
  Rng rng(8);
  const Current J = rng.coclosed_current(st, 1, 10, 25);
  CHECK(fundamental_solution_check(J, Direction::retarded).residual <= 1e-8);
  CHECK(fundamental_solution_check(J, Direction::advanced).residual <= 1e-8);
  const FundamentalCheck bad = fundamental_solution_check(rng.current(st, 1, 10, 25), Direction::retarded);
  CHECK_FALSE(bad.applicable);
  CHECK(bad.residual > 1e-3);
  CHECK(fundamental_solution_check(Current::zero(st, 1), Direction::retarded).residual == 0.0);
}

TEST_CASE("field strength from Cauchy data") {
  auto s = torus(2, 6);
  auto st = Spacetime::make(s, 0.2, 40);
  for (int p : {1, 2}) {
    const Cochain F0 = s->d(s->coexact_modes(p - 1).mode(0));
    const FieldCauchyResult r = solve_F_cauchy(F0, Cochain(s->complex(), p - 1), st);
    for (double x : {r.dF, r.deltaF, r.rho0_match, r.rhon_match, r.rhod_vanish, r.rhodelta_vanish})
      CHECK(x <= 1e-6);
  }
  const Cochain Fn = s->coexact_modes(0).mode(2);
  const FieldCauchyResult r = solve_F_cauchy(Cochain(s->complex(), 1), Fn, st);
  CHECK(s->norm(trace(r.F, 0, TraceKind::n) - Fn) <= 1e-6);
  const FieldCauchyResult z = solve_F_cauchy(Cochain(s->complex(), 2), Cochain(s->complex(), 1), st);
  CHECK(max_slice_norm(z.F) == 0.0);
  Cochain harmonic(s->complex(), 2);
  harmonic.values.setOnes();
  CHECK(code_of([&] { solve_F_cauchy(harmonic, Cochain(s->complex(), 1), st); }) ==
        ErrorCode::topological_obstruction);
}

TEST_CASE("Cauchy data round-trips through CSV and JSON") {
  auto s = torus(2, 3);
  Rng rng(9);
  const CauchyData data = lorenz_data(*s, rng, 1);
  const auto dir = std::filesystem::temp_directory_path() / "pform_cauchy_test";
  std::filesystem::create_directories(dir);
  const std::string base = (dir / "data").string();
  export_cauchy(data, 4, base);
  const CauchyFile back = import_cauchy(base);
  CHECK(back.slice == 4);
  CHECK(back.complex->dim() == 2);
  CHECK(back.complex->resolution() == 3);
  CHECK(back.data.A0.values == data.A0.values);
  CHECK(back.data.Ad.values == data.Ad.values);
  CHECK(back.data.An.values == data.An.values);

  {
    std::ofstream f(base + ".csv", std::ios::app);
    f << "Ad,1,0,notanumber\n";
  }
  try {
    import_cauchy(base);
    FAIL("malformed row accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::io);
    CHECK(std::string(e.what()).find("csv:") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
