#include <doctest.h>

#include "support.hpp"

using namespace testing;

namespace {

SpacetimePtr reference(int d = 2, int N = 4, int K = 40) {
  return Spacetime::make(torus(d, N), 0.2, K);
}

}  // namespace

TEST_CASE("zero source gives zero solutions") {
  auto st = reference();
  const Current f = Current::zero(st, 1);
  CHECK(max_slice_norm(apply_retarded(f)) == 0.0);
  CHECK(max_slice_norm(apply_advanced(f)) == 0.0);
  CHECK(max_slice_norm(causal_propagator(f)) == 0.0);
}

TEST_CASE("retarded and advanced solutions have causal support") {
  auto st = reference();
  SpacetimeForm f = SpacetimeForm::zero(st, 1);
  f.av(15)[3] = 1.0;
  const Current J = Current::make(f, 15, 15);
  const SpacetimeForm ret = apply_retarded(J), adv = apply_advanced(J);
  for (int k = -1; k <= 15; ++k) CHECK(ret.av(k).norm() == 0.0);
  for (int k = 15; k <= 41; ++k) CHECK(adv.av(k).norm() == 0.0);
  CHECK(ret.av(16).norm() > 0.0);
  CHECK(adv.av(14).norm() > 0.0);
}

TEST_CASE("Green's solutions invert the wave operator") {
  auto st = reference();
  Rng rng(1);
  for (int p = 0; p <= 2; ++p) {
    const Current J = rng.current(st, p, 10, 25);
    CHECK(box_residual(apply_retarded(J), &J) <= 1e-10);
    CHECK(box_residual(apply_advanced(J), &J) <= 1e-10);
  }
}

TEST_CASE("causal propagator annihilates wave operators of compact forms") {
  auto st = reference();
  Rng rng(2);
  for (int p = 0; p <= 2; ++p) {
    const SpacetimeForm theta = rng.form(st, p, 10, 25);
    const Current f = Current::make(box(theta), 9, 26);
    const double scale = max_slice_norm(apply_retarded(f));
    CHECK(max_slice_norm(causal_propagator(f)) <= 1e-9 * scale);
  }
}

TEST_CASE("after the source the causal propagator is minus the retarded solution") {
  auto st = reference();
  Rng rng(3);
  const Current f = rng.current(st, 1, 10, 20);
  const SpacetimeForm E = causal_propagator(f), ret = apply_retarded(f);
  for (int k = 22; k <= 40; ++k) CHECK((E.av(k) + ret.av(k)).norm() == 0.0);
}

TEST_CASE("Green's operators are linear") {
  auto st = reference();
  Rng rng(4);
  const Current f = rng.current(st, 1, 10, 20);
  const Current f2 = Current::make(2.0 * f.form, 10, 20);
  const SpacetimeForm a = causal_propagator(f2), b = 2.0 * causal_propagator(f);
  for (int k = 0; k <= 40; ++k) CHECK(a.av(k) == b.av(k));
}

TEST_CASE("Green's operators commute with d and delta") {
  auto st = reference();
  Rng rng(5);
  for (int p = 0; p <= 2; ++p)
    for (Direction dir : {Direction::retarded, Direction::advanced}) {
      const Current f = rng.current(st, p, 8, 30);
      CHECK(commutation_check(f, CommuteOp::d, dir) <= 1e-10);
      CHECK(commutation_check(f, CommuteOp::delta, dir) <= 1e-10);
    }
  const Current f0 = rng.current(st, 0, 8, 30);
  CHECK(commutation_check(f0, CommuteOp::delta, Direction::retarded) == 0.0);
}

TEST_CASE("causal propagator is antisymmetric under the pairing") {
  auto st = reference();
  Rng rng(6);
  for (int p = 0; p <= 2; ++p) {
    const Current f = rng.current(st, p, 5, 20), g = rng.current(st, p, 12, 33);
    const double a = spacetime_pairing(f.form, causal_propagator(g));
    const double b = spacetime_pairing(g.form, causal_propagator(f));
    CHECK(std::abs(a + b) <= 1e-12 * std::abs(a));
  }
}

TEST_CASE("representation formula holds on the lattice") {
  auto st = reference();
  Rng rng(7);
  for (int p = 0; p <= 2; ++p) {
    const Current J = rng.current(st, p, 3, 36);
    const Current f = rng.current(st, p, 10, 30);
    CauchyData data = CauchyData::zero(st->complex(), p);
    data.A0 = rng.cochain(st->complex(), p);
    data.Ad = rng.cochain(st->complex(), p);
    if (p >= 1) {
      data.An = rng.cochain(st->complex(), p - 1);
      data.Adelta = rng.cochain(st->complex(), p - 1);
    }
    for (int m : {0, 17, 40}) {
      const SpacetimeForm A = leapfrog_evolve(data, st, m, &J);
      CHECK(representation_check(A, J, f, m).residual <= 1e-10);
    }
  }
}

TEST_CASE("trivial representation") {
  auto st = reference();
  Rng rng(8);
  const IdentityCheck r =
      representation_check(SpacetimeForm::zero(st, 1), Current::zero(st, 1), rng.current(st, 1, 5, 9), 3);
  CHECK(r.lhs == 0.0);
  CHECK(r.rhs == 0.0);
}
