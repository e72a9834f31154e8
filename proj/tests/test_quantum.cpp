#include <doctest.h>

#include "support.hpp"

using namespace testing;

namespace {

/// Structure over the first modes of a circle, with frequencies overridden.
QuantStructure prescribed(const Eigen::VectorXd& omega) {
  auto s = torus(1, 8);
  ModeBasis b = first_modes(s->coexact_modes(0), static_cast<int>(omega.size()));
  b.omega = omega;
  b.eigenvalues = omega.array().square();
  return QuantStructure::build(s, b);
}

ModeVector vec(std::initializer_list<double> q, std::initializer_list<double> p) {
  ModeVector u;
  u.q = Eigen::Map<const Eigen::VectorXd>(q.begin(), static_cast<Eigen::Index>(q.size()));
  u.p = Eigen::Map<const Eigen::VectorXd>(p.begin(), static_cast<Eigen::Index>(p.size()));
  return u;
}

ModeVector random_vec(Rng& rng, std::size_t m, double scale = 1.0) {
  ModeVector u;
  u.q.resize(static_cast<Eigen::Index>(m));
  u.p.resize(static_cast<Eigen::Index>(m));
  for (Eigen::Index i = 0; i < u.q.size(); ++i) u.q[i] = scale * rng(), u.p[i] = scale * rng();
  return u;
}

struct Lab {
  SlicePtr s = torus(2, 6);
  SpacetimePtr st = Spacetime::make(s, 0.2, 60);
  QuantStructure qs = QuantStructure::build(s, first_modes(s->coexact_modes(1), 3));
  FockSpace fock{3, 6};
};

double hermitian_defect(const FockOperator& A) { return op_norm(A.mat - A.mat.adjoint()); }

}  // namespace

TEST_CASE("one-particle structure on prescribed frequencies") {
  Eigen::VectorXd w(1);
  w << 2.0;
  const QuantStructure two = prescribed(w);
  CHECK(two.mu(vec({1}, {0}), vec({1}, {0})) == 1.0);
  CHECK(two.mu(vec({0}, {1}), vec({0}, {1})) == 0.25);
  w << 1.0;
  const QuantStructure one = prescribed(w);
  const Eigen::VectorXcd k = one.K(vec({1}, {0}));
  CHECK(k[0].real() == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(k[0].imag() == 0.0);
  const SaturationResult r = mu_saturation_check(one, vec({1}, {0}), 2000);
  CHECK(r.mu == 0.5);
  CHECK(r.sup == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.scan_ok);
  const SaturationResult r3 = mu_saturation_check(one, vec({3}, {0}), 2000);
  CHECK(r3.mu == doctest::Approx(9 * r.mu).epsilon(1e-14));
  CHECK(r3.sup == doctest::Approx(9 * r.sup).epsilon(1e-14));
}

TEST_CASE("zero modes cannot be quantized") {
  auto s = torus(2, 4);
  CHECK_THROWS_AS(QuantStructure::build(s, s->spectrum(1)), Error);
}

TEST_CASE("complex structure identities") {
  Lab lab;
  Rng rng(1);
  for (int i = 0; i < 50; ++i) {
    const ModeVector u = random_vec(rng, 3), v = random_vec(rng, 3);
    const ModeVector jj = lab.qs.J(lab.qs.J(u));
    CHECK(mode_norm(jj + u) <= 1e-14 * mode_norm(u));
    CHECK(-lab.qs.sigma(u, lab.qs.J(u)) > 0.0);
    CHECK(2 * lab.qs.mu(u, lab.qs.J(v)) == doctest::Approx(lab.qs.sigma(u, v)).epsilon(1e-12));
    CHECK(lab.qs.sigma(u, v) * lab.qs.sigma(u, v) <=
          4 * lab.qs.mu(u, u) * lab.qs.mu(v, v) * (1 + 1e-12));
    CHECK(k_identity_residual(lab.qs, u, v) <= 1e-12 * (mode_norm(u) * mode_norm(v)));
  }
  const SaturationResult r = mu_saturation_check(lab.qs, random_vec(rng, 3), 5000);
  CHECK(r.residual <= 1e-8);
  CHECK(r.scan_ok);
}

TEST_CASE("mode coordinates and synthesis are inverse") {
  Lab lab;
  Rng rng(2);
  const ModeVector u = random_vec(rng, 3);
  const auto [A0, Ad] = lab.qs.synthesize(u);
  const ModeVector back = lab.qs.coords(A0, Ad);
  CHECK(mode_norm(back - u) <= 1e-12 * mode_norm(u));
  CHECK(lab.qs.leakage(A0, Ad) <= 1e-12);
  const Cochain other = lab.s->codifferential(rng.cochain(lab.s->complex(), 2));
  CHECK(lab.qs.leakage(other, other) > 0.1);
}

TEST_CASE("Fock space layout") {
  const FockSpace f(3, 6);
  CHECK(f.dim() == 343);
  CHECK(f.occupation(1) == std::vector<int>{0, 0, 1});
  CHECK(f.occupation(49) == std::vector<int>{1, 0, 0});
  for (std::size_t i = 0; i < f.dim(); ++i) CHECK(f.index(f.occupation(i)) == i);
  CHECK(f.untruncated().size() == 216);
  CHECK_THROWS_AS(FockSpace(4, 2), Error);
  CHECK_THROWS_AS(FockSpace(1, 7), Error);
}

TEST_CASE("ladder operators and the truncation deficit") {
  const FockSpace f(2, 4);
  const auto keep = f.untruncated();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const FockOperator c = commutator(annihilation(f, i), creation(f, j));
      const Eigen::MatrixXcd expect = i == j ? identity(f).mat : Eigen::MatrixXcd::Zero(f.dim(), f.dim());
      CHECK(restricted_norm(c.mat - expect, keep) <= 1e-12);
      CHECK(op_norm(commutator(annihilation(f, i), annihilation(f, j)).mat) <= 1e-12);
    }
  // a a^dag kills the top state, so the commutator there is -n_max
  const FockOperator c = commutator(annihilation(f, 0), creation(f, 0));
  const std::size_t top = f.index({4, 0});
  CHECK(c.mat(top, top).real() == doctest::Approx(-4.0));
  CHECK(annihilation(f, 0).mat(f.index({0, 0}), f.index({1, 0})).real() == doctest::Approx(1.0));
  CHECK(annihilation(f, 1).mat(f.index({0, 2}), f.index({0, 3})).real() ==
        doctest::Approx(std::sqrt(3.0)));
}

TEST_CASE("operator norm") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(3, 3);
  m(0, 1) = 3.0;
  m(2, 2) = cplx(0, -2);
  CHECK(op_norm(m) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(op_norm(Eigen::MatrixXcd::Zero(4, 4)) == 0.0);
}

TEST_CASE("smeared field operators") {
  Lab lab;
  Rng rng(3);
  CHECK(op_norm(field_operator(Current::zero(lab.st, 1), lab.qs, lab.fock, 0).op.mat) == 0.0);
  const Eigen::Vector3d c(rng(), rng(), rng());
  const Current J = mode_current(lab.st, lab.qs, c, 30);
  const FieldOperator A = field_operator(J, lab.qs, lab.fock, 0);
  const FieldOperator A2 = field_operator(mode_current(lab.st, lab.qs, 2.0 * c, 30), lab.qs, lab.fock, 0);
  CHECK(op_norm(A2.op.mat - 2.0 * A.op.mat) <= 1e-12 * op_norm(A.op.mat));
  CHECK(A.leakage <= 1e-10);
  CHECK(hermitian_defect(A.op) <= 1e-12);
  CHECK(std::abs(A.op.mat(0, 0)) <= 1e-14);
  const Current bad = rng.current(lab.st, 1, 30, 31);
  CHECK_THROWS_AS(field_operator(bad, lab.qs, lab.fock, 0), Error);
}

TEST_CASE("commutators of smeared fields") {
  Lab lab;
  Rng rng(4);
  const Eigen::Vector3d a(rng(), rng(), rng()), b(rng(), rng(), rng());
  const Current J1 = mode_current(lab.st, lab.qs, a, 15), J2 = mode_current(lab.st, lab.qs, b, 36);
  const CcrResult self = ccr_check(J1, J1, lab.qs, lab.fock);
  CHECK(self.residual <= 1e-10);
  CHECK(std::abs(self.pairing) <= 1e-10);
  const CcrResult r = ccr_check(J1, J2, lab.qs, lab.fock);
  CHECK(r.residual <= 5e-3);
  CHECK(r.modal == doctest::Approx(r.pairing).epsilon(5e-3));
  CHECK(r.full_residual >= r.residual);
}

TEST_CASE("weak Maxwell equation") {
  Lab lab;
  Rng rng(5);
  const Current theta = rng.current(lab.st, 1, 20, 40);
  CHECK(weak_maxwell_check(theta, lab.qs, lab.fock) <= 1e-6);
}

TEST_CASE("Weyl operators") {
  Lab lab;
  Rng rng(6);
  const FockSpace fock(3, 5);
  const ModeVector zero = lab.qs.zero();
  CHECK(op_norm(weyl(zero, lab.qs, fock).mat - identity(fock).mat) <= 1e-14);
  const ModeVector u = random_vec(rng, 3, 0.05), v = random_vec(rng, 3, 0.05);
  const FockOperator W = weyl(u, lab.qs, fock);
  CHECK(op_norm(W.mat.adjoint() * W.mat - identity(fock).mat) <= 1e-8);
  CHECK(op_norm(W.mat * weyl(u * -1.0, lab.qs, fock).mat - identity(fock).mat) <= 1e-8);
  const WeylResult trivial = weyl_relation_check(u, zero, lab.qs, fock);
  CHECK(trivial.sigma == 0.0);
  CHECK(trivial.printed_phase <= 1e-12);
  const WeylResult uv = weyl_relation_check(u, v, lab.qs, fock);
  const WeylResult vu = weyl_relation_check(v, u, lab.qs, fock);
  CHECK(vu.sigma == doctest::Approx(-uv.sigma).epsilon(1e-14));
  CHECK(uv.consistent_phase <= 1e-6);
  CHECK(vu.consistent_phase <= 1e-6);
  CHECK(uv.printed_phase == doctest::Approx(std::abs(2 * std::sin(uv.sigma / 2))).epsilon(1e-2));
  try {
    weyl(random_vec(rng, 3, 10.0), lab.qs, fock);
    FAIL("amplitude guard not enforced");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::amplitude_guard);
  }
}
