#include "pform/phase.hpp"

#include <algorithm>
#include <cmath>

namespace pform {

namespace {

/// sqrt(sum dt (|a_k|^2 + |b_j|^2)): Cauchy-Schwarz partner of the pairing.
double spacetime_norm(const SpacetimeForm& A) {
  const Slice& s = *A.st->slice();
  double sum = 0.0;
  for (int k = 0; k <= A.steps(); ++k) sum += std::pow(s.norm(A.a_at(k)), 2);
  for (int j = 0; j < A.steps(); ++j) sum += std::pow(s.norm(A.b_at(j)), 2);
  return std::sqrt(A.st->dt() * sum);
}

}  // namespace

PhasePoint PhasePoint::make(const Slice& s, const Cochain& A0, const Cochain& Ad) {
  require(A0.degree == Ad.degree, ErrorCode::degree_mismatch, "A0 and Ad must share a degree");
  require(s.norm(s.delta(Ad)) <= 1e-8 * std::max(s.norm(Ad), 1e-12), ErrorCode::precondition,
          "momentum is not co-closed");
  const HodgeParts parts = s.hodge_decompose(A0);
  return PhasePoint{parts.coexact + parts.harmonic, Ad};
}

double sigma_data(const Slice& s, const Cochain& A0, const Cochain& Ad, const Cochain& B0,
                  const Cochain& Bd) {
  return s.inner(A0, Bd) - s.inner(B0, Ad);
}

double sigma(const Slice& s, const PhasePoint& u, const PhasePoint& v) {
  return sigma_data(s, u.cls, u.momentum, v.cls, v.momentum);
}

double sigma(const SpacetimeForm& A, const SpacetimeForm& B, int k, bool check) {
  if (check)
    require(maxwell_residual(A) <= 1e-6 && maxwell_residual(B) <= 1e-6,
            ErrorCode::precondition, "sigma needs two free Maxwell solutions");
  const Slice& s = *A.st->slice();
  return sigma_data(s, trace(A, k, TraceKind::zero), trace(A, k, TraceKind::d),
                    trace(B, k, TraceKind::zero), trace(B, k, TraceKind::d));
}

double surface_independence_check(const SpacetimeForm& A, const SpacetimeForm& B, int k1,
                                  int k2) {
  const Slice& s = *A.st->slice();
  const double s1 = sigma(A, B, k1);
  const double s2 = sigma(A, B, k2, false);
  const double bound = s.norm(trace(A, k1, TraceKind::zero)) * s.norm(trace(B, k1, TraceKind::d)) +
                       s.norm(trace(B, k1, TraceKind::zero)) * s.norm(trace(A, k1, TraceKind::d));
  return std::abs(s1 - s2) / std::max(bound, 1e-12);
}

double degenerate_form_demo(const Slice& s, const Cochain& chi, const Cochain& B0,
                            const Cochain& Bd) {
  const Cochain dchi = s.d(chi);
  return sigma_data(s, dchi, Cochain(dchi.complex, dchi.degree), B0, Bd);
}

IdentityCheck pairing_vs_sigma(const SpacetimeForm& A, const Current& f, int k) {
  require(f.co_closed, ErrorCode::precondition, "test current is not co-closed");
  IdentityCheck r;
  r.lhs = spacetime_pairing(A, f.form);
  const SpacetimeForm E = causal_propagator(f);
  r.rhs = sigma(A, E, k);
  const Slice& s = *A.st->slice();
  const double bound = s.norm(trace(A, k, TraceKind::zero)) * s.norm(trace(E, k, TraceKind::d)) +
                       s.norm(trace(E, k, TraceKind::zero)) * s.norm(trace(A, k, TraceKind::d));
  const double cs = spacetime_norm(A) * spacetime_norm(f.form);
  r.residual = std::abs(r.lhs - r.rhs) / std::max({std::abs(r.lhs), bound, cs, 1e-300});
  return r;
}

BracketResult poisson_bracket(const Current& f, const Current& g, int k) {
  require(f.co_closed && g.co_closed, ErrorCode::precondition,
          "bracket needs co-closed currents");
  const SpacetimeForm Ef = causal_propagator(f);
  const SpacetimeForm Eg = causal_propagator(g);
  BracketResult r;
  r.bracket = sigma(Ef, Eg, k, false);
  r.pairing = spacetime_pairing(f.form, Eg);
  const Slice& s = *f.form.st->slice();
  const double bound = s.norm(trace(Ef, k, TraceKind::zero)) * s.norm(trace(Eg, k, TraceKind::d)) +
                       s.norm(trace(Eg, k, TraceKind::zero)) * s.norm(trace(Ef, k, TraceKind::d));
  const double cs = spacetime_norm(f.form) * spacetime_norm(Eg);
  r.residual = std::abs(r.bracket + r.pairing) / std::max({std::abs(r.pairing), bound, cs, 1e-300});
  return r;
}

}  // namespace pform
