#pragma once

#include "pform/cauchy.hpp"

namespace pform {

/// ([A0], Ad): the non-exact part of A0 and a co-closed momentum.
struct PhasePoint {
  Cochain cls;
  Cochain momentum;

  /// Projects out the exact part of A0; rejects Ad that is not co-closed.
  static PhasePoint make(const Slice& s, const Cochain& A0, const Cochain& Ad);
};

/// <A0, Bd> - <B0, Ad> on slice data.
double sigma_data(const Slice& s, const Cochain& A0, const Cochain& Ad, const Cochain& B0,
                  const Cochain& Bd);
double sigma(const Slice& s, const PhasePoint& u, const PhasePoint& v);

/// <rho0 A, rhod B> - <rho0 B, rhod A> on slice k. With check set, both
/// forms must solve the free Maxwell equation to 1e-6.
double sigma(const SpacetimeForm& A, const SpacetimeForm& B, int k, bool check = true);

/// |sigma_k1 - sigma_k2| over the Cauchy-Schwarz bound of the terms at k1.
double surface_independence_check(const SpacetimeForm& A, const SpacetimeForm& B, int k1,
                                  int k2);

/// Unquotiented form with first argument (d chi, 0): <d chi, B_d>.
double degenerate_form_demo(const Slice& s, const Cochain& chi, const Cochain& B0,
                            const Cochain& Bd);

/// <A, f> against sigma(A, E f, k); f must be co-closed.
IdentityCheck pairing_vs_sigma(const SpacetimeForm& A, const Current& f, int k);

struct BracketResult {
  double bracket = 0.0;       // sigma(E f, E f', k)
  double pairing = 0.0;       // <f, E f'>
  double residual = 0.0;      // |bracket + pairing| / scale
};

/// Poisson bracket of the linear observables attached to f and f'. Because
/// the transpose of E is -E, the bracket equals <E f, f'> = -<f, E f'>.
BracketResult poisson_bracket(const Current& f, const Current& g, int k);

}  // namespace pform
