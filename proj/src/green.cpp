#include "pform/green.hpp"

#include <algorithm>
#include <cmath>

namespace pform {

SpacetimeForm GreensOperator::apply(const Current& f) const {
  const SpacetimePtr& st = f.form.st;
  const CauchyData zero = CauchyData::zero(st->complex(), f.degree());
  const int m = dir_ == Direction::retarded ? 0 : st->steps();
  return leapfrog_evolve(zero, st, m, &f);
}

SpacetimeForm apply_retarded(const Current& f) {
  return GreensOperator(Direction::retarded).apply(f);
}

SpacetimeForm apply_advanced(const Current& f) {
  return GreensOperator(Direction::advanced).apply(f);
}

SpacetimeForm causal_propagator(const Current& f) {
  return apply_advanced(f) - apply_retarded(f);
}

double commutation_check(const Current& f, CommuteOp op, Direction dir) {
  if (op == CommuteOp::delta && f.degree() == 0) return 0.0;
  const GreensOperator G(dir);
  const SpacetimeForm Gf = G.apply(f);
  SpacetimeForm lhs;
  Current opf;
  if (op == CommuteOp::d) {
    lhs = spacetime_d(Gf);
    opf = Current::make(spacetime_d(f.form), f.k0 - 1, f.k1 + 1);
  } else {
    lhs = spacetime_delta(Gf);
    opf = Current::make(spacetime_delta(f.form), f.k0, f.k1);
  }
  const SpacetimeForm diff = lhs - G.apply(opf);
  return max_slice_norm(diff) / std::max(max_slice_norm(Gf), 1e-12);
}

IdentityCheck representation_check(const SpacetimeForm& A, const Current& J, const Current& f,
                                   int m) {
  const SpacetimePtr& st = A.st;
  const int K = st->steps();
  require(m >= 0 && m <= K, ErrorCode::invalid_argument, "slice out of range");
  require(J.form.st == st && f.form.st == st, ErrorCode::invalid_argument,
          "forms live on different spacetimes");
  const Slice& s = *st->slice();

  const SpacetimeForm adv = apply_advanced(f);
  const SpacetimeForm ret = apply_retarded(f);
  const SpacetimeForm E = adv - ret;

  std::vector<double> vf(static_cast<std::size_t>(K + 1), 0.0), ef(static_cast<std::size_t>(K), 0.0);
  std::vector<double> vp(static_cast<std::size_t>(K + 1), 0.0), ep(static_cast<std::size_t>(K), 0.0);
  for (int k = m; k <= K; ++k) vf[k] = (k == m || k == K) ? 0.5 : 1.0;
  for (int k = 0; k <= m; ++k) vp[k] = (k == m || k == 0) ? 0.5 : 1.0;
  if (m == K) vf[K] = 0.5;
  if (m == 0) vp[0] = 0.5;
  for (int j = m; j < K; ++j) ef[j] = 1.0;
  for (int j = 0; j < m; ++j) ep[j] = 1.0;

  const CauchyData data = traces(A, m);
  const CauchyData ed = traces(E, m);
  const double terms[] = {
      weighted_pairing(J.form, adv, vf, ef),
      weighted_pairing(J.form, ret, vp, ep),
      s.inner(data.A0, ed.Ad),
      s.inner(data.Adelta, ed.An),
      -s.inner(data.Ad, ed.A0),
      -s.inner(data.An, ed.Adelta),
  };
  IdentityCheck r;
  r.lhs = spacetime_pairing(A, f.form);
  double mag = std::abs(r.lhs);
  double sum_abs = 0.0;
  for (double t : terms) {
    r.rhs += t;
    sum_abs += std::abs(t);
  }
  mag = std::max({mag, sum_abs, 1e-12});
  r.residual = std::abs(r.lhs - r.rhs) / mag;
  return r;
}

}  // namespace pform
