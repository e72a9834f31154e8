#include "pform/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <sstream>

#include "pform/quantum.hpp"

namespace pform {

namespace {

double floor_scale(double s) { return std::max(s, 1e-300); }

int binomial(int n, int k) {
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

struct Ctx {
  const ExperimentConfig& cfg;
  SlicePtr slice;
  SpacetimePtr st;
  std::mt19937_64 rng;
  std::normal_distribution<double> gauss;
  std::ostringstream detail;

  const Slice& s() const { return *slice; }
  const ComplexPtr& c() const { return slice->complex(); }
  int K() const { return st->steps(); }
  int d() const { return slice->dim(); }

  std::vector<int> degrees(int lo, int hi) const {
    std::vector<int> out;
    for (int p : cfg.active_degrees())
      if (p >= lo && p <= hi) out.push_back(p);
    return out;
  }

  void note(const std::string& label, double value) {
    if (detail.tellp() > 0) detail << "; ";
    detail << label << "=" << value;
  }

  Cochain rnd(int p) {
    Cochain x(c(), p);
    for (Eigen::Index i = 0; i < x.values.size(); ++i) x.values[i] = gauss(rng);
    return x;
  }

  /// Co-closed spatial p-cochain without a spectral solve.
  Cochain coclosed(int p) {
    if (p < d()) return s().codifferential(rnd(p + 1));
    Cochain h(c(), p);
    h.values = gauss(rng) * s().weights(p).cwiseInverse();
    return h;
  }

  SpacetimeForm rnd_form(int p, int k0, int k1) {
    SpacetimeForm f = SpacetimeForm::zero(st, p);
    for (int k = k0; k <= k1; ++k)
      for (Eigen::Index i = 0; i < f.av(k).size(); ++i) f.av(k)[i] = gauss(rng);
    for (int j = k0; j < k1; ++j)
      for (Eigen::Index i = 0; i < f.bv(j).size(); ++i) f.bv(j)[i] = gauss(rng);
    return f;
  }

  Current rnd_current(int p, int k0, int k1) { return Current::make(rnd_form(p, k0, k1), k0, k1); }

  /// delta of a random (p+1)-form on [k0, k1]: co-closed by construction.
  Current coclosed_current(int p, int k0, int k1) {
    return Current::make(spacetime_delta(rnd_form(p + 1, k0, k1)), k0, k1);
  }

  CauchyData lorenz_data(int p) {
    CauchyData data = CauchyData::zero(c(), p);
    data.A0 = rnd(p);
    data.Ad = coclosed(p);
    if (p >= 1) data.An = coclosed(p - 1);
    return data;
  }

  CauchyData rnd_data(int p) {
    CauchyData data = CauchyData::zero(c(), p);
    data.A0 = rnd(p);
    data.Ad = rnd(p);
    if (p >= 1) {
      data.An = rnd(p - 1);
      data.Adelta = rnd(p - 1);
    }
    return data;
  }

  int mid() const { return K() / 2; }
};

double rel(double num, double den) { return std::abs(num) / floor_scale(den); }

// ---------------------------------------------------------------- identities

double chk_dd_zero(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d() - 2)) {
    const Cochain u = x.rnd(p);
    r = std::max(r, rel(x.s().norm(x.s().d(x.s().d(u))), x.s().norm(u)));
  }
  return r;
}

double chk_adjointness(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d() - 1)) {
    const Cochain u = x.rnd(p), v = x.rnd(p + 1);
    const Cochain du = x.s().d(u), dv = x.s().codifferential(v);
    const double scale = x.s().norm(du) * x.s().norm(v) + x.s().norm(u) * x.s().norm(dv);
    r = std::max(r, rel(x.s().inner(du, v) - x.s().inner(u, dv), scale));
  }
  return r;
}

double chk_delta_delta_zero(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(2, x.d())) {
    const Cochain u = x.rnd(p);
    const double scale = x.s().norm(u) * std::pow(x.s().lambda_max(p), 1.0);
    r = std::max(r, rel(x.s().norm(x.s().delta(x.s().delta(u))), floor_scale(scale)));
  }
  return r;
}

double chk_laplacian_commutes_d(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d() - 1)) {
    const Cochain u = x.rnd(p);
    const Cochain lhs = x.s().laplacian(x.s().d(u)), rhs = x.s().d(x.s().laplacian(u));
    r = std::max(r, rel(x.s().norm(lhs - rhs), std::max(x.s().norm(lhs), x.s().norm(rhs))));
  }
  return r;
}

double chk_laplacian_commutes_delta(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const Cochain u = x.rnd(p);
    const Cochain lhs = x.s().laplacian(x.s().delta(u)), rhs = x.s().delta(x.s().laplacian(u));
    r = std::max(r, rel(x.s().norm(lhs - rhs), std::max(x.s().norm(lhs), x.s().norm(rhs))));
  }
  return r;
}

double chk_harmonic_dimension(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const auto h = static_cast<int>(x.s().spectrum(p).harmonic_count());
    x.note("b" + std::to_string(p), h);
    r = std::max(r, std::abs(static_cast<double>(h - binomial(x.d(), p))));
  }
  return r;
}

double chk_hodge_reconstruction(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const Cochain u = x.rnd(p);
    const HodgeParts h = x.s().hodge_decompose(u);
    const double n = x.s().norm(u);
    r = std::max(r, rel(x.s().norm(u - h.exact - h.coexact - h.harmonic), n));
    r = std::max(r, rel(x.s().inner(h.exact, h.coexact), n * n));
    r = std::max(r, rel(x.s().inner(h.exact, h.harmonic), n * n));
    r = std::max(r, rel(x.s().inner(h.coexact, h.harmonic), n * n));
  }
  return r;
}

// ----------------------------------------------------------------- evolution

double chk_box_residual(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) r = std::max(r, box_residual(leapfrog_evolve(x.rnd_data(p), x.st)));
  return r;
}

double chk_trace_reproduction(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const CauchyData data = x.rnd_data(p);
    const int m = x.mid();
    const CauchyData back = traces(leapfrog_evolve(data, x.st, m), m);
    const double scale = x.s().norm(data.A0) + x.s().norm(data.Ad);
    r = std::max(r, rel(x.s().norm(back.A0 - data.A0), scale));
    r = std::max(r, rel(x.s().norm(back.Ad - data.Ad), scale));
    if (p >= 1) {
      r = std::max(r, rel(x.s().norm(back.An - data.An), scale));
      r = std::max(r, rel(x.s().norm(back.Adelta - data.Adelta), scale));
    }
  }
  return r;
}

double chk_energy_conservation(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const SpacetimeForm A = leapfrog_evolve(x.lorenz_data(p), x.st);
    const double e0 = energy(A, 0);
    for (int k = 1; k < x.K(); ++k) r = std::max(r, rel(energy(A, k) - e0, std::abs(e0)));
  }
  return r;
}

double chk_greens_identity(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const SpacetimeForm A = x.rnd_form(p, 0, x.K()), B = x.rnd_form(p, 0, x.K());
    r = std::max(r, greens_identity_check(A, B, x.K() / 4, 3 * x.K() / 4).residual);
  }
  return r;
}

double chk_representation_formula(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const int K = x.K();
    const Current J = x.rnd_current(p, 1, K - 1);
    const Current f = x.rnd_current(p, K / 4, 3 * K / 4);
    const SpacetimeForm A = leapfrog_evolve(x.rnd_data(p), x.st, x.mid(), &J);
    r = std::max(r, representation_check(A, J, f, x.mid()).residual);
  }
  return r;
}

// --------------------------------------------------------------------- green

double commute(Ctx& x, CommuteOp op, Direction dir) {
  double r = 0.0;
  const int lo = op == CommuteOp::delta ? 1 : 0;
  for (int p : x.degrees(lo, x.d()))
    for (int i = 0; i < 3; ++i)
      r = std::max(r, commutation_check(x.rnd_current(p, x.K() / 4, x.K() / 2), op, dir));
  return r;
}

double chk_commute_d_ret(Ctx& x) { return commute(x, CommuteOp::d, Direction::retarded); }
double chk_commute_d_adv(Ctx& x) { return commute(x, CommuteOp::d, Direction::advanced); }
double chk_commute_delta_ret(Ctx& x) { return commute(x, CommuteOp::delta, Direction::retarded); }
double chk_commute_delta_adv(Ctx& x) { return commute(x, CommuteOp::delta, Direction::advanced); }

double chk_causal_support(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const int k0 = x.K() / 3, k1 = 2 * x.K() / 3;
    const Current f = x.rnd_current(p, k0, k1);
    const SpacetimeForm ret = apply_retarded(f), adv = apply_advanced(f);
    const double scale = std::max(max_slice_norm(ret), max_slice_norm(adv));
    double leak = 0.0;
    for (int k = 0; k < k0; ++k) leak = std::max(leak, ret.av(k).norm());
    for (int j = 0; j < k0 - 1; ++j) leak = std::max(leak, ret.bv(j).norm());
    for (int k = k1 + 1; k <= x.K(); ++k) leak = std::max(leak, adv.av(k).norm());
    for (int j = k1 + 1; j < x.K(); ++j) leak = std::max(leak, adv.bv(j).norm());
    r = std::max(r, rel(leak, scale));
  }
  return r;
}

double chk_fundamental_solution(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const Current J = x.coclosed_current(p, x.K() / 4, x.K() / 2);
    r = std::max(r, fundamental_solution_check(J, Direction::retarded).residual);
    r = std::max(r, fundamental_solution_check(J, Direction::advanced).residual);
  }
  return r;
}

double chk_propagator_antisymmetry(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const Current f = x.rnd_current(p, x.K() / 4, x.K() / 2);
    const Current g = x.rnd_current(p, x.K() / 3, 3 * x.K() / 4);
    const double a = spacetime_pairing(f.form, causal_propagator(g));
    const double b = spacetime_pairing(g.form, causal_propagator(f));
    r = std::max(r, rel(a + b, std::max(std::abs(a), std::abs(b))));
  }
  return r;
}

// --------------------------------------------------------------------- gauge

/// Constant unit value on every cell with the given axis set: harmonic on a
/// flat torus.
Cochain axis_indicator(const ComplexPtr& c, int p, unsigned axes) {
  Cochain h(c, p);
  for (std::size_t i = 0; i < c->cell_count(p); ++i)
    if (c->cell(p, i).axes == axes) h.values[static_cast<Eigen::Index>(i)] = 1.0;
  return h;
}

/// cos(2 pi x_0 / N) on the cells spanned by axes 1..q, a co-closed
/// lowest-frequency q-form whose d is nonzero.
Cochain slow_wave(const ComplexPtr& c, int q) {
  unsigned axes = 0;
  for (int i = 1; i <= q; ++i) axes |= 1u << i;
  Cochain w(c, q);
  const double N = c->resolution();
  for (std::size_t i = 0; i < c->cell_count(q); ++i) {
    const auto cell = c->cell(q, i);
    if (cell.axes == axes)
      w.values[static_cast<Eigen::Index>(i)] = std::cos(2.0 * M_PI * cell.base[0] / N);
  }
  return w;
}

unsigned first_axes(int p) { return (1u << p) - 1u; }

double chk_lorenz_compliant(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const SpacetimeForm A = leapfrog_evolve(x.lorenz_data(p), x.st);
    r = std::max(r, rel(lorenz_residual(A), max_slice_norm(A)));
  }
  return r;
}

double chk_lorenz_violation(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const Slice& s = x.s();
    auto ratio = [&](const CauchyData& data, double injected, const char* label) {
      const double persisted = max_slice_norm(spacetime_delta(leapfrog_evolve(data, x.st)));
      const double q = 0.5 * injected / floor_scale(persisted);
      x.note(std::string(label) + "[p=" + std::to_string(p) + "]", persisted / injected);
      r = std::max(r, q);
    };
    CauchyData a = x.lorenz_data(p);
    a.Ad += s.d(slow_wave(x.c(), p - 1));
    ratio(a, s.norm(s.delta(a.Ad)), "momentum");
    if (p >= 2) {
      CauchyData b = x.lorenz_data(p);
      b.An += x.rnd(p - 1);
      ratio(b, s.norm(s.delta(b.An)), "normal");
    }
    CauchyData c = x.lorenz_data(p);
    c.Adelta = x.rnd(p - 1);
    ratio(c, s.norm(c.Adelta), "divergence");
  }
  return r;
}

double chk_inhomogeneous_lorenz(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const Current J = x.coclosed_current(p, x.K() / 4, x.K() / 2);
    const SpacetimeForm A = solve_maxwell_inhomogeneous(x.rnd(p), J, x.st, x.K() / 3);
    r = std::max(r, rel(lorenz_residual(A), max_slice_norm(A)));
    r = std::max(r, maxwell_residual(A, &J));
  }
  return r;
}

double chk_future_support_gauge(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const Current J = x.coclosed_current(p, x.K() / 4, x.K() / 2);
    const SpacetimeForm A = solve_maxwell_inhomogeneous(x.s().d(x.rnd(p - 1)), J, x.st, 0);
    const GaugeEquivalence g = is_gauge_equivalent(A, apply_retarded(J), x.K(), &J);
    r = std::max({r, g.momentum_diff, g.class_diff, g.equivalent ? 0.0 : 1.0});
  }
  return r;
}

double chk_f_invariance(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const SpacetimeForm A = leapfrog_evolve(x.lorenz_data(p), x.st);
    const SpacetimeForm F = spacetime_d(A);
    for (int i = 0; i < 10; ++i) {
      const SpacetimeForm B = gauge_transform(A, x.rnd_form(p - 1, 0, x.K()));
      r = std::max(r, rel(max_slice_norm(spacetime_d(B) - F), max_slice_norm(F)));
    }
  }
  return r;
}

double chk_gauge_decisions(Ctx& x) {
  int wrong = 0;
  for (int p : x.degrees(1, x.d())) {
    const int K = x.K();
    const CauchyData D = x.lorenz_data(p);
    const SpacetimeForm A = leapfrog_evolve(D, x.st);
    auto decide = [&](const SpacetimeForm& a, const SpacetimeForm& b, bool expect,
                      const Current* J = nullptr) {
      if (is_gauge_equivalent(a, b, K / 2, J).equivalent != expect) ++wrong;
    };
    auto free_solution = [&](const Cochain& a0, const Cochain& ad) {
      CauchyData e = CauchyData::zero(x.c(), p);
      e.A0 = a0;
      e.Ad = ad;
      return leapfrog_evolve(e, x.st);
    };
    decide(A, gauge_transform(A, x.rnd_form(p - 1, 0, K)), true);
    decide(A, leapfrog_evolve(make_coulomb(D, x.st).first, x.st), true);
    const Current J = x.coclosed_current(p, K / 4, K / 2);
    decide(solve_maxwell_inhomogeneous(x.s().d(x.rnd(p - 1)), J, x.st, 0), apply_retarded(J), true,
           &J);

    const Cochain zero(x.c(), p);
    decide(A, A + free_solution(axis_indicator(x.c(), p, first_axes(p)), zero), false);
    decide(A, A + free_solution(zero, x.coclosed(p)), false);
    decide(A, A + free_solution(zero, 1e-3 * x.coclosed(p)), false);
  }
  x.note("wrong", wrong);
  return wrong;
}

double chk_coulomb_reduction(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const CauchyData D = x.lorenz_data(p);
    const auto [C, Lambda] = make_coulomb(D, x.st);
    const SpacetimeForm A = leapfrog_evolve(D, x.st);
    r = std::max(r, rel(max_slice_norm(leapfrog_evolve(C, x.st) - gauge_transform(A, Lambda)),
                        max_slice_norm(A)));
  }
  return r;
}

// --------------------------------------------------------------------- phase

double chk_sigma_bilinear(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const Slice& s = x.s();
    const Cochain a0 = x.rnd(p), ad = x.rnd(p), b0 = x.rnd(p), bd = x.rnd(p), c0 = x.rnd(p),
                  cd = x.rnd(p);
    const double scale = (s.norm(a0) + s.norm(ad) + s.norm(c0) + s.norm(cd)) *
                         (s.norm(b0) + s.norm(bd)) * 5.0;
    const double uv = sigma_data(s, a0, ad, b0, bd);
    r = std::max(r, rel(uv + sigma_data(s, b0, bd, a0, ad), scale));
    const double mix = sigma_data(s, 2.0 * a0 - 3.0 * c0, 2.0 * ad - 3.0 * cd, b0, bd);
    r = std::max(r, rel(mix - 2.0 * uv + 3.0 * sigma_data(s, c0, cd, b0, bd), scale));
  }
  return r;
}

double chk_surface_independence(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const SpacetimeForm A = leapfrog_evolve(x.lorenz_data(p), x.st);
    const SpacetimeForm B = leapfrog_evolve(x.lorenz_data(p), x.st);
    for (int k = 1; k <= x.K(); ++k) r = std::max(r, surface_independence_check(A, B, 0, k));
  }
  return r;
}

double chk_degeneracy_witness(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const Cochain chi = x.rnd(p - 1), Bd = x.coclosed(p);
    const double v = degenerate_form_demo(x.s(), chi, x.rnd(p), Bd);
    r = std::max(r, rel(v, x.s().norm(x.s().d(chi)) * x.s().norm(Bd)));
  }
  return r;
}

double chk_pairing_vs_sigma(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const SpacetimeForm A = leapfrog_evolve(x.lorenz_data(p), x.st);
    const Current f = x.coclosed_current(p, x.K() / 4, x.K() / 2);
    r = std::max(r, pairing_vs_sigma(A, f, 3 * x.K() / 4).residual);
  }
  return r;
}

double chk_poisson_bracket(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const Current f = x.coclosed_current(p, x.K() / 4, x.K() / 2);
    const Current g = x.coclosed_current(p, x.K() / 3, 2 * x.K() / 3);
    r = std::max(r, poisson_bracket(f, g, x.mid()).residual);
  }
  return r;
}

/// delta of a unit b-part on one edge of time: a co-closed current living
/// on slices k0, k0+1 near a single spatial cell.
Current point_current(const SpacetimePtr& st, int p, std::size_t cell, int k0) {
  SpacetimeForm theta = SpacetimeForm::zero(st, p + 1);
  theta.bv(k0)[static_cast<Eigen::Index>(cell)] = 1.0;
  return Current::make(spacetime_delta(theta), k0, k0 + 1);
}

double chk_spacelike_bracket(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(0, x.d())) {
    const auto& c = *x.c();
    const unsigned axes = c.axis_sets(p).front();
    const int h = c.resolution() / 2;
    const std::size_t c1 = c.index_of(p, axes, {0, 0, 0});
    const std::size_t c2 = c.index_of(p, axes, {h, x.d() > 1 ? h : 0, x.d() > 2 ? h : 0});
    const BracketResult b =
        poisson_bracket(point_current(x.st, p, c1, x.mid()), point_current(x.st, p, c2, x.mid()), x.mid());
    r = std::max({r, std::abs(b.bracket), std::abs(b.pairing)});
  }
  return r;
}

// ------------------------------------------------------------------- quantum

struct QuantumSetup {
  QuantStructure qs;
  FockSpace fock;
};

ModeBasis first_modes(const ModeBasis& all, int count) {
  const auto m = std::min<Eigen::Index>(count, static_cast<Eigen::Index>(all.size()));
  require(m >= 1, ErrorCode::precondition, "no non-harmonic coexact modes to quantize");
  ModeBasis b = all;
  b.eigenvalues = all.eigenvalues.head(m);
  b.vectors = all.vectors.leftCols(m);
  b.harmonic.assign(all.harmonic.begin(), all.harmonic.begin() + m);
  b.omega = all.omega.head(m);
  return b;
}

QuantumSetup quantum_setup(Ctx& x, int n_max = -1) {
  const int q = x.cfg.active_quantum_degree();
  QuantStructure qs = QuantStructure::build(x.slice, first_modes(x.s().coexact_modes(q),
                                                                 x.cfg.quantum_modes));
  const int m = static_cast<int>(qs.size());
  return {std::move(qs), FockSpace(m, n_max < 0 ? x.cfg.n_max : n_max)};
}

ModeVector rnd_mode(Ctx& x, const QuantStructure& qs) {
  ModeVector u = qs.zero();
  for (Eigen::Index m = 0; m < u.q.size(); ++m) {
    u.q[m] = x.gauss(x.rng);
    u.p[m] = x.gauss(x.rng);
  }
  return u;
}

double mode_norm(const ModeVector& u) { return std::sqrt(u.q.squaredNorm() + u.p.squaredNorm()); }

double freq_spread(const QuantStructure& qs) {
  return std::max(qs.omega().maxCoeff(), 1.0 / qs.omega().minCoeff());
}

/// Time dipole of a mode-space combination: co-closed, and E of it stays in
/// the mode span.
Current mode_current(const SpacetimePtr& st, const QuantStructure& qs, const Eigen::VectorXd& c,
                     int k0) {
  const Eigen::VectorXd v = qs.modes().vectors * c / st->dt();
  SpacetimeForm f = SpacetimeForm::zero(st, qs.modes().degree);
  f.av(k0) = v;
  f.av(k0 + 1) = -v;
  return Current::make(f, k0, k0 + 1);
}

double chk_j_squared(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  double r = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ModeVector u = rnd_mode(x, q.qs);
    r = std::max(r, mode_norm(q.qs.J(q.qs.J(u)) + u) / mode_norm(u));
  }
  return r;
}

double chk_mu_j_sigma(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  double r = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ModeVector u = rnd_mode(x, q.qs), v = rnd_mode(x, q.qs);
    const double scale = mode_norm(u) * mode_norm(v) * freq_spread(q.qs);
    r = std::max(r, rel(2.0 * q.qs.mu(u, q.qs.J(v)) - q.qs.sigma(u, v), scale));
  }
  return r;
}

double chk_k_identity(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  double r = 0.0;
  for (int i = 0; i < 100; ++i) {
    const ModeVector u = rnd_mode(x, q.qs), v = rnd_mode(x, q.qs);
    const double scale = mode_norm(u) * mode_norm(v) * freq_spread(q.qs);
    r = std::max(r, k_identity_residual(q.qs, u, v) / scale);
  }
  return r;
}

double chk_mu_positivity(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const ModeVector u = rnd_mode(x, q.qs);
    const double mu = q.qs.mu(u, u);
    const double s = -q.qs.sigma(u, q.qs.J(u));
    if (!(mu > 0.0) || std::abs(s - 2.0 * mu) > 1e-12 * mu * freq_spread(q.qs)) ++bad;
  }
  x.note("violations", bad);
  return bad;
}

double chk_mu_saturation(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const SaturationResult s = mu_saturation_check(q.qs, rnd_mode(x, q.qs), 10000, x.cfg.seed);
  x.note("scan_over_sup", s.scan_max / s.sup);
  return s.scan_ok ? s.residual : std::max(s.residual, 1.0);
}

double chk_ladder_ccr(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto M = static_cast<Eigen::Index>(q.qs.size());
  Eigen::VectorXcd f(M), g(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    f[m] = cplx(x.gauss(x.rng), x.gauss(x.rng));
    g[m] = cplx(x.gauss(x.rng), x.gauss(x.rng));
  }
  const Eigen::MatrixXcd C =
      commutator(smeared_annihilation(q.fock, f), smeared_creation(q.fock, g)).mat -
      f.dot(g) * identity(q.fock).mat;
  return restricted_norm(C, q.fock.untruncated()) / (f.norm() * g.norm());
}

double chk_field_hermiticity(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto M = static_cast<Eigen::Index>(q.qs.size());
  Eigen::VectorXd c(M);
  for (Eigen::Index m = 0; m < M; ++m) c[m] = x.gauss(x.rng);
  const FieldOperator A = field_operator(mode_current(x.st, q.qs, c, x.K() / 4), q.qs, q.fock);
  return op_norm(A.op.mat - A.op.mat.adjoint()) / std::max(op_norm(A.op.mat), 1e-300);
}

std::pair<Current, Current> ccr_pair(Ctx& x, const QuantStructure& qs) {
  const auto M = static_cast<Eigen::Index>(qs.size());
  Eigen::VectorXd a(M), b(M);
  for (Eigen::Index m = 0; m < M; ++m) {
    a[m] = x.gauss(x.rng);
    b[m] = x.gauss(x.rng);
  }
  return {mode_current(x.st, qs, a, x.K() / 4), mode_current(x.st, qs, b, 3 * x.K() / 5)};
}

double chk_ccr(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [J1, J2] = ccr_pair(x, q.qs);
  const CcrResult c = ccr_check(J1, J2, q.qs, q.fock);
  x.note("pairing", c.pairing);
  x.note("full_residual", c.full_residual);
  return c.residual / std::max(std::abs(c.pairing), 1.0);
}

double chk_ccr_cutoff_monotone(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [J1, J2] = ccr_pair(x, q.qs);
  double prev = 0.0, r = 0.0;
  for (int n : {2, 4, 6}) {
    const double res = ccr_check(J1, J2, q.qs, FockSpace(q.fock.modes(), n)).residual;
    x.note("n" + std::to_string(n), res);
    if (n > 2) r = std::max(r, res - prev);
    prev = res;
  }
  return std::max(r, 0.0);
}

double chk_ccr_modal_match(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [J1, J2] = ccr_pair(x, q.qs);
  const CcrResult c = ccr_check(J1, J2, q.qs, q.fock);
  return rel(c.pairing - c.modal, std::abs(c.pairing));
}

/// Circle of four cells, all three oscillators, dipoles two cells apart.
double chk_spacelike_commutator(Ctx& x) {
  const SlicePtr s = Slice::make(CubicalComplex::build(1, 4, {2.0 * M_PI}));
  const SpacetimePtr st = Spacetime::make(s, 0.1, 40);
  const QuantStructure qs = QuantStructure::build(s, s->coexact_modes(0));
  const FockSpace fock(static_cast<int>(qs.size()), x.cfg.n_max);
  auto dipole = [&](std::size_t cell) { return point_current(st, 0, cell, 20); };
  const CcrResult c = ccr_check(dipole(0), dipole(2), qs, fock);
  x.note("pairing", c.pairing);
  return std::max(c.residual, std::abs(c.pairing));
}

double chk_weak_maxwell(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const Current theta = x.rnd_current(q.qs.modes().degree, 2, x.K() / 2);
  x.note("theta_co_closed", theta.co_closed ? 1 : 0);
  return weak_maxwell_check(theta, q.qs, q.fock);
}

/// u along mode 0's q axis and v along its p axis, both with |K.| = 0.1.
std::pair<ModeVector, ModeVector> weyl_pair(const QuantStructure& qs) {
  ModeVector u = qs.zero(), v = qs.zero();
  const double w = qs.omega()[0];
  u.q[0] = 0.1 * std::sqrt(2.0 / w);
  v.p[0] = 0.1 * std::sqrt(2.0 * w);
  return {u, v};
}

double chk_weyl_identity(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  return op_norm(weyl(q.qs.zero(), q.qs, q.fock).mat - identity(q.fock).mat);
}

double chk_weyl_unitarity(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [u, v] = weyl_pair(q.qs);
  const Eigen::MatrixXcd W = weyl(u + v, q.qs, q.fock).mat;
  return op_norm(W.adjoint() * W - identity(q.fock).mat);
}

double chk_weyl_inverse(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [u, v] = weyl_pair(q.qs);
  const ModeVector w = u + v;
  const Eigen::MatrixXcd W = weyl(w, q.qs, q.fock).mat;
  const Eigen::MatrixXcd Wm = weyl(w * -1.0, q.qs, q.fock).mat;
  return std::max(op_norm(Wm * W - identity(q.fock).mat), op_norm(Wm - W.adjoint()));
}

double chk_weyl_product_printed(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [u, v] = weyl_pair(q.qs);
  const WeylResult w = weyl_relation_check(u, v, q.qs, q.fock);
  x.note("sigma", w.sigma);
  x.note("opposite_phase_residual", w.consistent_phase);
  return w.printed_phase;
}

double chk_weyl_product_bch(Ctx& x) {
  const QuantumSetup q = quantum_setup(x);
  const auto [u, v] = weyl_pair(q.qs);
  return weyl_relation_check(u, v, q.qs, q.fock).consistent_phase;
}

// ------------------------------------------------------------------ appendix

double chk_field_cauchy(Ctx& x) {
  double r = 0.0;
  for (int p : x.degrees(1, x.d())) {
    const FieldCauchyResult f = solve_F_cauchy(x.s().d(x.rnd(p - 1)), x.coclosed(p - 1), x.st);
    r = std::max({r, f.dF, f.deltaF, f.rho0_match, f.rhon_match, f.rhod_vanish, f.rhodelta_vanish});
  }
  return r;
}

double chk_field_cauchy_obstruction(Ctx& x) {
  int wrong = 0;
  for (int p : x.degrees(1, x.d())) {
    try {
      solve_F_cauchy(axis_indicator(x.c(), p, first_axes(p)), Cochain(x.c(), p - 1), x.st);
      ++wrong;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::topological_obstruction) ++wrong;
    }
  }
  return wrong;
}

// ------------------------------------------------------------------- catalog

using CheckFn = double (*)(Ctx&);

struct CheckDef {
  CheckInfo info;
  CheckFn fn;
};

const std::vector<CheckDef>& definitions() {
  static const std::vector<CheckDef> defs = {
      {{"dd_zero", "identities", "coboundary squares to zero", 1e-12}, chk_dd_zero},
      {{"adjointness", "identities", "codifferential is the metric adjoint of d", 1e-12},
       chk_adjointness},
      {{"delta_delta_zero", "identities", "codifferential squares to zero", 1e-12},
       chk_delta_delta_zero},
      {{"laplacian_commutes_d", "identities", "Laplacian commutes with d", 1e-12},
       chk_laplacian_commutes_d},
      {{"laplacian_commutes_delta", "identities", "Laplacian commutes with the codifferential",
        1e-12},
       chk_laplacian_commutes_delta},
      {{"harmonic_dimension", "identities", "harmonic forms count the torus Betti numbers", 0.5},
       chk_harmonic_dimension},
      {{"hodge_reconstruction", "identities", "Hodge decomposition is orthogonal and complete",
        1e-10},
       chk_hodge_reconstruction},

      {{"box_residual", "evolution", "leapfrog solves the wave equation", 1e-10}, chk_box_residual},
      {{"trace_reproduction", "evolution", "evolved field reproduces its four Cauchy traces",
        1e-10},
       chk_trace_reproduction},
      {{"energy_conservation", "evolution", "staggered energy is conserved", 1e-10},
       chk_energy_conservation},
      {{"greens_identity", "evolution", "slab Green's identity with boundary bilinear", 1e-10},
       chk_greens_identity},
      {{"representation_formula", "evolution", "solution represented by sources and slice data",
        1e-10},
       chk_representation_formula},

      {{"commute_d_retarded", "green", "retarded Green's operator commutes with d", 1e-10},
       chk_commute_d_ret},
      {{"commute_d_advanced", "green", "advanced Green's operator commutes with d", 1e-10},
       chk_commute_d_adv},
      {{"commute_delta_retarded", "green", "retarded Green's operator commutes with delta", 1e-10},
       chk_commute_delta_ret},
      {{"commute_delta_advanced", "green", "advanced Green's operator commutes with delta", 1e-10},
       chk_commute_delta_adv},
      {{"causal_support", "green", "retarded and advanced solutions vanish outside their cones",
        1e-14},
       chk_causal_support},
      {{"fundamental_solution", "green", "Green's solutions of co-closed sources solve Maxwell",
        1e-10},
       chk_fundamental_solution},
      {{"propagator_antisymmetry", "green", "causal propagator is antisymmetric", 1e-10},
       chk_propagator_antisymmetry},

      {{"lorenz_compliant", "gauge", "Lorenz data conditions preserve the Lorenz gauge", 1e-6},
       chk_lorenz_compliant},
      {{"lorenz_violation", "gauge",
        "each violated Lorenz data condition persists (ratio 1/2 injected over persisted)", 1.0},
       chk_lorenz_violation},
      {{"inhomogeneous_lorenz", "gauge", "sourced Lorenz solution from the momentum equation",
        1e-6},
       chk_inhomogeneous_lorenz},
      {{"future_support_gauge", "gauge", "future-supported source solution is the retarded one up to gauge",
        1e-6},
       chk_future_support_gauge},
      {{"f_invariance", "gauge", "field strength is gauge invariant", 1e-10}, chk_f_invariance},
      {{"gauge_decisions", "gauge", "gauge classes are decided by class and momentum data", 0.5},
       chk_gauge_decisions},
      {{"coulomb_reduction", "gauge", "Lorenz solution reduces to Coulomb gauge", 1e-10},
       chk_coulomb_reduction},

      {{"sigma_bilinear", "phase", "symplectic form is bilinear and antisymmetric", 1e-12},
       chk_sigma_bilinear},
      {{"surface_independence", "phase", "symplectic form is independent of the slice", 1e-6},
       chk_surface_independence},
      {{"degeneracy_witness", "phase", "pure-gauge data is symplectically null", 1e-10},
       chk_degeneracy_witness},
      {{"pairing_vs_sigma", "phase", "spacetime pairing equals the symplectic form with E f",
        5e-3},
       chk_pairing_vs_sigma},
      {{"poisson_bracket", "phase", "bracket of smeared fields is the propagator pairing", 5e-3},
       chk_poisson_bracket},
      {{"spacelike_bracket", "phase", "bracket vanishes for spacelike separated sources", 1e-8},
       chk_spacelike_bracket},

      {{"j_squared", "quantum", "complex structure squares to minus one", 1e-12}, chk_j_squared},
      {{"mu_j_sigma", "quantum", "twice mu of J equals sigma", 1e-12}, chk_mu_j_sigma},
      {{"k_identity", "quantum", "one-particle inner product is mu minus i sigma over two", 1e-12},
       chk_k_identity},
      {{"mu_positivity", "quantum", "mu is positive and equals minus sigma(u, Ju) over two", 0.5},
       chk_mu_positivity},
      {{"mu_saturation", "quantum", "mu saturates the sigma bound", 1e-8}, chk_mu_saturation},
      {{"ladder_ccr", "quantum", "smeared ladder operators satisfy the CCR below the cutoff",
        1e-12},
       chk_ladder_ccr},
      {{"field_hermiticity", "quantum", "smeared field operator is Hermitian", 1e-12},
       chk_field_hermiticity},
      {{"ccr", "quantum", "field commutator is i times the propagator pairing", 5e-3}, chk_ccr},
      {{"ccr_cutoff_monotone", "quantum", "CCR residual does not grow with the cutoff", 1e-12},
       chk_ccr_cutoff_monotone},
      {{"ccr_modal_match", "quantum", "classical pairing matches the modal symplectic form",
        5e-3},
       chk_ccr_modal_match},
      {{"spacelike_commutator", "quantum", "fields at spacelike separation commute", 1e-6},
       chk_spacelike_commutator},
      {{"weak_maxwell", "quantum", "field operator annihilates delta d theta", 1e-6},
       chk_weak_maxwell},
      {{"weyl_identity", "quantum", "Weyl operator at zero is the identity", 1e-14},
       chk_weyl_identity},
      {{"weyl_unitarity", "quantum", "Weyl operators are unitary", 1e-8}, chk_weyl_unitarity},
      {{"weyl_inverse", "quantum", "W(-u) is the inverse and adjoint of W(u)", 1e-8},
       chk_weyl_inverse},
      {{"weyl_product_printed_phase", "quantum",
        "W(u)W(v) = exp(-i sigma/2) W(u+v) as stated", 1e-6, true},
       chk_weyl_product_printed},
      {{"weyl_product_bch_phase", "quantum",
        "W(u)W(v) = exp(+i sigma/2) W(u+v) from Baker-Campbell-Hausdorff", 1e-6},
       chk_weyl_product_bch},

      {{"field_cauchy", "appendix", "field strength from closed and co-closed slice data", 1e-6},
       chk_field_cauchy},
      {{"field_cauchy_obstruction", "appendix", "non-exact field data is rejected", 0.5},
       chk_field_cauchy_obstruction},
  };
  return defs;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

SpacetimePtr make_spacetime(const ExperimentConfig& cfg, const SlicePtr& slice) {
  double dt = cfg.dt;
  if (dt <= 0.0) {
    const SpacetimePtr probe = Spacetime::make(slice, 1e-9, 2);
    dt = cfg.cfl / std::sqrt(probe->lambda_bound());
  }
  return Spacetime::make(slice, dt, cfg.steps);
}

}  // namespace

std::string digest_hex(const std::string& text) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(text)));
  return buf;
}

const std::vector<CheckInfo>& check_catalog() {
  static const std::vector<CheckInfo> infos = [] {
    std::vector<CheckInfo> v;
    for (const auto& d : definitions()) v.push_back(d.info);
    return v;
  }();
  return infos;
}

bool Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  for (const auto& [name, tol] : cfg.tolerances) {
    const auto& defs = definitions();
    if (std::none_of(defs.begin(), defs.end(), [&](const CheckDef& d) { return d.info.name == name; }))
      fail(ErrorCode::config, "tolerance given for unknown check '" + name + "'");
  }
  Report rep;
  rep.config = cfg;
  const SlicePtr slice = Slice::make(CubicalComplex::build(cfg.d, cfg.N, cfg.L));
  const SpacetimePtr st = make_spacetime(cfg, slice);
  rep.dt = st->dt();
  rep.cfl_number = st->cfl_number();

  ExperimentConfig canon = cfg;
  canon.suite = "all";
  canon.tolerances.clear();
  canon.dt = st->dt();
  canon.degrees = cfg.active_degrees();
  const std::string inputs = canon.to_text();

  for (const auto& def : definitions()) {
    if (cfg.suite != "all" && cfg.suite != def.info.suite) continue;
    CheckRecord rec;
    rec.info = def.info;
    rec.tolerance = def.info.tolerance;
    if (auto it = cfg.tolerances.find(def.info.name); it != cfg.tolerances.end())
      rec.tolerance = it->second;
    rec.digest = digest_hex(def.info.name + "\n" + inputs);
    Ctx ctx{cfg, slice, st, std::mt19937_64(cfg.seed ^ fnv1a(def.info.name)), {}, {}};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      rec.residual = def.fn(ctx);
      rec.detail = ctx.detail.str();
    } catch (const Error& e) {
      rec.residual = std::numeric_limits<double>::infinity();
      rec.detail = std::string("error ") + to_string(e.code()) + ": " + e.what();
    } catch (const std::exception& e) {
      rec.residual = std::numeric_limits<double>::infinity();
      rec.detail = std::string("error: ") + e.what();
    }
    rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rec.pass = rec.residual <= rec.tolerance;
    rep.checks.push_back(std::move(rec));
  }

  if (cfg.suite == "all" || cfg.suite == "quantum") {
    rep.quantum_degree = cfg.active_quantum_degree();
    try {
      rep.harmonic_excluded =
          static_cast<int>(slice->spectrum(rep.quantum_degree).harmonic_count());
      const ModeBasis all = slice->coexact_modes(rep.quantum_degree);
      const auto M = std::min<std::size_t>(all.size(), static_cast<std::size_t>(cfg.quantum_modes));
      for (std::size_t j = 0; j < M; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        rep.quantum_modes.push_back({static_cast<int>(j), all.eigenvalues[jj], all.omega[jj]});
      }
    } catch (const Error&) {
      // Spectrum too large; the quantum checks already carry the error.
    }
  }
  return rep;
}

}  // namespace pform
