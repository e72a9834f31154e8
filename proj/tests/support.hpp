#pragma once

#include <cmath>
#include <random>

#include "pform/quantum.hpp"

namespace testing {

using namespace pform;

inline constexpr double two_pi = 6.283185307179586;

struct Rng {
  std::mt19937_64 eng;
  std::normal_distribution<double> g;
  explicit Rng(std::uint64_t seed) : eng(seed) {}

  double operator()() { return g(eng); }

  Cochain cochain(const ComplexPtr& c, int p) {
    Cochain x(c, p);
    for (Eigen::Index i = 0; i < x.values.size(); ++i) x.values[i] = g(eng);
    return x;
  }

  SpacetimeForm form(const SpacetimePtr& st, int p, int k0, int k1) {
    SpacetimeForm f = SpacetimeForm::zero(st, p);
    for (int k = k0; k <= k1; ++k)
      for (Eigen::Index i = 0; i < f.av(k).size(); ++i) f.av(k)[i] = g(eng);
    for (int j = k0; j < k1; ++j)
      for (Eigen::Index i = 0; i < f.bv(j).size(); ++i) f.bv(j)[i] = g(eng);
    return f;
  }

  Current current(const SpacetimePtr& st, int p, int k0, int k1) {
    return Current::make(form(st, p, k0, k1), k0, k1);
  }

  Current coclosed_current(const SpacetimePtr& st, int p, int k0, int k1) {
    return Current::make(spacetime_delta(form(st, p + 1, k0, k1)), k0, k1);
  }
};

inline SlicePtr torus(int d, int N, double L = two_pi) {
  return Slice::make(CubicalComplex::build(d, N, std::vector<double>(static_cast<std::size_t>(d), L)));
}

inline double rel(double a, double b) { return std::abs(a) / std::max(std::abs(b), 1e-300); }

}  // namespace testing

namespace testing {

inline ModeBasis first_modes(const ModeBasis& all, int count) {
  ModeBasis b = all;
  b.eigenvalues = all.eigenvalues.head(count);
  b.vectors = all.vectors.leftCols(count);
  b.harmonic.assign(all.harmonic.begin(), all.harmonic.begin() + count);
  b.omega = all.omega.head(count);
  return b;
}

/// Dipole in time of a mode-span slice form; co-closed by construction.
inline Current mode_current(const SpacetimePtr& st, const QuantStructure& qs,
                            const Eigen::VectorXd& c, int k0) {
  const Eigen::VectorXd v = qs.modes().vectors * c / st->dt();
  SpacetimeForm f = SpacetimeForm::zero(st, qs.modes().degree);
  f.av(k0) = v;
  f.av(k0 + 1) = -v;
  return Current::make(f, k0, k0 + 1);
}

inline double mode_norm(const ModeVector& u) {
  return std::sqrt(u.q.squaredNorm() + u.p.squaredNorm());
}

}  // namespace testing
