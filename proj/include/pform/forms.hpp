#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <vector>

#include "pform/lattice.hpp"

namespace pform {

/// Per-axis positive scale factors sampled at each vertex. A cell takes the
/// factors of its base vertex. Empty means flat (all ones).
struct SpatialMetric {
  std::vector<Eigen::VectorXd> scale;  // [axis][vertex]

  static SpatialMetric flat() { return {}; }
  static SpatialMetric from_function(const CubicalComplex& c,
                                     const std::function<double(int, std::array<int, 3>)>& h);
  bool is_flat() const { return scale.empty(); }
};

/// Eigen-decomposition of one operator on p-cochains, orthonormal under the
/// Hodge pairing. Eigenvalues ascend.
struct ModeBasis {
  ComplexPtr complex;
  int degree = 0;
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd vectors;  // column m is e_m
  std::vector<bool> harmonic;
  Eigen::VectorXd omega;
  double lambda_tol = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  std::size_t harmonic_count() const;
  Cochain mode(std::size_t m) const;
};

struct HodgeParts {
  Cochain exact;
  Cochain coexact;
  Cochain harmonic;
};

/// A spatial slice: complex, metric, diagonal Hodge weights and the derived
/// operators. Spectra are computed on first use and cached; everything else
/// is immutable.
class Slice {
 public:
  static std::shared_ptr<const Slice> make(ComplexPtr complex,
                                           SpatialMetric metric = SpatialMetric::flat());

  const ComplexPtr& complex() const { return complex_; }
  int dim() const { return complex_->dim(); }
  const SpatialMetric& metric() const { return metric_; }

  /// Dual volume over primal volume for each p-cell.
  const Eigen::VectorXd& weights(int p) const { return weights_[p]; }

  double inner(const Cochain& u, const Cochain& v) const;
  double norm(const Cochain& u) const;

  /// Exterior derivative; top degree maps to the empty (d+1)-cochain.
  Cochain d(const Cochain& u) const;
  /// Pairing adjoint of d. Rejects p = 0.
  Cochain codifferential(const Cochain& u) const;
  /// Same as codifferential but sends 0-cochains to the empty (-1)-cochain.
  Cochain delta(const Cochain& u) const;
  Cochain laplacian(const Cochain& u) const;

  const SparseMatrix& delta_matrix(int p) const { return delta_[p]; }  // C^p -> C^{p-1}, p >= 1
  const SparseMatrix& laplacian_matrix(int p) const { return laplace_[p]; }

  /// Full Hodge-Laplacian spectrum at degree p (cached).
  const ModeBasis& spectrum(int p) const;
  /// Spectrum of delta d at degree p; its nonzero part spans the coexact cochains.
  const ModeBasis& coexact_spectrum(int p) const;

  double lambda_max(int p) const;

  /// First `count` modes of the Hodge Laplacian (all when count < 0).
  ModeBasis eigenmodes(int p, int count = -1) const;
  /// Nonzero modes of delta d, ascending.
  ModeBasis coexact_modes(int p) const;

  HodgeParts hodge_decompose(const Cochain& u) const;
  Cochain harmonic_part(const Cochain& u) const;
  /// Moore-Penrose inverse of the Laplacian (zero on harmonics).
  Cochain laplacian_pinv(const Cochain& u) const;

  /// omega with delta omega = psi, psi co-exact; omega = d L^+ psi.
  Cochain solve_coderivative(const Cochain& psi) const;
  /// A0 with d A0 = F0, F0 exact; A0 = delta L^+ F0.
  Cochain solve_exterior(const Cochain& F0) const;

  static constexpr double harmonic_rel_tol = 1e-10;
  static constexpr std::size_t dense_limit = 6000;

 private:
  Slice() = default;
  ModeBasis decompose(int p, bool coexact_only) const;
  void check_owned(const Cochain& u, const char* what) const;

  ComplexPtr complex_;
  SpatialMetric metric_;
  std::vector<Eigen::VectorXd> weights_;
  std::vector<SparseMatrix> delta_;
  std::vector<SparseMatrix> laplace_;

  mutable std::mutex cache_mutex_;
  mutable std::vector<std::unique_ptr<ModeBasis>> spectra_;
  mutable std::vector<std::unique_ptr<ModeBasis>> coexact_;
};

using SlicePtr = std::shared_ptr<const Slice>;

}  // namespace pform
