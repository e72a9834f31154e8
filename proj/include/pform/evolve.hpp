#pragma once

#include <iosfwd>
#include <memory>
#include <vector>

#include "pform/forms.hpp"

namespace pform {

/// Product spacetime R x Sigma with metric dt^2 - h, cut to the time grid
/// t_k = k dt, k = 0..K. n = d + 1.
class Spacetime {
 public:
  static std::shared_ptr<const Spacetime> make(SlicePtr slice, double dt, int steps);

  const SlicePtr& slice() const { return slice_; }
  const ComplexPtr& complex() const { return slice_->complex(); }
  double dt() const { return dt_; }
  int steps() const { return steps_; }
  int n() const { return slice_->dim() + 1; }
  /// Upper bound on the spatial Laplacian spectrum over all degrees.
  double lambda_bound() const { return lambda_bound_; }
  double cfl_number() const;

  static constexpr double cfl_limit = 1.8;

 private:
  Spacetime() = default;
  SlicePtr slice_;
  double dt_ = 0.0;
  int steps_ = 0;
  double lambda_bound_ = 0.0;
};

using SpacetimePtr = std::shared_ptr<const Spacetime>;

/// A = a + dt ^ b on the product lattice. a lives on time vertices
/// k = -1..K+1 and b on time edges j = -1..K (edge j joins vertices j, j+1).
/// The outermost vertex and edge on each side are ghost layers written by the
/// integrator so traces exist on every slice 0..K.
struct SpacetimeForm {
  SpacetimePtr st;
  int degree = 0;
  std::vector<Eigen::VectorXd> a;  // a[k + 1]
  std::vector<Eigen::VectorXd> b;  // b[j + 1]

  static SpacetimeForm zero(const SpacetimePtr& st, int p);

  int steps() const { return st->steps(); }
  Eigen::VectorXd& av(int k) { return a[static_cast<std::size_t>(k + 1)]; }
  const Eigen::VectorXd& av(int k) const { return a[static_cast<std::size_t>(k + 1)]; }
  Eigen::VectorXd& bv(int j) { return b[static_cast<std::size_t>(j + 1)]; }
  const Eigen::VectorXd& bv(int j) const { return b[static_cast<std::size_t>(j + 1)]; }
  Cochain a_at(int k) const;
  Cochain b_at(int j) const;

  SpacetimeForm& operator+=(const SpacetimeForm& o);
  SpacetimeForm& operator-=(const SpacetimeForm& o);
  SpacetimeForm& operator*=(double s);
};

SpacetimeForm operator+(SpacetimeForm x, const SpacetimeForm& y);
SpacetimeForm operator-(SpacetimeForm x, const SpacetimeForm& y);
SpacetimeForm operator*(double s, SpacetimeForm x);

/// Source or test form with declared time support: a nonzero only on
/// vertices k0..k1, b only on edges k0..k1-1.
struct Current {
  SpacetimeForm form;
  int k0 = 0;
  int k1 = 0;
  bool co_closed = false;

  /// Validates the window (1 <= k0 <= k1 <= K-1) and support, sets co_closed.
  static Current make(SpacetimeForm f, int k0, int k1);
  static Current zero(const SpacetimePtr& st, int p);
  int degree() const { return form.degree; }
};

/// (A0, Ad, An, Adelta) on one slice; An and Adelta have degree p-1.
struct CauchyData {
  Cochain A0;
  Cochain Ad;
  Cochain An;
  Cochain Adelta;

  static CauchyData zero(const ComplexPtr& c, int p);
  int degree() const { return A0.degree; }
};

enum class TraceKind { zero, d, delta, n };

const char* to_string(TraceKind kind);

/// The prefactor printed with each trace map in the source formulas. The
/// implementation's own trace signs are all +1; this is reported alongside.
int rho_sign(TraceKind kind, int n, int p);

Cochain trace(const SpacetimeForm& A, int k, TraceKind kind);
CauchyData traces(const SpacetimeForm& A, int k);

/// Spacetime exterior derivative: (a, b) -> (d a, Dt a - d b).
SpacetimeForm spacetime_d(const SpacetimeForm& A);
/// Pairing adjoint of spacetime_d: (a, b) -> (delta a + Dt b, -delta b).
/// The a-part is defined on vertices 0..K; ghost vertices are zero.
SpacetimeForm spacetime_delta(const SpacetimeForm& A);
/// -(delta d + d delta) = (-(Dt^2 + Delta) a, -(Dt^2 + Delta) b), evaluated on
/// vertices 0..K and edges 0..K-1 (zero elsewhere).
SpacetimeForm box(const SpacetimeForm& A);

/// Max over slices of the combined a/b norm on vertices 0..K and edges 0..K-1.
double max_slice_norm(const SpacetimeForm& A);

/// Evolves box A = J from Cauchy data on slice m in both time directions.
/// All four traces of the result on slice m reproduce the data.
SpacetimeForm leapfrog_evolve(const CauchyData& data, const SpacetimePtr& st, int slice = 0,
                              const Current* source = nullptr);

/// max_k |box A - J| / max(|A|, |J|, 1e-12).
double box_residual(const SpacetimeForm& A, const Current* J = nullptr);

/// Trapezoid on vertices, midpoint on edges: sum dt [<a,a'> - <b,b'>].
double spacetime_pairing(const SpacetimeForm& A, const SpacetimeForm& B);
/// Same integrand with explicit weights per vertex (0..K) and edge (0..K-1).
double weighted_pairing(const SpacetimeForm& A, const SpacetimeForm& B,
                        const std::vector<double>& vertex_w, const std::vector<double>& edge_w);

/// <rho0 A, rhod B> - <rhod A, rho0 B> + <rhodelta A, rhon B> - <rhon A, rhodelta B>.
double boundary_bilinear(const SpacetimeForm& A, const SpacetimeForm& B, int k);

struct IdentityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
};

/// Bulk integral over [k1, k2] of <A, box B> - <B, box A> against
/// boundary_bilinear(k1) - boundary_bilinear(k2).
IdentityCheck greens_identity_check(const SpacetimeForm& A, const SpacetimeForm& B, int k1,
                                    int k2);

/// Staggered leapfrog energy between slices k and k+1 (k = 0..K-1).
double energy(const SpacetimeForm& A, int k);

/// CSV rows "part,slice,cell,value" for slices 0..K.
void write_snapshot_csv(const SpacetimeForm& A, std::ostream& os);

}  // namespace pform
