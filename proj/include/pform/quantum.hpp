#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pform/phase.hpp"

namespace pform {

using cplx = std::complex<double>;

/// Phase-space vector in mode coordinates: q_m = <e_m, A0>, p_m = <e_m, Ad>.
struct ModeVector {
  Eigen::VectorXd q;
  Eigen::VectorXd p;

  ModeVector operator+(const ModeVector& o) const { return {q + o.q, p + o.p}; }
  ModeVector operator-(const ModeVector& o) const { return {q - o.q, p - o.p}; }
  ModeVector operator*(double s) const { return {s * q, s * p}; }
};

/// One-particle structure over a finite set of non-harmonic coexact modes:
///   mu(u,v) = 1/2 sum (w q q' + p p'/w)
///   J(q,p)  = (p/w, -w q)
///   K(q,p)  = (sqrt(w) q - i p / sqrt(w)) / sqrt(2)
/// so that 2 mu(u, Jv) = sigma(u,v) and (Ku,Kv) = mu(u,v) - i/2 sigma(u,v).
class QuantStructure {
 public:
  static QuantStructure build(SlicePtr slice, const ModeBasis& modes);

  const SlicePtr& slice() const { return slice_; }
  const ModeBasis& modes() const { return modes_; }
  std::size_t size() const { return modes_.size(); }
  const Eigen::VectorXd& omega() const { return modes_.omega; }

  ModeVector zero() const;
  ModeVector coords(const Cochain& A0, const Cochain& Ad) const;
  ModeVector coords(const SpacetimeForm& A, int k) const;
  /// Slice data (A0, Ad) spanned by the modes.
  std::pair<Cochain, Cochain> synthesize(const ModeVector& u) const;

  double mu(const ModeVector& u, const ModeVector& v) const;
  double sigma(const ModeVector& u, const ModeVector& v) const;
  ModeVector J(const ModeVector& u) const;
  Eigen::VectorXcd K(const ModeVector& u) const;

  /// Content of (A0, Ad) outside the mode span, ignoring the exact part of
  /// A0 and the harmonic parts. Relative to the total non-harmonic content.
  double leakage(const Cochain& A0, const Cochain& Ad) const;

 private:
  SlicePtr slice_;
  ModeBasis modes_;
};

/// Symmetric Fock space over |M| <= 3 modes truncated at n_max <= 6 quanta
/// per mode. Basis states are occupation tuples, mode 0 most significant.
class FockSpace {
 public:
  FockSpace(int modes, int n_max);
  int modes() const { return modes_; }
  int n_max() const { return n_max_; }
  std::size_t dim() const { return dim_; }
  std::vector<int> occupation(std::size_t index) const;
  std::size_t index(const std::vector<int>& occ) const;
  /// Basis indices whose occupations are all below n_max.
  std::vector<std::size_t> untruncated() const;

 private:
  int modes_;
  int n_max_;
  std::size_t dim_;
};

struct FockOperator {
  Eigen::MatrixXcd mat;
  bool hermitian = false;

  FockOperator operator*(const FockOperator& o) const { return {mat * o.mat, false}; }
  FockOperator operator-(const FockOperator& o) const { return {mat - o.mat, false}; }
};

FockOperator annihilation(const FockSpace& fock, int mode);
FockOperator creation(const FockSpace& fock, int mode);
FockOperator identity(const FockSpace& fock);
FockOperator commutator(const FockOperator& x, const FockOperator& y);
/// Largest singular value, via the top eigenvalue of M^dag M.
double op_norm(const Eigen::MatrixXcd& m);
/// Operator norm of the compression onto the given basis indices.
double restricted_norm(const Eigen::MatrixXcd& m, const std::vector<std::size_t>& idx);

/// a(f) = sum conj(f_m) a_m,  a^dag(g) = sum g_m a_m^dag.
FockOperator smeared_annihilation(const FockSpace& fock, const Eigen::VectorXcd& f);
FockOperator smeared_creation(const FockSpace& fock, const Eigen::VectorXcd& g);

/// i a(Ku) - i a^dag(Ku): the operator attached to the phase-space vector u.
FockOperator phase_operator(const QuantStructure& qs, const FockSpace& fock,
                            const ModeVector& u);

struct FieldOperator {
  FockOperator op;
  ModeVector u;          // mode coordinates of E Jc on the reference slice
  double leakage = 0.0;
};

/// Smeared field for a co-closed current, read off E Jc on slice k (outside
/// the support of Jc). Leakage above 1e-6 raises mode_leakage unless
/// check_leakage is false.
FieldOperator field_operator(const Current& Jc, const QuantStructure& qs, const FockSpace& fock,
                             int k = 0, bool require_co_closed = true, bool check_leakage = true);

struct SaturationResult {
  double mu = 0.0;
  double sup = 0.0;       // 1/4 sup sigma(u,v)^2 / mu(v,v), closed form
  double optimizer = 0.0; // the same ratio evaluated at the analytic maximizer
  double scan_max = 0.0;  // 1/4 max over random samples
  double residual = 0.0;  // |mu - sup| / mu
  bool scan_ok = false;   // scan never exceeds sup (relative slack 1e-12)
};

SaturationResult mu_saturation_check(const QuantStructure& qs, const ModeVector& u,
                                     int samples = 10000, std::uint64_t seed = 1);

/// |(Ku,Kv) - mu(u,v) + i/2 sigma(u,v)|.
double k_identity_residual(const QuantStructure& qs, const ModeVector& u, const ModeVector& v);

/// |A(delta d theta)| / |A(theta)| for an arbitrary compact theta whose
/// window leaves room for the spacetime derivative.
double weak_maxwell_check(const Current& theta, const QuantStructure& qs, const FockSpace& fock);

struct CcrResult {
  double residual = 0.0;        // on the occupation < n_max subspace
  double full_residual = 0.0;   // whole truncated space
  double pairing = 0.0;         // <Jc, E Jc'>
  double modal = 0.0;           // -sigma(E Jc, E Jc') from mode coordinates
};

CcrResult ccr_check(const Current& Jc, const Current& Jc2, const QuantStructure& qs,
                    const FockSpace& fock);

/// exp(i Phi(u)), with |Ku| <= 0.2 enforced.
FockOperator weyl(const ModeVector& u, const QuantStructure& qs, const FockSpace& fock);

struct WeylResult {
  double printed_phase = 0.0;     // |W(u)W(v) - e^{-i s/2} W(u+v)| on test vectors
  double consistent_phase = 0.0;  // same with e^{+i s/2}
  double sigma = 0.0;
};

/// Compares W(u)W(v) with both phase conventions on the vacuum and the
/// one-particle states.
WeylResult weyl_relation_check(const ModeVector& u, const ModeVector& v,
                               const QuantStructure& qs, const FockSpace& fock);

inline constexpr double weyl_amplitude_guard = 0.2;

}  // namespace pform
