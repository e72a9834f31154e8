#include "pform/quantum.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <random>

namespace pform {

QuantStructure QuantStructure::build(SlicePtr slice, const ModeBasis& modes) {
  require(slice != nullptr, ErrorCode::invalid_argument, "structure needs a slice");
  require(modes.complex == slice->complex(), ErrorCode::invalid_argument,
          "modes live on a different complex");
  require(modes.size() > 0, ErrorCode::invalid_argument, "structure needs at least one mode");
  const double tol = std::max(modes.lambda_tol, 1e-10 * slice->lambda_max(modes.degree));
  for (std::size_t m = 0; m < modes.size(); ++m)
    require(!modes.harmonic[m] && modes.eigenvalues[static_cast<Eigen::Index>(m)] > tol,
            ErrorCode::precondition,
            "mode " + std::to_string(m) + " is a zero mode and cannot be quantized");
  QuantStructure qs;
  qs.slice_ = std::move(slice);
  qs.modes_ = modes;
  return qs;
}

ModeVector QuantStructure::zero() const {
  const auto n = static_cast<Eigen::Index>(size());
  return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
}

ModeVector QuantStructure::coords(const Cochain& A0, const Cochain& Ad) const {
  require(A0.degree == modes_.degree && Ad.degree == modes_.degree, ErrorCode::degree_mismatch,
          "mode coordinates need data of the mode degree");
  const Eigen::VectorXd& w = slice_->weights(modes_.degree);
  return {modes_.vectors.transpose() * w.cwiseProduct(A0.values),
          modes_.vectors.transpose() * w.cwiseProduct(Ad.values)};
}

ModeVector QuantStructure::coords(const SpacetimeForm& A, int k) const {
  return coords(trace(A, k, TraceKind::zero), trace(A, k, TraceKind::d));
}

std::pair<Cochain, Cochain> QuantStructure::synthesize(const ModeVector& u) const {
  return {Cochain(slice_->complex(), modes_.degree, modes_.vectors * u.q),
          Cochain(slice_->complex(), modes_.degree, modes_.vectors * u.p)};
}

double QuantStructure::mu(const ModeVector& u, const ModeVector& v) const {
  const Eigen::VectorXd& w = omega();
  double acc = 0.0;
  for (Eigen::Index m = 0; m < w.size(); ++m)
    acc += w[m] * u.q[m] * v.q[m] + u.p[m] * v.p[m] / w[m];
  return 0.5 * acc;
}

double QuantStructure::sigma(const ModeVector& u, const ModeVector& v) const {
  return u.q.dot(v.p) - v.q.dot(u.p);
}

ModeVector QuantStructure::J(const ModeVector& u) const {
  return {u.p.cwiseQuotient(omega()), -omega().cwiseProduct(u.q)};
}

Eigen::VectorXcd QuantStructure::K(const ModeVector& u) const {
  const Eigen::VectorXd& w = omega();
  Eigen::VectorXcd c(w.size());
  for (Eigen::Index m = 0; m < w.size(); ++m) {
    const double sw = std::sqrt(w[m]);
    c[m] = cplx(sw * u.q[m], -u.p[m] / sw) / std::sqrt(2.0);
  }
  return c;
}

double QuantStructure::leakage(const Cochain& A0, const Cochain& Ad) const {
  const Slice& s = *slice_;
  const ModeVector u = coords(A0, Ad);
  const auto [q0, p0] = synthesize(u);
  const Cochain a_nh = s.hodge_decompose(A0).coexact;
  const Cochain d_nh = Ad - s.harmonic_part(Ad);
  const double out = std::hypot(s.norm(a_nh - q0), s.norm(d_nh - p0));
  const double total = std::hypot(s.norm(a_nh), s.norm(d_nh));
  return out / std::max(total, 1e-12);
}

FockSpace::FockSpace(int modes, int n_max) : modes_(modes), n_max_(n_max), dim_(1) {
  require(modes >= 1 && modes <= 3, ErrorCode::invalid_argument, "Fock space needs 1..3 modes");
  require(n_max >= 1 && n_max <= 6, ErrorCode::invalid_argument, "occupation cutoff must be 1..6");
  for (int m = 0; m < modes; ++m) dim_ *= static_cast<std::size_t>(n_max + 1);
}

std::vector<int> FockSpace::occupation(std::size_t index) const {
  std::vector<int> occ(static_cast<std::size_t>(modes_));
  for (int m = modes_ - 1; m >= 0; --m) {
    occ[static_cast<std::size_t>(m)] = static_cast<int>(index % static_cast<std::size_t>(n_max_ + 1));
    index /= static_cast<std::size_t>(n_max_ + 1);
  }
  return occ;
}

std::size_t FockSpace::index(const std::vector<int>& occ) const {
  std::size_t i = 0;
  for (int n : occ) i = i * static_cast<std::size_t>(n_max_ + 1) + static_cast<std::size_t>(n);
  return i;
}

std::vector<std::size_t> FockSpace::untruncated() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < dim_; ++i) {
    const auto occ = occupation(i);
    if (std::all_of(occ.begin(), occ.end(), [&](int n) { return n < n_max_; })) out.push_back(i);
  }
  return out;
}

FockOperator annihilation(const FockSpace& fock, int mode) {
  require(mode >= 0 && mode < fock.modes(), ErrorCode::invalid_argument, "mode out of range");
  const auto n = static_cast<Eigen::Index>(fock.dim());
  FockOperator a{Eigen::MatrixXcd::Zero(n, n), false};
  for (std::size_t i = 0; i < fock.dim(); ++i) {
    auto occ = fock.occupation(i);
    const int k = occ[static_cast<std::size_t>(mode)];
    if (k == 0) continue;
    occ[static_cast<std::size_t>(mode)] = k - 1;
    a.mat(static_cast<Eigen::Index>(fock.index(occ)), static_cast<Eigen::Index>(i)) =
        std::sqrt(static_cast<double>(k));
  }
  return a;
}

FockOperator creation(const FockSpace& fock, int mode) {
  return {annihilation(fock, mode).mat.adjoint(), false};
}

FockOperator identity(const FockSpace& fock) {
  const auto n = static_cast<Eigen::Index>(fock.dim());
  return {Eigen::MatrixXcd::Identity(n, n), true};
}

FockOperator commutator(const FockOperator& x, const FockOperator& y) {
  return {x.mat * y.mat - y.mat * x.mat, false};
}

double op_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  const double scale = m.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  const Eigen::MatrixXcd x = m / scale;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(x.adjoint() * x, Eigen::EigenvaluesOnly);
  return scale * std::sqrt(std::max(es.eigenvalues().maxCoeff(), 0.0));
}

double restricted_norm(const Eigen::MatrixXcd& m, const std::vector<std::size_t>& idx) {
  const auto k = static_cast<Eigen::Index>(idx.size());
  Eigen::MatrixXcd sub(k, k);
  for (Eigen::Index i = 0; i < k; ++i)
    for (Eigen::Index j = 0; j < k; ++j)
      sub(i, j) = m(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(i)]),
                    static_cast<Eigen::Index>(idx[static_cast<std::size_t>(j)]));
  return op_norm(sub);
}

FockOperator smeared_annihilation(const FockSpace& fock, const Eigen::VectorXcd& f) {
  require(f.size() == fock.modes(), ErrorCode::invalid_argument, "amplitude count mismatch");
  const auto n = static_cast<Eigen::Index>(fock.dim());
  FockOperator out{Eigen::MatrixXcd::Zero(n, n), false};
  for (int m = 0; m < fock.modes(); ++m)
    out.mat += std::conj(f[m]) * annihilation(fock, m).mat;
  return out;
}

FockOperator smeared_creation(const FockSpace& fock, const Eigen::VectorXcd& g) {
  require(g.size() == fock.modes(), ErrorCode::invalid_argument, "amplitude count mismatch");
  const auto n = static_cast<Eigen::Index>(fock.dim());
  FockOperator out{Eigen::MatrixXcd::Zero(n, n), false};
  for (int m = 0; m < fock.modes(); ++m) out.mat += g[m] * creation(fock, m).mat;
  return out;
}

FockOperator phase_operator(const QuantStructure& qs, const FockSpace& fock,
                            const ModeVector& u) {
  require(static_cast<int>(qs.size()) == fock.modes(), ErrorCode::invalid_argument,
          "Fock space and structure disagree on the mode count");
  const Eigen::VectorXcd c = qs.K(u);
  const cplx i(0.0, 1.0);
  FockOperator op{i * smeared_annihilation(fock, c).mat - i * smeared_creation(fock, c).mat,
                  true};
  return op;
}

FieldOperator field_operator(const Current& Jc, const QuantStructure& qs, const FockSpace& fock,
                             int k, bool require_co_closed, bool check_leakage) {
  if (require_co_closed)
    require(Jc.co_closed, ErrorCode::precondition, "smearing current is not co-closed");
  const SpacetimeForm E = causal_propagator(Jc);
  const Cochain A0 = trace(E, k, TraceKind::zero);
  const Cochain Ad = trace(E, k, TraceKind::d);
  FieldOperator f;
  f.u = qs.coords(A0, Ad);
  f.leakage = qs.leakage(A0, Ad);
  if (check_leakage && f.leakage > 1e-6)
    fail(ErrorCode::mode_leakage,
         "propagated current has relative content " + std::to_string(f.leakage) +
             " outside the " + std::to_string(qs.size()) + " quantized modes");
  f.op = phase_operator(qs, fock, f.u);
  return f;
}

SaturationResult mu_saturation_check(const QuantStructure& qs, const ModeVector& u, int samples,
                                     std::uint64_t seed) {
  SaturationResult r;
  r.mu = qs.mu(u, u);
  require(r.mu > 0.0, ErrorCode::invalid_argument, "saturation check needs a nonzero vector");
  const Eigen::VectorXd& w = qs.omega();
  double s4 = 0.0;
  for (Eigen::Index m = 0; m < w.size(); ++m)
    s4 += 2.0 * (u.p[m] * u.p[m] / w[m] + w[m] * u.q[m] * u.q[m]);
  r.sup = 0.25 * s4;

  const ModeVector best{-2.0 * u.p.cwiseQuotient(w), 2.0 * w.cwiseProduct(u.q)};
  const double sb = qs.sigma(u, best);
  r.optimizer = 0.25 * sb * sb / qs.mu(best, best);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  for (int i = 0; i < samples; ++i) {
    ModeVector v = qs.zero();
    for (Eigen::Index m = 0; m < w.size(); ++m) {
      v.q[m] = g(rng);
      v.p[m] = g(rng);
    }
    const double sv = qs.sigma(u, v);
    r.scan_max = std::max(r.scan_max, 0.25 * sv * sv / qs.mu(v, v));
  }
  r.residual = std::max(std::abs(r.mu - r.sup), std::abs(r.mu - r.optimizer)) / r.mu;
  r.scan_ok = r.scan_max <= r.sup * (1.0 + 1e-12);
  return r;
}

double k_identity_residual(const QuantStructure& qs, const ModeVector& u, const ModeVector& v) {
  const cplx lhs = qs.K(u).dot(qs.K(v));  // conjugates the first argument
  const cplx rhs(qs.mu(u, v), -0.5 * qs.sigma(u, v));
  return std::abs(lhs - rhs);
}

double weak_maxwell_check(const Current& theta, const QuantStructure& qs, const FockSpace& fock) {
  const Current src = Current::make(spacetime_delta(spacetime_d(theta.form)), theta.k0 - 1,
                                    theta.k1 + 1);
  const FieldOperator lhs = field_operator(src, qs, fock, 0, false, false);
  const FieldOperator ref = field_operator(theta, qs, fock, 0, false, false);
  return op_norm(lhs.op.mat) / std::max(op_norm(ref.op.mat), 1e-12);
}

CcrResult ccr_check(const Current& Jc, const Current& Jc2, const QuantStructure& qs,
                    const FockSpace& fock) {
  const FieldOperator f1 = field_operator(Jc, qs, fock);
  const FieldOperator f2 = field_operator(Jc2, qs, fock);
  CcrResult r;
  r.pairing = spacetime_pairing(Jc.form, causal_propagator(Jc2));
  r.modal = -qs.sigma(f1.u, f2.u);
  const Eigen::MatrixXcd C =
      commutator(f1.op, f2.op).mat - cplx(0.0, r.pairing) * identity(fock).mat;
  r.residual = restricted_norm(C, fock.untruncated());
  r.full_residual = op_norm(C);
  return r;
}

FockOperator weyl(const ModeVector& u, const QuantStructure& qs, const FockSpace& fock) {
  const double amp = std::sqrt(std::max(qs.mu(u, u), 0.0));
  require(amp <= weyl_amplitude_guard, ErrorCode::amplitude_guard,
          "Weyl amplitude |Ku| = " + std::to_string(amp) + " exceeds the guard " +
              std::to_string(weyl_amplitude_guard));
  const FockOperator phi = phase_operator(qs, fock, u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(phi.mat);
  require(es.info() == Eigen::Success, ErrorCode::solver_failure,
          "Hermitian eigen-solve failed while exponentiating");
  Eigen::VectorXcd phase(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phase.size(); ++i)
    phase[i] = std::exp(cplx(0.0, es.eigenvalues()[i]));
  return {es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint(), false};
}

WeylResult weyl_relation_check(const ModeVector& u, const ModeVector& v,
                               const QuantStructure& qs, const FockSpace& fock) {
  const Eigen::MatrixXcd X = weyl(u, qs, fock).mat * weyl(v, qs, fock).mat;
  const Eigen::MatrixXcd Y = weyl(u + v, qs, fock).mat;
  WeylResult r;
  r.sigma = qs.sigma(u, v);
  std::vector<std::size_t> probes{0};
  for (int m = 0; m < fock.modes(); ++m) {
    std::vector<int> occ(static_cast<std::size_t>(fock.modes()), 0);
    occ[static_cast<std::size_t>(m)] = 1;
    probes.push_back(fock.index(occ));
  }
  const cplx minus = std::exp(cplx(0.0, -0.5 * r.sigma));
  const cplx plus = std::exp(cplx(0.0, 0.5 * r.sigma));
  for (std::size_t idx : probes) {
    const auto col = static_cast<Eigen::Index>(idx);
    r.printed_phase = std::max(r.printed_phase, (X.col(col) - minus * Y.col(col)).norm());
    r.consistent_phase = std::max(r.consistent_phase, (X.col(col) - plus * Y.col(col)).norm());
  }
  return r;
}

}  // namespace pform
