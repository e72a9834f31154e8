#include "pform/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace pform {

namespace {

Eigen::VectorXd zeros(const CubicalComplex& c, int q) {
  return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(c.cell_count(q)));
}

Eigen::VectorXd apply_d(const Slice& s, int q, const Eigen::VectorXd& v) {
  if (q < 0 || q >= s.dim()) return zeros(*s.complex(), q + 1);
  return s.complex()->coboundary_matrix(q) * v;
}

Eigen::VectorXd apply_delta(const Slice& s, int q, const Eigen::VectorXd& v) {
  if (q < 1 || q > s.dim()) return zeros(*s.complex(), q - 1);
  return s.delta_matrix(q) * v;
}

Eigen::VectorXd apply_lap(const Slice& s, int q, const Eigen::VectorXd& v) {
  if (q < 0 || q > s.dim()) return zeros(*s.complex(), q);
  return s.laplacian_matrix(q) * v;
}

double winner(const Slice& s, int q, const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (q < 0 || q > s.dim() || u.size() == 0) return 0.0;
  const Eigen::VectorXd& w = s.weights(q);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) acc += w[i] * u[i] * v[i];
  return acc;
}

double wnorm(const Slice& s, int q, const Eigen::VectorXd& u) {
  return std::sqrt(std::max(winner(s, q, u, u), 0.0));
}

double gershgorin(const Slice& s, int q) {
  const SparseMatrix& L = s.laplacian_matrix(q);
  const Eigen::VectorXd& w = s.weights(q);
  double best = 0.0;
  for (Eigen::Index i = 0; i < L.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(L, i); it; ++it)
      row += std::abs(it.value()) * std::sqrt(w[i] / w[it.col()]);
    best = std::max(best, row);
  }
  return best;
}

void check_same(const SpacetimeForm& x, const SpacetimeForm& y, const char* what) {
  require(x.st == y.st, ErrorCode::invalid_argument,
          std::string(what) + ": forms live on different spacetimes");
  require(x.degree == y.degree, ErrorCode::degree_mismatch,
          std::string(what) + ": degree " + std::to_string(x.degree) + " vs " +
              std::to_string(y.degree));
}

void check_slice(const SpacetimeForm& A, int k) {
  require(k >= 0 && k <= A.steps(), ErrorCode::invalid_argument,
          "slice " + std::to_string(k) + " outside 0.." + std::to_string(A.steps()));
}

}  // namespace

std::shared_ptr<const Spacetime> Spacetime::make(SlicePtr slice, double dt, int steps) {
  require(slice != nullptr, ErrorCode::invalid_argument, "spacetime needs a slice");
  require(dt > 0.0 && std::isfinite(dt), ErrorCode::invalid_argument, "time step must be positive");
  require(steps >= 2, ErrorCode::invalid_argument, "need at least 2 time steps");
  std::shared_ptr<Spacetime> st(new Spacetime());
  st->slice_ = std::move(slice);
  st->dt_ = dt;
  st->steps_ = steps;
  for (int q = 0; q <= st->slice_->dim(); ++q)
    st->lambda_bound_ = std::max(st->lambda_bound_, gershgorin(*st->slice_, q));
  require(st->cfl_number() <= cfl_limit, ErrorCode::cfl_violation,
          "CFL number " + std::to_string(st->cfl_number()) + " exceeds " +
              std::to_string(cfl_limit));
  return st;
}

double Spacetime::cfl_number() const { return dt_ * std::sqrt(lambda_bound_); }

SpacetimeForm SpacetimeForm::zero(const SpacetimePtr& st, int p) {
  require(st != nullptr, ErrorCode::invalid_argument, "form needs a spacetime");
  require(p >= -1 && p <= st->n(), ErrorCode::degree_mismatch,
          "spacetime degree " + std::to_string(p) + " out of range");
  SpacetimeForm f;
  f.st = st;
  f.degree = p;
  const auto& c = *st->complex();
  f.a.assign(static_cast<std::size_t>(st->steps() + 3), zeros(c, p));
  f.b.assign(static_cast<std::size_t>(st->steps() + 2), zeros(c, p - 1));
  return f;
}

Cochain SpacetimeForm::a_at(int k) const { return Cochain(st->complex(), degree, av(k)); }
Cochain SpacetimeForm::b_at(int j) const { return Cochain(st->complex(), degree - 1, bv(j)); }

SpacetimeForm& SpacetimeForm::operator+=(const SpacetimeForm& o) {
  check_same(*this, o, "add");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += o.a[i];
  for (std::size_t i = 0; i < b.size(); ++i) b[i] += o.b[i];
  return *this;
}

SpacetimeForm& SpacetimeForm::operator-=(const SpacetimeForm& o) {
  check_same(*this, o, "subtract");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= o.a[i];
  for (std::size_t i = 0; i < b.size(); ++i) b[i] -= o.b[i];
  return *this;
}

SpacetimeForm& SpacetimeForm::operator*=(double s) {
  for (auto& v : a) v *= s;
  for (auto& v : b) v *= s;
  return *this;
}

SpacetimeForm operator+(SpacetimeForm x, const SpacetimeForm& y) { return x += y; }
SpacetimeForm operator-(SpacetimeForm x, const SpacetimeForm& y) { return x -= y; }
SpacetimeForm operator*(double s, SpacetimeForm x) { return x *= s; }

Current Current::make(SpacetimeForm f, int k0, int k1) {
  const int K = f.steps();
  require(k0 >= 1 && k0 <= k1 && k1 <= K - 1, ErrorCode::invalid_argument,
          "support window [" + std::to_string(k0) + "," + std::to_string(k1) +
              "] must lie inside 1.." + std::to_string(K - 1));
  for (int k = -1; k <= K + 1; ++k)
    if (k < k0 || k > k1)
      require(f.av(k).size() == 0 || f.av(k).cwiseAbs().maxCoeff() == 0.0,
              ErrorCode::invalid_argument,
              "current is nonzero at vertex " + std::to_string(k) + " outside its window");
  for (int j = -1; j <= K; ++j)
    if (j < k0 || j > k1 - 1)
      require(f.bv(j).size() == 0 || f.bv(j).cwiseAbs().maxCoeff() == 0.0,
              ErrorCode::invalid_argument,
              "current is nonzero at edge " + std::to_string(j) + " outside its window");
  Current c;
  c.form = std::move(f);
  c.k0 = k0;
  c.k1 = k1;
  const double size = max_slice_norm(c.form);
  c.co_closed = size == 0.0 || max_slice_norm(spacetime_delta(c.form)) <= 1e-8 * size;
  return c;
}

Current Current::zero(const SpacetimePtr& st, int p) {
  Current c;
  c.form = SpacetimeForm::zero(st, p);
  c.k0 = 1;
  c.k1 = st->steps() - 1;
  c.co_closed = true;
  return c;
}

CauchyData CauchyData::zero(const ComplexPtr& c, int p) {
  return CauchyData{Cochain(c, p), Cochain(c, p), Cochain(c, p - 1), Cochain(c, p - 1)};
}

const char* to_string(TraceKind kind) {
  switch (kind) {
    case TraceKind::zero: return "0";
    case TraceKind::d: return "d";
    case TraceKind::delta: return "delta";
    case TraceKind::n: return "n";
  }
  return "?";
}

int rho_sign(TraceKind kind, int n, int p) {
  require(p >= 0 && p < n, ErrorCode::degree_mismatch, "rho_sign needs 0 <= p < n");
  auto parity = [](int e) { return ((e % 2) + 2) % 2 == 0 ? 1 : -1; };
  switch (kind) {
    case TraceKind::zero:
    case TraceKind::delta: return 1;
    case TraceKind::d: return parity(p * (n - p - 1) + (n - 1));
    case TraceKind::n: return parity((n - p) * (p - 1) + (n - 1));
  }
  return 1;
}

Cochain trace(const SpacetimeForm& A, int k, TraceKind kind) {
  check_slice(A, k);
  const Slice& s = *A.st->slice();
  const double dt = A.st->dt();
  const int p = A.degree;
  switch (kind) {
    case TraceKind::zero: return A.a_at(k);
    case TraceKind::n:
      return Cochain(A.st->complex(), p - 1, 0.5 * (A.bv(k - 1) + A.bv(k)));
    case TraceKind::d: {
      Eigen::VectorXd v = (A.av(k + 1) - A.av(k - 1)) / (2.0 * dt) -
                          apply_d(s, p - 1, 0.5 * (A.bv(k - 1) + A.bv(k)));
      return Cochain(A.st->complex(), p, std::move(v));
    }
    case TraceKind::delta: {
      Eigen::VectorXd v = apply_delta(s, p, A.av(k)) + (A.bv(k) - A.bv(k - 1)) / dt;
      return Cochain(A.st->complex(), p - 1, std::move(v));
    }
  }
  return Cochain();
}

CauchyData traces(const SpacetimeForm& A, int k) {
  return CauchyData{trace(A, k, TraceKind::zero), trace(A, k, TraceKind::d),
                    trace(A, k, TraceKind::n), trace(A, k, TraceKind::delta)};
}

SpacetimeForm spacetime_d(const SpacetimeForm& A) {
  const Slice& s = *A.st->slice();
  const int K = A.steps();
  const int p = A.degree;
  SpacetimeForm out = SpacetimeForm::zero(A.st, p + 1);
  for (int k = -1; k <= K + 1; ++k) out.av(k) = apply_d(s, p, A.av(k));
  for (int j = -1; j <= K; ++j)
    out.bv(j) = (A.av(j + 1) - A.av(j)) / A.st->dt() - apply_d(s, p - 1, A.bv(j));
  return out;
}

SpacetimeForm spacetime_delta(const SpacetimeForm& A) {
  const Slice& s = *A.st->slice();
  const int K = A.steps();
  const int p = A.degree;
  require(p >= 0, ErrorCode::degree_mismatch, "spacetime delta of a degree -1 form");
  SpacetimeForm out = SpacetimeForm::zero(A.st, p - 1);
  for (int k = 0; k <= K; ++k)
    out.av(k) = apply_delta(s, p, A.av(k)) + (A.bv(k) - A.bv(k - 1)) / A.st->dt();
  for (int j = -1; j <= K; ++j) out.bv(j) = -apply_delta(s, p - 1, A.bv(j));
  return out;
}

SpacetimeForm box(const SpacetimeForm& A) {
  const Slice& s = *A.st->slice();
  const int K = A.steps();
  const int p = A.degree;
  const double dt2 = A.st->dt() * A.st->dt();
  SpacetimeForm out = SpacetimeForm::zero(A.st, p);
  for (int k = 0; k <= K; ++k)
    out.av(k) = -(A.av(k + 1) - 2.0 * A.av(k) + A.av(k - 1)) / dt2 - apply_lap(s, p, A.av(k));
  for (int j = 0; j <= K - 1; ++j)
    out.bv(j) =
        -(A.bv(j + 1) - 2.0 * A.bv(j) + A.bv(j - 1)) / dt2 - apply_lap(s, p - 1, A.bv(j));
  return out;
}

double max_slice_norm(const SpacetimeForm& A) {
  const Slice& s = *A.st->slice();
  double m = 0.0;
  for (int k = 0; k <= A.steps(); ++k) m = std::max(m, wnorm(s, A.degree, A.av(k)));
  for (int j = 0; j < A.steps(); ++j) m = std::max(m, wnorm(s, A.degree - 1, A.bv(j)));
  return m;
}

SpacetimeForm leapfrog_evolve(const CauchyData& data, const SpacetimePtr& st, int m,
                              const Current* source) {
  require(st != nullptr, ErrorCode::invalid_argument, "evolution needs a spacetime");
  const ComplexPtr& c = st->complex();
  const int p = data.degree();
  require(p >= 0 && p <= st->n(), ErrorCode::degree_mismatch,
          "field degree must satisfy 0 <= p <= n");
  require(data.Ad.degree == p && data.An.degree == p - 1 && data.Adelta.degree == p - 1,
          ErrorCode::degree_mismatch, "Cauchy data degrees are inconsistent");
  for (const Cochain* x : {&data.A0, &data.Ad, &data.An, &data.Adelta})
    require(x->complex == c, ErrorCode::invalid_argument,
            "Cauchy data lives on a different complex");
  const int K = st->steps();
  require(m >= 0 && m <= K, ErrorCode::invalid_argument, "initial slice out of range");
  require(st->cfl_number() <= Spacetime::cfl_limit, ErrorCode::cfl_violation,
          "CFL bound violated");
  if (source) {
    require(source->form.st == st, ErrorCode::invalid_argument,
            "source lives on a different spacetime");
    require(source->degree() == p, ErrorCode::degree_mismatch, "source degree differs from field");
  }

  const Slice& s = *st->slice();
  const double dt = st->dt();
  const double dt2 = dt * dt;
  const Eigen::VectorXd za = zeros(*c, p);
  const Eigen::VectorXd zb = zeros(*c, p - 1);
  auto ja = [&](int k) -> const Eigen::VectorXd& { return source ? source->form.av(k) : za; };
  auto jb = [&](int j) -> const Eigen::VectorXd& { return source ? source->form.bv(j) : zb; };

  SpacetimeForm A = SpacetimeForm::zero(st, p);
  const Eigen::VectorXd vel = data.Ad.values + apply_d(s, p - 1, data.An.values);
  const Eigen::VectorXd acc = -apply_lap(s, p, data.A0.values) - ja(m);
  A.av(m) = data.A0.values;
  A.av(m + 1) = data.A0.values + dt * vel + 0.5 * dt2 * acc;
  A.av(m - 1) = data.A0.values - dt * vel + 0.5 * dt2 * acc;
  const Eigen::VectorXd gap = data.Adelta.values - apply_delta(s, p, data.A0.values);
  A.bv(m - 1) = data.An.values - 0.5 * dt * gap;
  A.bv(m) = data.An.values + 0.5 * dt * gap;

  for (int k = m + 1; k <= K; ++k)
    A.av(k + 1) = 2.0 * A.av(k) - A.av(k - 1) - dt2 * (apply_lap(s, p, A.av(k)) + ja(k));
  for (int k = m - 1; k >= 0; --k)
    A.av(k - 1) = 2.0 * A.av(k) - A.av(k + 1) - dt2 * (apply_lap(s, p, A.av(k)) + ja(k));
  for (int j = m; j <= K - 1; ++j)
    A.bv(j + 1) = 2.0 * A.bv(j) - A.bv(j - 1) - dt2 * (apply_lap(s, p - 1, A.bv(j)) + jb(j));
  for (int j = m - 1; j >= 0; --j)
    A.bv(j - 1) = 2.0 * A.bv(j) - A.bv(j + 1) - dt2 * (apply_lap(s, p - 1, A.bv(j)) + jb(j));
  return A;
}

double box_residual(const SpacetimeForm& A, const Current* J) {
  SpacetimeForm r = box(A);
  double scale = max_slice_norm(A);
  if (J) {
    r -= J->form;
    scale = std::max(scale, max_slice_norm(J->form));
  }
  return max_slice_norm(r) / std::max(scale, 1e-12);
}

double weighted_pairing(const SpacetimeForm& A, const SpacetimeForm& B,
                        const std::vector<double>& vertex_w, const std::vector<double>& edge_w) {
  check_same(A, B, "pairing");
  const Slice& s = *A.st->slice();
  const int K = A.steps();
  require(static_cast<int>(vertex_w.size()) == K + 1 && static_cast<int>(edge_w.size()) == K,
          ErrorCode::invalid_argument, "quadrature weight vectors have the wrong length");
  double acc = 0.0;
  for (int k = 0; k <= K; ++k)
    if (vertex_w[k] != 0.0) acc += vertex_w[k] * winner(s, A.degree, A.av(k), B.av(k));
  for (int j = 0; j < K; ++j)
    if (edge_w[j] != 0.0) acc -= edge_w[j] * winner(s, A.degree - 1, A.bv(j), B.bv(j));
  return A.st->dt() * acc;
}

double spacetime_pairing(const SpacetimeForm& A, const SpacetimeForm& B) {
  const int K = A.steps();
  std::vector<double> vw(static_cast<std::size_t>(K + 1), 1.0), ew(static_cast<std::size_t>(K), 1.0);
  vw.front() = vw.back() = 0.5;
  return weighted_pairing(A, B, vw, ew);
}

double boundary_bilinear(const SpacetimeForm& A, const SpacetimeForm& B, int k) {
  check_same(A, B, "boundary bilinear");
  const Slice& s = *A.st->slice();
  const CauchyData x = traces(A, k);
  const CauchyData y = traces(B, k);
  return s.inner(x.A0, y.Ad) - s.inner(x.Ad, y.A0) + s.inner(x.Adelta, y.An) -
         s.inner(x.An, y.Adelta);
}

IdentityCheck greens_identity_check(const SpacetimeForm& A, const SpacetimeForm& B, int k1,
                                    int k2) {
  check_same(A, B, "Green's identity");
  const int K = A.steps();
  require(0 <= k1 && k1 < k2 && k2 <= K, ErrorCode::invalid_argument,
          "slab must satisfy 0 <= k1 < k2 <= K");
  std::vector<double> vw(static_cast<std::size_t>(K + 1), 0.0), ew(static_cast<std::size_t>(K), 0.0);
  for (int k = k1; k <= k2; ++k) vw[k] = (k == k1 || k == k2) ? 0.5 : 1.0;
  for (int j = k1; j < k2; ++j) ew[j] = 1.0;
  IdentityCheck r;
  r.lhs = weighted_pairing(A, box(B), vw, ew) - weighted_pairing(B, box(A), vw, ew);
  const double b1 = boundary_bilinear(A, B, k1);
  const double b2 = boundary_bilinear(A, B, k2);
  r.rhs = b1 - b2;
  const double scale = std::max({std::abs(r.lhs), std::abs(b1), std::abs(b2), 1e-12});
  r.residual = std::abs(r.lhs - r.rhs) / scale;
  return r;
}

double energy(const SpacetimeForm& A, int k) {
  require(k >= 0 && k < A.steps(), ErrorCode::invalid_argument, "energy index out of range");
  const Slice& s = *A.st->slice();
  const double dt = A.st->dt();
  const int p = A.degree;
  const Eigen::VectorXd va = (A.av(k + 1) - A.av(k)) / dt;
  const Eigen::VectorXd vb = (A.bv(k) - A.bv(k - 1)) / dt;
  return 0.5 * winner(s, p, va, va) + 0.5 * winner(s, p, A.av(k), apply_lap(s, p, A.av(k + 1))) +
         0.5 * winner(s, p - 1, vb, vb) +
         0.5 * winner(s, p - 1, A.bv(k - 1), apply_lap(s, p - 1, A.bv(k)));
}

void write_snapshot_csv(const SpacetimeForm& A, std::ostream& os) {
  os << "part,slice,cell,value\n";
  os.precision(17);
  for (int k = 0; k <= A.steps(); ++k)
    for (Eigen::Index i = 0; i < A.av(k).size(); ++i)
      os << "a," << k << ',' << i << ',' << A.av(k)[i] << '\n';
  for (int j = 0; j < A.steps(); ++j)
    for (Eigen::Index i = 0; i < A.bv(j).size(); ++i)
      os << "b," << j << ',' << i << ',' << A.bv(j)[i] << '\n';
}

}  // namespace pform
