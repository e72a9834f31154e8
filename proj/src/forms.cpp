#include "pform/forms.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

namespace pform {

SpatialMetric SpatialMetric::from_function(
    const CubicalComplex& c, const std::function<double(int, std::array<int, 3>)>& h) {
  SpatialMetric m;
  m.scale.resize(c.dim());
  for (int a = 0; a < c.dim(); ++a) {
    m.scale[a].resize(static_cast<Eigen::Index>(c.vertex_count()));
    for (std::size_t v = 0; v < c.vertex_count(); ++v) {
      const double s = h(a, c.vertex_coord(v));
      require(s > 0.0 && std::isfinite(s), ErrorCode::invalid_argument,
              "metric scale factors must be positive and finite");
      m.scale[a][static_cast<Eigen::Index>(v)] = s;
    }
  }
  return m;
}

std::size_t ModeBasis::harmonic_count() const {
  std::size_t n = 0;
  for (bool h : harmonic) n += h ? 1 : 0;
  return n;
}

Cochain ModeBasis::mode(std::size_t m) const {
  require(m < size(), ErrorCode::invalid_argument, "mode index out of range");
  return Cochain(complex, degree, vectors.col(static_cast<Eigen::Index>(m)));
}

std::shared_ptr<const Slice> Slice::make(ComplexPtr complex, SpatialMetric metric) {
  require(complex != nullptr, ErrorCode::invalid_argument, "slice needs a complex");
  const int d = complex->dim();
  if (!metric.is_flat()) {
    require(static_cast<int>(metric.scale.size()) == d, ErrorCode::invalid_argument,
            "metric needs one scale field per axis");
    for (const auto& s : metric.scale) {
      require(static_cast<std::size_t>(s.size()) == complex->vertex_count(),
              ErrorCode::invalid_argument, "metric scale field has wrong length");
      require(s.minCoeff() > 0.0, ErrorCode::invalid_argument,
              "metric scale factors must be positive");
    }
  }

  std::shared_ptr<Slice> s(new Slice());
  s->complex_ = complex;
  s->metric_ = std::move(metric);
  s->weights_.resize(d + 1);
  for (int p = 0; p <= d; ++p) {
    Eigen::VectorXd w(static_cast<Eigen::Index>(complex->cell_count(p)));
    for (std::size_t i = 0; i < complex->cell_count(p); ++i) {
      const auto cell = complex->cell(p, i);
      const std::size_t v = complex->vertex_index(cell.base);
      double num = 1.0, den = 1.0;
      for (int a = 0; a < d; ++a) {
        double len = complex->spacing(a);
        if (!s->metric_.is_flat()) len *= s->metric_.scale[a][static_cast<Eigen::Index>(v)];
        if (cell.axes & (1u << a))
          den *= len;
        else
          num *= len;
      }
      w[static_cast<Eigen::Index>(i)] = num / den;
    }
    s->weights_[p] = std::move(w);
  }

  s->delta_.resize(d + 1);
  for (int p = 1; p <= d; ++p) {
    const SparseMatrix& D = complex->coboundary_matrix(p - 1);
    SparseMatrix dt = SparseMatrix(D.transpose());
    s->delta_[p] = s->weights_[p - 1].cwiseInverse().asDiagonal() * dt *
                   s->weights_[p].asDiagonal();
  }
  s->laplace_.resize(d + 1);
  for (int p = 0; p <= d; ++p) {
    const auto n = static_cast<Eigen::Index>(complex->cell_count(p));
    SparseMatrix L(n, n);
    if (p < d) L = s->delta_[p + 1] * complex->coboundary_matrix(p);
    if (p >= 1) {
      SparseMatrix up = complex->coboundary_matrix(p - 1) * s->delta_[p];
      L = SparseMatrix(L + up);
    }
    L.makeCompressed();
    s->laplace_[p] = std::move(L);
  }
  s->spectra_.resize(d + 1);
  s->coexact_.resize(d + 1);
  return s;
}

void Slice::check_owned(const Cochain& u, const char* what) const {
  require(u.complex == complex_, ErrorCode::invalid_argument,
          std::string(what) + ": cochain belongs to a different complex");
  require(u.degree >= -1 && u.degree <= dim() + 1, ErrorCode::degree_mismatch,
          std::string(what) + ": degree out of range");
}

double Slice::inner(const Cochain& u, const Cochain& v) const {
  check_compatible(u, v, "inner");
  check_owned(u, "inner");
  if (u.empty()) return 0.0;
  const Eigen::VectorXd& w = weights_[u.degree];
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) acc += w[i] * (u.values[i] * v.values[i]);
  return acc;
}

double Slice::norm(const Cochain& u) const { return std::sqrt(std::max(inner(u, u), 0.0)); }

Cochain Slice::d(const Cochain& u) const {
  check_owned(u, "d");
  return coboundary_or_empty(u);
}

Cochain Slice::codifferential(const Cochain& u) const {
  check_owned(u, "codifferential");
  require(u.degree >= 1 && u.degree <= dim(), ErrorCode::degree_mismatch,
          "codifferential needs 1 <= p <= d, got p = " + std::to_string(u.degree));
  return Cochain(complex_, u.degree - 1, delta_[u.degree] * u.values);
}

Cochain Slice::delta(const Cochain& u) const {
  check_owned(u, "delta");
  if (u.degree <= 0 || u.degree > dim()) return Cochain(complex_, u.degree - 1);
  return codifferential(u);
}

Cochain Slice::laplacian(const Cochain& u) const {
  check_owned(u, "laplacian");
  if (u.degree < 0 || u.degree > dim()) return Cochain(complex_, u.degree);
  return Cochain(complex_, u.degree, laplace_[u.degree] * u.values);
}

ModeBasis Slice::decompose(int p, bool coexact_only) const {
  const std::size_t n = complex_->cell_count(p);
  require(n <= dense_limit, ErrorCode::solver_failure,
          "dense eigen-solve at degree " + std::to_string(p) + " has size " + std::to_string(n) +
              ", above the limit of " + std::to_string(dense_limit));
  const Eigen::VectorXd sw = weights_[p].cwiseSqrt();
  const Eigen::VectorXd isw = sw.cwiseInverse();

  Eigen::MatrixXd op;
  if (coexact_only) {
    if (p < dim())
      op = Eigen::MatrixXd(delta_[p + 1] * complex_->coboundary_matrix(p));
    else
      op = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  } else {
    op = Eigen::MatrixXd(laplace_[p]);
  }
  Eigen::MatrixXd sym = sw.asDiagonal() * op * isw.asDiagonal();
  sym = 0.5 * (sym + sym.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success)
    fail(ErrorCode::solver_failure, "eigen-solver failed at degree " + std::to_string(p) +
                                        " with size " + std::to_string(n));

  ModeBasis mb;
  mb.complex = complex_;
  mb.degree = p;
  mb.eigenvalues = es.eigenvalues();
  mb.vectors = isw.asDiagonal() * es.eigenvectors();
  const Eigen::Index m = mb.eigenvalues.size();
  // Fix each vector's sign so its first sizeable entry is positive.
  for (Eigen::Index j = 0; j < m; ++j) {
    auto col = mb.vectors.col(j);
    const double big = col.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < col.size(); ++i) {
      if (std::abs(col[i]) > 1e-6 * big) {
        if (col[i] < 0) col = -col;
        break;
      }
    }
  }
  const double lmax = m > 0 ? std::max(mb.eigenvalues[m - 1], 0.0) : 0.0;
  mb.lambda_tol = harmonic_rel_tol * lmax;
  mb.harmonic.resize(static_cast<std::size_t>(m));
  mb.omega.resize(m);
  for (Eigen::Index j = 0; j < m; ++j) {
    mb.harmonic[static_cast<std::size_t>(j)] = mb.eigenvalues[j] <= mb.lambda_tol;
    mb.omega[j] = std::sqrt(std::max(mb.eigenvalues[j], 0.0));
  }
  return mb;
}

const ModeBasis& Slice::spectrum(int p) const {
  require(p >= 0 && p <= dim(), ErrorCode::degree_mismatch, "spectrum degree out of range");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!spectra_[p]) spectra_[p] = std::make_unique<ModeBasis>(decompose(p, false));
  return *spectra_[p];
}

const ModeBasis& Slice::coexact_spectrum(int p) const {
  require(p >= 0 && p <= dim(), ErrorCode::degree_mismatch, "spectrum degree out of range");
  std::lock_guard<std::mutex> lock(cache_mutex_);
  if (!coexact_[p]) coexact_[p] = std::make_unique<ModeBasis>(decompose(p, true));
  return *coexact_[p];
}

double Slice::lambda_max(int p) const {
  const auto& s = spectrum(p);
  return s.size() ? s.eigenvalues[s.eigenvalues.size() - 1] : 0.0;
}

namespace {

ModeBasis take_columns(const ModeBasis& src, const std::vector<Eigen::Index>& cols) {
  ModeBasis mb;
  mb.complex = src.complex;
  mb.degree = src.degree;
  mb.lambda_tol = src.lambda_tol;
  const auto k = static_cast<Eigen::Index>(cols.size());
  mb.eigenvalues.resize(k);
  mb.omega.resize(k);
  mb.vectors.resize(src.vectors.rows(), k);
  for (Eigen::Index j = 0; j < k; ++j) {
    mb.eigenvalues[j] = src.eigenvalues[cols[j]];
    mb.omega[j] = src.omega[cols[j]];
    mb.vectors.col(j) = src.vectors.col(cols[j]);
    mb.harmonic.push_back(src.harmonic[static_cast<std::size_t>(cols[j])]);
  }
  return mb;
}

}  // namespace

ModeBasis Slice::eigenmodes(int p, int count) const {
  const ModeBasis& s = spectrum(p);
  const auto total = static_cast<Eigen::Index>(s.size());
  require(count <= total, ErrorCode::invalid_argument,
          "requested " + std::to_string(count) + " modes but degree " + std::to_string(p) +
              " has only " + std::to_string(total) + " cells");
  const Eigen::Index k = count < 0 ? total : count;
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < k; ++j) cols.push_back(j);
  return take_columns(s, cols);
}

ModeBasis Slice::coexact_modes(int p) const {
  const ModeBasis& s = coexact_spectrum(p);
  std::vector<Eigen::Index> cols;
  for (std::size_t j = 0; j < s.size(); ++j)
    if (!s.harmonic[j]) cols.push_back(static_cast<Eigen::Index>(j));
  return take_columns(s, cols);
}

Cochain Slice::harmonic_part(const Cochain& u) const {
  check_owned(u, "harmonic_part");
  if (u.degree < 0 || u.degree > dim()) return Cochain(complex_, u.degree);
  const ModeBasis& s = spectrum(u.degree);
  const Eigen::VectorXd wu = weights_[u.degree].cwiseProduct(u.values);
  Eigen::VectorXd h = Eigen::VectorXd::Zero(u.values.size());
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (!s.harmonic[j]) continue;
    const auto col = s.vectors.col(static_cast<Eigen::Index>(j));
    h += col.dot(wu) * col;
  }
  return Cochain(complex_, u.degree, h);
}

Cochain Slice::laplacian_pinv(const Cochain& u) const {
  check_owned(u, "laplacian_pinv");
  if (u.degree < 0 || u.degree > dim()) return Cochain(complex_, u.degree);
  const ModeBasis& s = spectrum(u.degree);
  const Eigen::VectorXd wu = weights_[u.degree].cwiseProduct(u.values);
  Eigen::VectorXd coef = s.vectors.transpose() * wu;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const auto jj = static_cast<Eigen::Index>(j);
    coef[jj] = s.harmonic[j] ? 0.0 : coef[jj] / s.eigenvalues[jj];
  }
  return Cochain(complex_, u.degree, s.vectors * coef);
}

HodgeParts Slice::hodge_decompose(const Cochain& u) const {
  check_owned(u, "hodge_decompose");
  const Cochain g = laplacian_pinv(u);
  HodgeParts parts{Cochain(complex_, u.degree), Cochain(complex_, u.degree),
                   harmonic_part(u)};
  if (u.degree >= 1) parts.exact = d(delta(g));
  if (u.degree < dim()) parts.coexact = delta(d(g));
  return parts;
}

Cochain Slice::solve_coderivative(const Cochain& psi) const {
  check_owned(psi, "solve_coderivative");
  require(psi.degree >= 0 && psi.degree < dim(), ErrorCode::degree_mismatch,
          "solve_coderivative needs a datum of degree 0..d-1, got " +
              std::to_string(psi.degree));
  const double scale = norm(psi);
  if (scale == 0.0) return Cochain(complex_, psi.degree + 1);
  const HodgeParts parts = hodge_decompose(psi);
  const double tol = 1e-8 * scale;
  if (norm(parts.harmonic) > tol)
    fail(ErrorCode::topological_obstruction,
         "datum has a harmonic component of relative size " +
             std::to_string(norm(parts.harmonic) / scale) + "; no solution of delta w = psi");
  if (norm(parts.exact) > tol)
    fail(ErrorCode::topological_obstruction, "datum has an exact component of relative size " +
                                      std::to_string(norm(parts.exact) / scale) +
                                      "; it is not in the range of delta");
  return d(laplacian_pinv(psi));
}

Cochain Slice::solve_exterior(const Cochain& F0) const {
  check_owned(F0, "solve_exterior");
  require(F0.degree >= 1 && F0.degree <= dim(), ErrorCode::degree_mismatch,
          "solve_exterior needs a datum of degree 1..d, got " + std::to_string(F0.degree));
  const double scale = norm(F0);
  if (scale == 0.0) return Cochain(complex_, F0.degree - 1);
  const HodgeParts parts = hodge_decompose(F0);
  const double tol = 1e-8 * scale;
  if (norm(parts.harmonic) > tol)
    fail(ErrorCode::topological_obstruction,
         "field has a harmonic component of relative size " +
             std::to_string(norm(parts.harmonic) / scale) + "; it is not exact");
  if (norm(parts.coexact) > tol)
    fail(ErrorCode::topological_obstruction, "field is not closed (coexact component of relative size " +
                                      std::to_string(norm(parts.coexact) / scale) + ")");
  return delta(laplacian_pinv(F0));
}

}  // namespace pform
