#include "pform/lattice.hpp"

#include <bit>
#include <cstdlib>
#include <string>

namespace pform {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::degree_mismatch: return "degree_mismatch";
    case ErrorCode::cfl_violation: return "cfl_violation";
    case ErrorCode::topological_obstruction: return "topological_obstruction";
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::solver_failure: return "solver_failure";
    case ErrorCode::mode_leakage: return "mode_leakage";
    case ErrorCode::amplitude_guard: return "amplitude_guard";
    case ErrorCode::config: return "config";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

namespace {

std::size_t ipow(std::size_t b, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

// Sorted axis lists of size p in lexicographic order, encoded as bit masks.
std::vector<unsigned> axis_subsets(int d, int p) {
  std::vector<unsigned> out;
  std::vector<int> idx(p);
  for (int i = 0; i < p; ++i) idx[i] = i;
  if (p == 0) return {0u};
  while (true) {
    unsigned mask = 0;
    for (int a : idx) mask |= 1u << a;
    out.push_back(mask);
    int i = p - 1;
    while (i >= 0 && idx[i] == d - p + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < p; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

}  // namespace

std::shared_ptr<const CubicalComplex> CubicalComplex::build(int dim, int resolution,
                                                            std::vector<double> lengths) {
  require(dim >= 1 && dim <= 3, ErrorCode::invalid_argument,
          "dimension must be in 1..3, got " + std::to_string(dim));
  require(resolution >= 2, ErrorCode::invalid_argument,
          "resolution must be >= 2, got " + std::to_string(resolution));
  require(static_cast<int>(lengths.size()) == dim, ErrorCode::invalid_argument,
          "expected one side length per axis");
  for (double l : lengths)
    require(l > 0.0, ErrorCode::invalid_argument, "side lengths must be positive");

  std::shared_ptr<CubicalComplex> c(new CubicalComplex());
  c->dim_ = dim;
  c->n_ = resolution;
  c->lengths_ = std::move(lengths);
  c->vertices_ = ipow(resolution, dim);
  c->axis_sets_.resize(dim + 1);
  c->set_rank_.assign(dim + 1, std::vector<int>(1u << dim, -1));
  for (int p = 0; p <= dim; ++p) {
    c->axis_sets_[p] = axis_subsets(dim, p);
    for (std::size_t r = 0; r < c->axis_sets_[p].size(); ++r)
      c->set_rank_[p][c->axis_sets_[p][r]] = static_cast<int>(r);
  }

  for (int p = 0; p < dim; ++p) {
    const std::size_t rows = c->cell_count(p + 1);
    const std::size_t cols = c->cell_count(p);
    std::vector<Eigen::Triplet<int>> trips;
    trips.reserve(rows * 2 * (p + 1));
    for (std::size_t r = 0; r < rows; ++r) {
      const Cell cell = c->cell(p + 1, r);
      int j = 0;
      for (int a = 0; a < dim; ++a) {
        if (!(cell.axes & (1u << a))) continue;
        const int sign = (j % 2 == 0) ? 1 : -1;
        const unsigned face = cell.axes & ~(1u << a);
        auto shifted = cell.base;
        shifted[a] = (shifted[a] + 1) % resolution;
        trips.emplace_back(static_cast<int>(r), static_cast<int>(c->index_of(p, face, shifted)),
                           sign);
        trips.emplace_back(static_cast<int>(r), static_cast<int>(c->index_of(p, face, cell.base)),
                           -sign);
        ++j;
      }
    }
    IntSparseMatrix inc(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    inc.setFromTriplets(trips.begin(), trips.end());
    inc.makeCompressed();
    c->incidence_.push_back(inc);
    c->cobound_.push_back(inc.cast<double>());
  }
  return c;
}

std::size_t CubicalComplex::cell_count(int p) const {
  if (p < 0 || p > dim_) return 0;
  return axis_sets_[p].size() * vertices_;
}

std::size_t CubicalComplex::vertex_index(std::array<int, 3> x) const {
  std::size_t v = 0;
  for (int a = 0; a < dim_; ++a) {
    int xa = x[a] % n_;
    if (xa < 0) xa += n_;
    v = v * n_ + static_cast<std::size_t>(xa);
  }
  return v;
}

std::array<int, 3> CubicalComplex::vertex_coord(std::size_t v) const {
  std::array<int, 3> x{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    x[a] = static_cast<int>(v % n_);
    v /= n_;
  }
  return x;
}

CubicalComplex::Cell CubicalComplex::cell(int p, std::size_t index) const {
  require(index < cell_count(p), ErrorCode::invalid_argument, "cell index out of range");
  Cell c;
  c.axes = axis_sets_[p][index / vertices_];
  c.base = vertex_coord(index % vertices_);
  return c;
}

std::size_t CubicalComplex::index_of(int p, unsigned axes,
                                     const std::array<int, 3>& base) const {
  const int rank = set_rank_[p][axes];
  require(rank >= 0, ErrorCode::invalid_argument, "axis set does not match degree");
  return static_cast<std::size_t>(rank) * vertices_ + vertex_index(base);
}

int CubicalComplex::vertex_distance(std::size_t u, std::size_t v) const {
  const auto a = vertex_coord(u);
  const auto b = vertex_coord(v);
  int dist = 0;
  for (int i = 0; i < dim_; ++i) {
    const int diff = std::abs(a[i] - b[i]);
    dist += std::min(diff, n_ - diff);
  }
  return dist;
}

Cochain::Cochain(ComplexPtr c, int p)
    : complex(std::move(c)), degree(p),
      values(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(complex->cell_count(p)))) {}

Cochain::Cochain(ComplexPtr c, int p, Eigen::VectorXd v)
    : complex(std::move(c)), degree(p), values(std::move(v)) {
  require(static_cast<std::size_t>(values.size()) == complex->cell_count(p),
          ErrorCode::invalid_argument, "cochain value count does not match cell count");
}

void check_compatible(const Cochain& a, const Cochain& b, const char* what) {
  require(a.complex == b.complex, ErrorCode::invalid_argument,
          std::string(what) + ": cochains live on different complexes");
  require(a.degree == b.degree, ErrorCode::degree_mismatch,
          std::string(what) + ": degree " + std::to_string(a.degree) + " vs " +
              std::to_string(b.degree));
}

Cochain& Cochain::operator+=(const Cochain& o) {
  check_compatible(*this, o, "add");
  values += o.values;
  return *this;
}

Cochain& Cochain::operator-=(const Cochain& o) {
  check_compatible(*this, o, "subtract");
  values -= o.values;
  return *this;
}

Cochain& Cochain::operator*=(double s) {
  values *= s;
  return *this;
}

Cochain operator+(Cochain a, const Cochain& b) { return a += b; }
Cochain operator-(Cochain a, const Cochain& b) { return a -= b; }
Cochain operator*(double s, Cochain a) { return a *= s; }
Cochain operator-(Cochain a) {
  a.values = -a.values;
  return a;
}

Cochain coboundary(const Cochain& u) {
  const int d = u.complex->dim();
  require(u.degree >= 0 && u.degree < d, ErrorCode::degree_mismatch,
          "coboundary needs 0 <= p < d, got p = " + std::to_string(u.degree));
  return Cochain(u.complex, u.degree + 1, u.complex->coboundary_matrix(u.degree) * u.values);
}

Cochain coboundary_or_empty(const Cochain& u) {
  if (u.degree < 0 || u.degree >= u.complex->dim()) return Cochain(u.complex, u.degree + 1);
  return coboundary(u);
}

}  // namespace pform
