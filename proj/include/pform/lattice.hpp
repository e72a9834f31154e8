#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "pform/error.hpp"

namespace pform {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using IntSparseMatrix = Eigen::SparseMatrix<int, Eigen::RowMajor>;

/// Periodic cubical complex on the d-torus with N cells per axis.
///
/// A p-cell is a pair (axis set S with |S| = p, base vertex x in Z_N^d) and
/// spans x + [0,1]^S. Cells of one degree are ordered lexicographically by
/// axis set and then by base coordinate (axis 0 most significant). Edges
/// point toward increasing coordinate; the boundary of a (p+1)-cell is
///   sum_j (-1)^j [ (S \ a_j, x + e_{a_j}) - (S \ a_j, x) ].
/// Periodic identification lives in the incidence tables.
class CubicalComplex {
 public:
  struct Cell {
    unsigned axes = 0;  // bit i set <=> axis i spans the cell
    std::array<int, 3> base{0, 0, 0};
  };

  static std::shared_ptr<const CubicalComplex> build(int dim, int resolution,
                                                     std::vector<double> lengths);

  int dim() const { return dim_; }
  int resolution() const { return n_; }
  const std::vector<double>& lengths() const { return lengths_; }
  double spacing(int axis) const { return lengths_[axis] / n_; }

  /// C(d,p) * N^d for 0 <= p <= d, zero otherwise.
  std::size_t cell_count(int p) const;
  std::size_t vertex_count() const { return vertices_; }

  Cell cell(int p, std::size_t index) const;
  std::size_t index_of(int p, unsigned axes, const std::array<int, 3>& base) const;
  const std::vector<unsigned>& axis_sets(int p) const { return axis_sets_[p]; }

  /// Coboundary matrix C^p -> C^{p+1}, rows indexed by (p+1)-cells.
  /// Valid for 0 <= p < d.
  const SparseMatrix& coboundary_matrix(int p) const { return cobound_[p]; }
  const IntSparseMatrix& incidence(int p) const { return incidence_[p]; }

  /// Maps a base coordinate to its linear vertex index (wraps periodically).
  std::size_t vertex_index(std::array<int, 3> x) const;
  std::array<int, 3> vertex_coord(std::size_t v) const;

  /// Minimal graph distance between two vertices on the periodic lattice.
  int vertex_distance(std::size_t u, std::size_t v) const;

 private:
  CubicalComplex() = default;

  int dim_ = 0;
  int n_ = 0;
  std::vector<double> lengths_;
  std::size_t vertices_ = 0;
  std::vector<std::vector<unsigned>> axis_sets_;
  std::vector<std::vector<int>> set_rank_;  // axis mask -> position in axis_sets_
  std::vector<IntSparseMatrix> incidence_;
  std::vector<SparseMatrix> cobound_;
};

using ComplexPtr = std::shared_ptr<const CubicalComplex>;

/// Real value per oriented p-cell. Degrees -1 and d+1 are allowed and empty,
/// standing in for the zero spaces at either end of the cochain complex.
struct Cochain {
  ComplexPtr complex;
  int degree = 0;
  Eigen::VectorXd values;

  Cochain() = default;
  Cochain(ComplexPtr c, int p);
  Cochain(ComplexPtr c, int p, Eigen::VectorXd v);

  std::size_t size() const { return static_cast<std::size_t>(values.size()); }
  bool empty() const { return values.size() == 0; }

  Cochain& operator+=(const Cochain& o);
  Cochain& operator-=(const Cochain& o);
  Cochain& operator*=(double s);
};

Cochain operator+(Cochain a, const Cochain& b);
Cochain operator-(Cochain a, const Cochain& b);
Cochain operator*(double s, Cochain a);
Cochain operator-(Cochain a);

void check_compatible(const Cochain& a, const Cochain& b, const char* what);

/// Signed sum over facets; raises the degree by one. Rejects p = d.
Cochain coboundary(const Cochain& u);

/// Same as coboundary but maps the top degree to the empty (d+1)-cochain.
/// Used by the spacetime calculus where d of a top spatial form vanishes.
Cochain coboundary_or_empty(const Cochain& u);

}  // namespace pform
