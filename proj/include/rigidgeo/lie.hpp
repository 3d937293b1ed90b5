#pragma once

// Left-invariant geometry on Lie groups, computed on the Lie algebra.
//
// Conventions (fixed once for the whole library):
//   [X_i, X_j] = sum_k C^k_ij X_k
//   nabla_{X_i} X_j = sum_k Gamma^k_ij X_k
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z
//   R_ijkl = g(R(X_i,X_j)X_k, X_l)
//   K(X,Y) = R(X,Y,Y,X) / (g(X,X)g(Y,Y) - g(X,Y)^2)
// Indices are 0-based in code; the structure-constant file format is 1-based.

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rigidgeo/exact.hpp"

namespace rigidgeo::lie {

using Vector = std::vector<ExactComplex>;

/// Dense matrix over the Gaussian rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<std::vector<ExactComplex>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  ExactComplex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const ExactComplex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  Vector column(std::size_t c) const;
  bool is_symmetric() const;
  bool is_zero() const;
  ExactComplex det() const;
  std::size_t rank() const;
  /// Indices of pivot columns; those columns form a basis of the column space.
  std::vector<std::size_t> pivot_columns() const;
  /// Throws std::domain_error when singular.
  Matrix inverse() const;
  Matrix scaled(const ExactComplex& s) const;
  std::string str() const;

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<ExactComplex> data_;
};

class LieAlgebra {
 public:
  explicit LieAlgebra(std::size_t dim, std::string name = {});

  std::size_t dim() const { return dim_; }
  const std::string& name() const { return name_; }
  std::vector<std::string> basis_names;

  /// C^k_ij.
  const ExactComplex& structure_constant(std::size_t i, std::size_t j, std::size_t k) const {
    return c_[(i * dim_ + j) * dim_ + k];
  }
  /// Sets [X_i, X_j] component k and the antisymmetric partner.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const ExactComplex& value);
  /// Sets a single constant without touching (j, i, k); lets tests build broken data.
  void set_raw(std::size_t i, std::size_t j, std::size_t k, const ExactComplex& value);

  Vector bracket(const Vector& x, const Vector& y) const;
  /// Matrix of ad_x in the basis: column j holds [x, X_j].
  Matrix ad(const Vector& x) const;
  Vector basis_vector(std::size_t i) const;
  bool is_abelian() const;

 private:
  std::size_t dim_;
  std::string name_;
  std::vector<ExactComplex> c_;
};

struct ValidationReport {
  std::vector<std::array<std::size_t, 3>> antisymmetry_violations;  ///< (i, j, k)
  std::vector<std::array<std::size_t, 4>> jacobi_violations;        ///< (i, j, k, l)
  bool valid() const { return antisymmetry_violations.empty() && jacobi_violations.empty(); }
};

ValidationReport validate(const LieAlgebra& algebra);

/// Symmetric nondegenerate bilinear form g_ij = g(X_i, X_j).
class InvariantMetric {
 public:
  /// Throws std::invalid_argument if not symmetric, not square, or singular.
  static InvariantMetric make(Matrix g);

  const Matrix& matrix() const { return g_; }
  std::size_t dim() const { return g_.rows(); }
  ExactComplex operator()(const Vector& x, const Vector& y) const;
  const ExactComplex& operator()(std::size_t i, std::size_t j) const { return g_(i, j); }
  InvariantMetric scaled(const ExactComplex& lambda) const;

 private:
  explicit InvariantMetric(Matrix g) : g_(std::move(g)) {}
  Matrix g_;
};

/// B(X,Y) = trace(ad X o ad Y).
Matrix killing_form(const LieAlgebra& algebra);

struct Builtin {
  LieAlgebra algebra;
  std::optional<InvariantMetric> metric;
};

/// The four simply connected unimodular 3-dimensional complex Lie algebras.
///   abelian3    all brackets zero; metric: identity
///   heisenberg3 [X1,X2] = X3; metric: stored flat witness
///   sol3        [X1,X3] = X1, [X2,X3] = -X2; metric: stored flat witness
///   sl2         basis (H,E,F), [H,E] = 2E, [H,F] = -2F, [E,F] = H; metric: Killing form
/// Throws std::invalid_argument on an unknown name.
Builtin builtin(std::string_view name);
const std::vector<std::string>& builtin_names();

/// Flat left-invariant metrics found by flat_metric_search over entries
/// {0, 1, -1} (in that order); the first witness in enumeration order.
InvariantMetric flat_fixture(std::string_view name);

/// Christoffel symbols on the invariant frame: Gamma(i,j,k) = Gamma^k_ij.
class ConnectionOnBasis {
 public:
  explicit ConnectionOnBasis(std::size_t n) : n_(n), g_(n * n * n) {}
  std::size_t dim() const { return n_; }
  ExactComplex& operator()(std::size_t i, std::size_t j, std::size_t k) { return g_[(i * n_ + j) * n_ + k]; }
  const ExactComplex& operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return g_[(i * n_ + j) * n_ + k];
  }
  bool is_zero() const;

 private:
  std::size_t n_;
  std::vector<ExactComplex> g_;
};

/// Koszul formula for invariant fields:
/// 2 g(nabla_i X_j, X_k) = g([X_i,X_j],X_k) - g([X_j,X_k],X_i) + g([X_k,X_i],X_j).
ConnectionOnBasis levi_civita(const LieAlgebra& algebra, const InvariantMetric& metric);

bool is_torsion_free(const LieAlgebra& algebra, const ConnectionOnBasis& conn);
bool is_metric_compatible(const InvariantMetric& metric, const ConnectionOnBasis& conn);

class CurvatureTensor {
 public:
  explicit CurvatureTensor(std::size_t n) : n_(n), r_(n * n * n * n) {}
  std::size_t dim() const { return n_; }
  ExactComplex& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return r_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  const ExactComplex& operator()(std::size_t i, std::size_t j, std::size_t k, std::size_t l) const {
    return r_[((i * n_ + j) * n_ + k) * n_ + l];
  }
  bool is_zero() const;
  /// Evaluates R(x, y, u, v) multilinearly.
  ExactComplex apply(const Vector& x, const Vector& y, const Vector& u, const Vector& v) const;

 private:
  std::size_t n_;
  std::vector<ExactComplex> r_;
};

CurvatureTensor curvature(const LieAlgebra& algebra, const InvariantMetric& metric, const ConnectionOnBasis& conn);
/// levi_civita followed by curvature.
CurvatureTensor curvature(const LieAlgebra& algebra, const InvariantMetric& metric);

/// Antisymmetry in both pairs, pair symmetry, first Bianchi.
bool has_curvature_symmetries(const CurvatureTensor& r);

/// Throws std::domain_error on a g-degenerate plane.
ExactComplex sectional_curvature(const InvariantMetric& metric, const CurvatureTensor& r, const Vector& x,
                                 const Vector& y);

/// Returns c iff R_ijkl = c (g_il g_jk - g_ik g_jl) for all indices.
std::optional<ExactComplex> is_constant_curvature(const InvariantMetric& metric, const CurvatureTensor& r);

/// trace(ad X_i) = 0 for every basis vector.
bool is_unimodular(const LieAlgebra& algebra);

/// Lie-Cartan: d omega_i(X_j, X_k) = -omega_i([X_j, X_k]). Entry (j, k) of element i.
std::vector<Matrix> coframe_differentials(const LieAlgebra& algebra);

struct TwoFormOnOrbit {
  std::vector<Vector> tangent_basis;  ///< basis of image(ad_x)
  Matrix form;                        ///< d omega(Y_a, Y_b) = -g(x, [Y_a, Y_b])
  bool nondegenerate = false;
};

/// Throws std::invalid_argument when g(x, x) = 0 and std::logic_error if the
/// orbit tangent space is not 2-dimensional.
TwoFormOnOrbit invariant_two_form(const LieAlgebra& algebra, const InvariantMetric& metric, const Vector& x);

// ---------------------------------------------------------------------------
// Structure-constant files: header "dim n", then "i j k re im" per nonzero C^k_ij.

/// Throws std::invalid_argument on malformed input or inconsistent duplicates.
LieAlgebra read_structure_constants(std::istream& in, std::string name = {});
void write_structure_constants(std::ostream& out, const LieAlgebra& algebra);

// ---------------------------------------------------------------------------
// Flat metric search: every symmetric matrix with entries drawn from `values`
// (upper triangle, row-major, in the order given), keeping nondegenerate
// candidates with identically zero curvature. Both variants return the same
// witnesses in the same order.

std::size_t flat_search_candidate_count(std::size_t dim, std::size_t value_count);
std::vector<InvariantMetric> flat_metric_search_serial(const LieAlgebra& algebra, const std::vector<long>& values);
std::vector<InvariantMetric> flat_metric_search_parallel(const LieAlgebra& algebra, const std::vector<long>& values);

}  // namespace rigidgeo::lie
