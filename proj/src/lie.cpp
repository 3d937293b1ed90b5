#include "rigidgeo/lie.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <omp.h>

namespace rigidgeo::lie {

// ---------------------------------------------------------------------------
// Matrix

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<ExactComplex>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r ? rows.front().size() : 0;
  Matrix m(r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw std::invalid_argument("Matrix::from_rows: ragged rows");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Vector Matrix::column(std::size_t c) const {
  Vector v(rows_);
  for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
  return v;
}

bool Matrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!((*this)(i, j) == (*this)(j, i))) return false;
  return true;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const ExactComplex& c) { return c.is_zero(); });
}

namespace {

// Row-reduces in place; returns pivot columns and the determinant sign/scale.
struct Echelon {
  std::vector<std::size_t> pivots;
  ExactComplex det_factor{1};
};

Echelon row_reduce(Matrix& m, Matrix* companion = nullptr, bool reduced = false) {
  Echelon e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t p = row;
    while (p < m.rows() && m(p, col).is_zero()) ++p;
    if (p == m.rows()) continue;
    if (p != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(p, c), m(row, c));
      if (companion)
        for (std::size_t c = 0; c < companion->cols(); ++c) std::swap((*companion)(p, c), (*companion)(row, c));
      e.det_factor = -e.det_factor;
    }
    const ExactComplex pivot = m(row, col);
    e.det_factor *= pivot;
    const ExactComplex inv = pivot.inverse();
    for (std::size_t c = 0; c < m.cols(); ++c) m(row, c) *= inv;
    if (companion)
      for (std::size_t c = 0; c < companion->cols(); ++c) (*companion)(row, c) *= inv;
    for (std::size_t r = reduced ? 0 : row + 1; r < m.rows(); ++r) {
      if (r == row || m(r, col).is_zero()) continue;
      const ExactComplex f = m(r, col);
      for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
      if (companion)
        for (std::size_t c = 0; c < companion->cols(); ++c) (*companion)(r, c) -= f * (*companion)(row, c);
    }
    e.pivots.push_back(col);
    ++row;
  }
  return e;
}

}  // namespace

ExactComplex Matrix::det() const {
  if (rows_ != cols_) throw std::invalid_argument("Matrix::det: not square");
  Matrix m = *this;
  const Echelon e = row_reduce(m);
  if (e.pivots.size() < rows_) return 0;
  return e.det_factor;
}

std::size_t Matrix::rank() const { return pivot_columns().size(); }

std::vector<std::size_t> Matrix::pivot_columns() const {
  Matrix m = *this;
  return row_reduce(m).pivots;
}

Matrix Matrix::inverse() const {
  if (rows_ != cols_) throw std::invalid_argument("Matrix::inverse: not square");
  Matrix m = *this;
  Matrix inv = identity(rows_);
  const Echelon e = row_reduce(m, &inv, true);
  if (e.pivots.size() < rows_) throw std::domain_error("Matrix::inverse: singular matrix");
  return inv;
}

Matrix Matrix::scaled(const ExactComplex& s) const {
  Matrix out = *this;
  for (auto& v : out.data_) v *= s;
  return out;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t r = 0; r < rows_; ++r) {
    os << (r ? "; " : "");
    for (std::size_t c = 0; c < cols_; ++c) os << (c ? ", " : "") << (*this)(r, c);
  }
  os << "]";
  return os.str();
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product: shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

// ---------------------------------------------------------------------------
// LieAlgebra

LieAlgebra::LieAlgebra(std::size_t dim, std::string name)
    : dim_(dim), name_(std::move(name)), c_(dim * dim * dim) {
  if (dim == 0) throw std::invalid_argument("LieAlgebra: dimension must be positive");
  for (std::size_t i = 0; i < dim; ++i) basis_names.push_back("X" + std::to_string(i + 1));
}

void LieAlgebra::set_bracket(std::size_t i, std::size_t j, std::size_t k, const ExactComplex& value) {
  if (i >= dim_ || j >= dim_ || k >= dim_) throw std::out_of_range("LieAlgebra::set_bracket");
  if (i == j && !value.is_zero()) throw std::invalid_argument("LieAlgebra: [X_i, X_i] must vanish");
  c_[(i * dim_ + j) * dim_ + k] = value;
  c_[(j * dim_ + i) * dim_ + k] = -value;
}

void LieAlgebra::set_raw(std::size_t i, std::size_t j, std::size_t k, const ExactComplex& value) {
  if (i >= dim_ || j >= dim_ || k >= dim_) throw std::out_of_range("LieAlgebra::set_raw");
  c_[(i * dim_ + j) * dim_ + k] = value;
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  Vector out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim_; ++j) {
      if (y[j].is_zero()) continue;
      const ExactComplex xy = x[i] * y[j];
      for (std::size_t k = 0; k < dim_; ++k) {
        const auto& c = structure_constant(i, j, k);
        if (!c.is_zero()) out[k] += xy * c;
      }
    }
  }
  return out;
}

Matrix LieAlgebra::ad(const Vector& x) const {
  Matrix m(dim_, dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    const Vector col = bracket(x, basis_vector(j));
    for (std::size_t k = 0; k < dim_; ++k) m(k, j) = col[k];
  }
  return m;
}

Vector LieAlgebra::basis_vector(std::size_t i) const {
  Vector v(dim_);
  v.at(i) = 1;
  return v;
}

bool LieAlgebra::is_abelian() const {
  return std::all_of(c_.begin(), c_.end(), [](const ExactComplex& c) { return c.is_zero(); });
}

ValidationReport validate(const LieAlgebra& a) {
  ValidationReport report;
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!(a.structure_constant(i, j, k) == -a.structure_constant(j, i, k)))
          report.antisymmetry_violations.push_back({i, j, k});

  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          ExactComplex s;
          for (std::size_t m = 0; m < n; ++m) {
            s += a.structure_constant(i, j, m) * a.structure_constant(m, k, l);
            s += a.structure_constant(j, k, m) * a.structure_constant(m, i, l);
            s += a.structure_constant(k, i, m) * a.structure_constant(m, j, l);
          }
          if (!s.is_zero()) report.jacobi_violations.push_back({i, j, k, l});
        }
  return report;
}

// ---------------------------------------------------------------------------
// Metrics

InvariantMetric InvariantMetric::make(Matrix g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw std::invalid_argument("metric must be a square matrix");
  if (!g.is_symmetric()) throw std::invalid_argument("metric must be symmetric");
  if (g.det().is_zero()) throw std::invalid_argument("metric is degenerate (det = 0)");
  return InvariantMetric(std::move(g));
}

ExactComplex InvariantMetric::operator()(const Vector& x, const Vector& y) const {
  ExactComplex s;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < dim(); ++j)
      if (!y[j].is_zero()) s += x[i] * g_(i, j) * y[j];
  }
  return s;
}

InvariantMetric InvariantMetric::scaled(const ExactComplex& lambda) const {
  if (lambda.is_zero()) throw std::invalid_argument("metric scale must be nonzero");
  return InvariantMetric(g_.scaled(lambda));
}

Matrix killing_form(const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  std::vector<Matrix> ads;
  for (std::size_t i = 0; i < n; ++i) ads.push_back(algebra.ad(algebra.basis_vector(i)));
  Matrix b(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Matrix p = ads[i] * ads[j];
      for (std::size_t k = 0; k < n; ++k) b(i, j) += p(k, k);
    }
  return b;
}

namespace {

Matrix int_matrix(std::initializer_list<std::initializer_list<long>> rows) {
  std::vector<std::vector<ExactComplex>> r;
  for (auto row : rows) r.emplace_back(row.begin(), row.end());
  return Matrix::from_rows(r);
}

}  // namespace

InvariantMetric flat_fixture(std::string_view name) {
  // Witnesses reproduced by tests/test_lie.cpp through flat_metric_search_serial.
  if (name == "heisenberg3") return InvariantMetric::make(int_matrix({{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}));
  if (name == "sol3") return InvariantMetric::make(int_matrix({{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}));
  throw std::invalid_argument("no flat fixture for '" + std::string(name) + "'");
}

const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names = {"abelian3", "heisenberg3", "sol3", "sl2"};
  return names;
}

Builtin builtin(std::string_view name) {
  if (name == "abelian3") {
    LieAlgebra a(3, "abelian3");
    return {a, InvariantMetric::make(Matrix::identity(3))};
  }
  if (name == "heisenberg3") {
    LieAlgebra a(3, "heisenberg3");
    a.set_bracket(0, 1, 2, 1);
    return {a, flat_fixture(name)};
  }
  if (name == "sol3") {
    LieAlgebra a(3, "sol3");
    a.set_bracket(0, 2, 0, 1);
    a.set_bracket(1, 2, 1, -1);
    return {a, flat_fixture(name)};
  }
  if (name == "sl2") {
    LieAlgebra a(3, "sl2");
    a.basis_names = {"H", "E", "F"};
    a.set_bracket(0, 1, 1, 2);
    a.set_bracket(0, 2, 2, -2);
    a.set_bracket(1, 2, 0, 1);
    return {a, InvariantMetric::make(killing_form(a))};
  }
  std::string valid;
  for (const auto& n : builtin_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw std::invalid_argument("unknown builtin algebra '" + std::string(name) + "' (valid: " + valid + ")");
}

// ---------------------------------------------------------------------------
// Connection and curvature

bool ConnectionOnBasis::is_zero() const {
  return std::all_of(g_.begin(), g_.end(), [](const ExactComplex& c) { return c.is_zero(); });
}

ConnectionOnBasis levi_civita(const LieAlgebra& algebra, const InvariantMetric& metric) {
  const std::size_t n = algebra.dim();
  if (metric.dim() != n) throw std::invalid_argument("levi_civita: metric dimension mismatch");
  const Matrix ginv = metric.matrix().inverse();

  // bracket_lower(i,j,l) = g([X_i,X_j], X_l)
  std::vector<ExactComplex> lower(n * n * n);
  auto at = [n](std::size_t i, std::size_t j, std::size_t l) { return (i * n + j) * n + l; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t m = 0; m < n; ++m)
          lower[at(i, j, l)] += algebra.structure_constant(i, j, m) * metric(m, l);

  const ExactComplex half = ExactComplex::rational(1, 2);
  ConnectionOnBasis conn(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        const ExactComplex koszul = half * (lower[at(i, j, l)] - lower[at(j, l, i)] + lower[at(l, i, j)]);
        if (koszul.is_zero()) continue;
        for (std::size_t k = 0; k < n; ++k) conn(i, j, k) += ginv(k, l) * koszul;
      }
  return conn;
}

bool is_torsion_free(const LieAlgebra& algebra, const ConnectionOnBasis& conn) {
  const std::size_t n = algebra.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        if (!(conn(i, j, k) - conn(j, i, k) == algebra.structure_constant(i, j, k))) return false;
  return true;
}

bool is_metric_compatible(const InvariantMetric& metric, const ConnectionOnBasis& conn) {
  const std::size_t n = conn.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        ExactComplex s;
        for (std::size_t m = 0; m < n; ++m) s += conn(i, j, m) * metric(m, k) + conn(i, k, m) * metric(j, m);
        if (!s.is_zero()) return false;
      }
  return true;
}

bool CurvatureTensor::is_zero() const {
  return std::all_of(r_.begin(), r_.end(), [](const ExactComplex& c) { return c.is_zero(); });
}

ExactComplex CurvatureTensor::apply(const Vector& x, const Vector& y, const Vector& u, const Vector& v) const {
  ExactComplex s;
  for (std::size_t i = 0; i < n_; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (y[j].is_zero()) continue;
      for (std::size_t k = 0; k < n_; ++k) {
        if (u[k].is_zero()) continue;
        const ExactComplex w = x[i] * y[j] * u[k];
        for (std::size_t l = 0; l < n_; ++l)
          if (!v[l].is_zero()) s += w * v[l] * (*this)(i, j, k, l);
      }
    }
  }
  return s;
}

CurvatureTensor curvature(const LieAlgebra& algebra, const InvariantMetric& metric, const ConnectionOnBasis& conn) {
  const std::size_t n = algebra.dim();
  // R^p_ijk with nabla_i nabla_j X_k = sum_m Gamma^m_jk Gamma^p_im X_p.
  std::vector<ExactComplex> up(n * n * n * n);
  auto at = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t p) {
    return ((i * n + j) * n + k) * n + p;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t p = 0; p < n; ++p) {
          ExactComplex s;
          for (std::size_t m = 0; m < n; ++m) {
            s += conn(j, k, m) * conn(i, m, p);
            s -= conn(i, k, m) * conn(j, m, p);
            s -= algebra.structure_constant(i, j, m) * conn(m, k, p);
          }
          up[at(i, j, k, p)] = s;
        }
  CurvatureTensor r(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          ExactComplex s;
          for (std::size_t p = 0; p < n; ++p) s += up[at(i, j, k, p)] * metric(p, l);
          r(i, j, k, l) = s;
        }
  return r;
}

CurvatureTensor curvature(const LieAlgebra& algebra, const InvariantMetric& metric) {
  return curvature(algebra, metric, levi_civita(algebra, metric));
}

bool has_curvature_symmetries(const CurvatureTensor& r) {
  const std::size_t n = r.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          if (!(r(i, j, k, l) == -r(j, i, k, l))) return false;
          if (!(r(i, j, k, l) == -r(i, j, l, k))) return false;
          if (!(r(i, j, k, l) == r(k, l, i, j))) return false;
          if (!(r(i, j, k, l) + r(j, k, i, l) + r(k, i, j, l)).is_zero()) return false;
        }
  return true;
}

ExactComplex sectional_curvature(const InvariantMetric& metric, const CurvatureTensor& r, const Vector& x,
                                 const Vector& y) {
  const ExactComplex gxy = metric(x, y);
  const ExactComplex den = metric(x, x) * metric(y, y) - gxy * gxy;
  if (den.is_zero()) throw std::domain_error("sectional_curvature: degenerate plane (g-null 2-plane)");
  return r.apply(x, y, y, x) / den;
}

std::optional<ExactComplex> is_constant_curvature(const InvariantMetric& metric, const CurvatureTensor& r) {
  const std::size_t n = r.dim();
  auto model = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return metric(i, l) * metric(j, k) - metric(i, k) * metric(j, l);
  };
  std::optional<ExactComplex> c;
  for (std::size_t i = 0; i < n && !c; ++i)
    for (std::size_t j = 0; j < n && !c; ++j)
      for (std::size_t k = 0; k < n && !c; ++k)
        for (std::size_t l = 0; l < n && !c; ++l) {
          const ExactComplex m = model(i, j, k, l);
          if (!m.is_zero()) c = r(i, j, k, l) / m;
        }
  if (!c) return r.is_zero() ? std::optional<ExactComplex>(ExactComplex()) : std::nullopt;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          if (!(r(i, j, k, l) == *c * model(i, j, k, l))) return std::nullopt;
  return c;
}

bool is_unimodular(const LieAlgebra& algebra) {
  for (std::size_t i = 0; i < algebra.dim(); ++i) {
    ExactComplex trace;
    for (std::size_t k = 0; k < algebra.dim(); ++k) trace += algebra.structure_constant(i, k, k);
    if (!trace.is_zero()) return false;
  }
  return true;
}

std::vector<Matrix> coframe_differentials(const LieAlgebra& algebra) {
  const std::size_t n = algebra.dim();
  std::vector<Matrix> out(n, Matrix(n, n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) out[i](j, k) = -algebra.structure_constant(j, k, i);
  return out;
}

TwoFormOnOrbit invariant_two_form(const LieAlgebra& algebra, const InvariantMetric& metric, const Vector& x) {
  if (metric(x, x).is_zero())
    throw std::invalid_argument("invariant_two_form: g(x, x) = 0; the orbit model needs a non-null vector");
  const Matrix adx = algebra.ad(x);
  const auto pivots = adx.pivot_columns();
  if (pivots.size() != 2)
    throw std::logic_error("invariant_two_form: orbit tangent space has dimension " +
                           std::to_string(pivots.size()) + ", expected 2");
  TwoFormOnOrbit out;
  for (auto p : pivots) out.tangent_basis.push_back(adx.column(p));
  out.form = Matrix(2, 2);
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      out.form(a, b) = -metric(x, algebra.bracket(out.tangent_basis[a], out.tangent_basis[b]));
  out.nondegenerate = !out.form.det().is_zero();
  return out;
}

// ---------------------------------------------------------------------------
// Structure-constant files

LieAlgebra read_structure_constants(std::istream& in, std::string name) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<LieAlgebra> algebra;
  std::map<std::array<std::size_t, 3>, ExactComplex> seen;
  auto fail = [&](const std::string& why) {
    return std::invalid_argument("structure constants line " + std::to_string(lineno) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first)) continue;
    if (!algebra) {
      long n = 0;
      if (first != "dim" || !(ls >> n) || n <= 0) throw fail("expected header 'dim n'");
      algebra.emplace(static_cast<std::size_t>(n), name);
      continue;
    }
    std::string sj, sk, sre, sim, extra;
    if (!(ls >> sj >> sk >> sre >> sim) || (ls >> extra)) throw fail("expected 'i j k value_re value_im'");
    long idx[3];
    try {
      idx[0] = std::stol(first);
      idx[1] = std::stol(sj);
      idx[2] = std::stol(sk);
    } catch (const std::exception&) {
      throw fail("indices must be integers");
    }
    const auto n = static_cast<long>(algebra->dim());
    for (long v : idx)
      if (v < 1 || v > n) throw fail("index out of range 1.." + std::to_string(n));
    const ExactComplex re = ExactComplex::parse(sre), im = ExactComplex::parse(sim);
    if (!re.is_real() || !im.is_real()) throw fail("value parts must be real rationals");
    const ExactComplex value = re + im * ExactComplex::imag_unit();
    const auto i = static_cast<std::size_t>(idx[0] - 1), j = static_cast<std::size_t>(idx[1] - 1),
               k = static_cast<std::size_t>(idx[2] - 1);
    if (i == j) {
      if (!value.is_zero()) throw fail("[X_i, X_i] must vanish");
      continue;
    }
    if (auto it = seen.find({i, j, k}); it != seen.end() && !(it->second == value))
      throw fail("conflicting duplicate entry");
    if (auto it = seen.find({j, i, k}); it != seen.end() && !(it->second == -value))
      throw fail("entry contradicts antisymmetry with an earlier line");
    seen[{i, j, k}] = value;
    algebra->set_bracket(i, j, k, value);
  }
  if (!algebra) throw std::invalid_argument("structure constants: missing 'dim n' header");
  return *algebra;
}

void write_structure_constants(std::ostream& out, const LieAlgebra& algebra) {
  out << "dim " << algebra.dim() << "\n";
  for (std::size_t i = 0; i < algebra.dim(); ++i)
    for (std::size_t j = i + 1; j < algebra.dim(); ++j)
      for (std::size_t k = 0; k < algebra.dim(); ++k) {
        const auto& c = algebra.structure_constant(i, j, k);
        if (c.is_zero()) continue;
        out << i + 1 << ' ' << j + 1 << ' ' << k + 1 << ' ' << c.re().get_str() << ' ' << c.im().get_str() << "\n";
      }
}

// ---------------------------------------------------------------------------
// Flat metric search

std::size_t flat_search_candidate_count(std::size_t dim, std::size_t value_count) {
  std::size_t count = 1;
  for (std::size_t e = 0; e < dim * (dim + 1) / 2; ++e) count *= value_count;
  return count;
}

namespace {

// Decodes candidate `index` into a symmetric matrix (upper triangle, row-major,
// most significant entry first).
Matrix candidate_matrix(std::size_t dim, const std::vector<long>& values, std::size_t index) {
  const std::size_t entries = dim * (dim + 1) / 2;
  std::vector<long> picked(entries);
  for (std::size_t e = entries; e-- > 0;) {
    picked[e] = values[index % values.size()];
    index /= values.size();
  }
  Matrix m(dim, dim);
  std::size_t e = 0;
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = i; j < dim; ++j) {
      m(i, j) = picked[e];
      m(j, i) = picked[e];
      ++e;
    }
  return m;
}

std::optional<InvariantMetric> flat_candidate(const LieAlgebra& algebra, const std::vector<long>& values,
                                              std::size_t index) {
  Matrix m = candidate_matrix(algebra.dim(), values, index);
  if (m.det().is_zero()) return std::nullopt;
  auto metric = InvariantMetric::make(std::move(m));
  if (!curvature(algebra, metric).is_zero()) return std::nullopt;
  return metric;
}

}  // namespace

std::vector<InvariantMetric> flat_metric_search_serial(const LieAlgebra& algebra, const std::vector<long>& values) {
  if (values.empty()) throw std::invalid_argument("flat search: empty value set");
  const std::size_t total = flat_search_candidate_count(algebra.dim(), values.size());
  std::vector<InvariantMetric> found;
  for (std::size_t idx = 0; idx < total; ++idx)
    if (auto m = flat_candidate(algebra, values, idx)) found.push_back(std::move(*m));
  return found;
}

std::vector<InvariantMetric> flat_metric_search_parallel(const LieAlgebra& algebra,
                                                         const std::vector<long>& values) {
  if (values.empty()) throw std::invalid_argument("flat search: empty value set");
  const auto total = static_cast<long long>(flat_search_candidate_count(algebra.dim(), values.size()));
  std::vector<std::vector<std::pair<long long, InvariantMetric>>> per_thread(
      static_cast<std::size_t>(omp_get_max_threads()));

#pragma omp parallel for schedule(dynamic, 16)
  for (long long idx = 0; idx < total; ++idx) {
    if (auto m = flat_candidate(algebra, values, static_cast<std::size_t>(idx)))
      per_thread[static_cast<std::size_t>(omp_get_thread_num())].emplace_back(idx, std::move(*m));
  }

  std::vector<std::pair<long long, InvariantMetric>> merged;
  for (auto& bucket : per_thread)
    for (auto& hit : bucket) merged.push_back(std::move(hit));
  std::sort(merged.begin(), merged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<InvariantMetric> found;
  found.reserve(merged.size());
  for (auto& [idx, m] : merged) found.push_back(std::move(m));
  return found;
}

}  // namespace rigidgeo::lie
