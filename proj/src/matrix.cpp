#include "rumin/matrix.hpp"

#include <sstream>

#include "rumin/errors.hpp"

namespace rumin {

Matrix::Matrix(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  a_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw DimensionMismatch("ragged initializer");
    for (const auto& x : r) a_.push_back(x);
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::from_columns(const std::vector<Vector>& cols, std::size_t ambient) {
  Matrix m(ambient, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != ambient) throw DimensionMismatch("column length");
    for (std::size_t i = 0; i < ambient; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vector Matrix::column(std::size_t j) const {
  Vector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
  return v;
}

Vector Matrix::row(std::size_t i) const {
  return Vector(a_.begin() + i * cols_, a_.begin() + (i + 1) * cols_);
}

Matrix Matrix::operator*(const Matrix& o) const {
  if (cols_ != o.rows_) throw DimensionMismatch("matrix product");
  Matrix m(rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& x = (*this)(i, k);
      if (x.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j)
        if (!o(k, j).is_zero()) m(i, j) += x * o(k, j);
    }
  return m;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.size()) throw DimensionMismatch("matrix-vector product");
  Vector out(rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k)
      if (!v[k].is_zero() && !(*this)(i, k).is_zero()) out[i] += (*this)(i, k) * v[k];
  return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
  Matrix m = *this;
  return m += o;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix sum");
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

Matrix Matrix::operator-(const Matrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionMismatch("matrix difference");
  Matrix m = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) m.a_[i] -= o.a_[i];
  return m;
}

Matrix Matrix::operator*(const Scalar& s) const {
  Matrix m = *this;
  for (auto& x : m.a_) x *= s;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

Matrix Matrix::conj() const {
  Matrix m = *this;
  for (auto& x : m.a_) x = x.conj();
  return m;
}

Matrix Matrix::adjoint() const { return transpose().conj(); }

bool Matrix::is_zero() const {
  for (const auto& x : a_)
    if (!x.is_zero()) return false;
  return true;
}

bool operator==(const Matrix& a, const Matrix& b) {
  return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
}

std::string Matrix::str() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    os << (i ? ", [" : "[");
    for (std::size_t j = 0; j < cols_; ++j) os << (j ? ", " : "") << (*this)(i, j).str();
    os << "]";
  }
  os << "]";
  return os.str();
}

Echelon rref(const Matrix& a) {
  Echelon e{a, {}};
  Matrix& m = e.reduced;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
    if (piv == m.rows()) continue;
    if (piv != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Scalar inv = m(r, c).inverse();
    for (std::size_t j = c; j < m.cols(); ++j)
      if (!m(r, j).is_zero()) m(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar f = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j)
        if (!m(r, j).is_zero()) m(i, j) -= f * m(r, j);
    }
    e.pivots.push_back(c);
    ++r;
  }
  return e;
}

std::size_t rank(const Matrix& a) { return rref(a).pivots.size(); }

std::vector<Vector> kernel_basis(const Matrix& a) {
  Echelon e = rref(a);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : e.pivots) is_pivot[p] = true;
  std::vector<Vector> out;
  for (std::size_t f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    Vector x(a.cols());
    x[f] = 1;
    for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = -e.reduced(r, f);
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<Vector> image_basis(const Matrix& a) {
  std::vector<Vector> out;
  for (auto p : rref(a).pivots) out.push_back(a.column(p));
  return out;
}

Vector solve(const Matrix& a, const Vector& b, bool assert_unique) {
  if (b.size() != a.rows()) throw DimensionMismatch("solve right-hand side");
  Matrix aug(a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  Echelon e = rref(aug);
  if (!e.pivots.empty() && e.pivots.back() == a.cols()) throw InconsistentSystem();
  if (assert_unique && e.pivots.size() != a.cols()) throw NonUniqueSolution();
  Vector x(a.cols());
  for (std::size_t r = 0; r < e.pivots.size(); ++r) x[e.pivots[r]] = e.reduced(r, a.cols());
  return x;
}

Matrix inverse(const Matrix& a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("inverse of non-square matrix");
  std::size_t n = a.rows();
  Matrix aug(n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = 1;
  }
  Echelon e = rref(aug);
  if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) throw NonUniqueSolution("singular matrix");
  Matrix inv(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
  return inv;
}

Matrix gram_orthogonal_projection(const std::vector<Vector>& basis, const Matrix& gram) {
  std::size_t m = gram.rows();
  if (basis.empty()) return Matrix(m, m);
  Matrix b = Matrix::from_columns(basis, m);
  Matrix bstar_g = b.adjoint() * gram;
  Matrix restricted = bstar_g * b;
  Matrix rinv;
  try {
    rinv = inverse(restricted);
  } catch (const NonUniqueSolution&) {
    throw DegenerateGram();
  }
  return b * (rinv * bstar_g);
}

namespace {

// Hermitian congruence diagonalization; returns diagonal entries (all real).
// Fails (returns false) when a zero pivot has a nonzero off-diagonal row.
bool hermitian_diagonal(Matrix m, std::vector<mpq_class>& diag) {
  std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k) {
    if (!m(k, k).is_real()) return false;
    if (m(k, k).is_zero()) {
      for (std::size_t j = k + 1; j < n; ++j)
        if (!m(k, j).is_zero()) return false;
      diag.push_back(0);
      continue;
    }
    diag.push_back(m(k, k).re);
    Scalar inv = m(k, k).inverse();
    for (std::size_t i = k + 1; i < n; ++i) {
      if (m(i, k).is_zero()) continue;
      Scalar f = m(i, k) * inv;
      for (std::size_t j = k; j < n; ++j) m(i, j) -= f * m(k, j);
      for (std::size_t j = k; j < n; ++j) m(j, i) -= f.conj() * m(j, k);
    }
  }
  return true;
}

}  // namespace

bool is_positive_definite(const Matrix& h) {
  if (h.rows() != h.cols() || h != h.adjoint()) return false;
  std::vector<mpq_class> diag;
  if (!hermitian_diagonal(h, diag)) return false;
  for (const auto& d : diag)
    if (sgn(d) <= 0) return false;
  return true;
}

bool is_positive_semidefinite(const Matrix& h) {
  if (h.rows() != h.cols() || h != h.adjoint()) return false;
  std::vector<mpq_class> diag;
  if (!hermitian_diagonal(h, diag)) return false;
  for (const auto& d : diag)
    if (sgn(d) < 0) return false;
  return true;
}

bool is_zero(const Vector& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vector conj(const Vector& v) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].conj();
  return out;
}

Vector scaled(const Vector& v, const Scalar& s) {
  Vector out = v;
  for (auto& x : out) x *= s;
  return out;
}

Vector add(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector sum");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] += b[i];
  return out;
}

Vector sub(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw DimensionMismatch("vector difference");
  Vector out = a;
  for (std::size_t i = 0; i < a.size(); ++i) out[i] -= b[i];
  return out;
}

std::size_t rank_of(const std::vector<Vector>& vs, std::size_t ambient) {
  if (vs.empty()) return 0;
  return rank(Matrix::from_columns(vs, ambient));
}

bool in_span(const std::vector<Vector>& vs, const Vector& v, std::size_t ambient) {
  if (is_zero(v)) return true;
  if (vs.empty()) return false;
  try {
    solve(Matrix::from_columns(vs, ambient), v);
    return true;
  } catch (const InconsistentSystem&) {
    return false;
  }
}

std::vector<Vector> intersect_spans(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                    std::size_t ambient) {
  if (a.empty() || b.empty()) return {};
  // x in ker [A | -B]  gives A x_a = B x_b.
  Matrix m(ambient, a.size() + b.size());
  for (std::size_t j = 0; j < a.size(); ++j)
    for (std::size_t i = 0; i < ambient; ++i) m(i, j) = a[j][i];
  for (std::size_t j = 0; j < b.size(); ++j)
    for (std::size_t i = 0; i < ambient; ++i) m(i, a.size() + j) = -b[j][i];
  std::vector<Vector> raw;
  for (const auto& k : kernel_basis(m)) {
    Vector v(ambient);
    for (std::size_t j = 0; j < a.size(); ++j)
      if (!k[j].is_zero())
        for (std::size_t i = 0; i < ambient; ++i) v[i] += k[j] * a[j][i];
    raw.push_back(std::move(v));
  }
  return independent_subset(raw, ambient);
}

std::vector<Vector> independent_subset(const std::vector<Vector>& vs, std::size_t ambient) {
  if (vs.empty()) return {};
  std::vector<Vector> out;
  for (auto p : rref(Matrix::from_columns(vs, ambient)).pivots) out.push_back(vs[p]);
  return out;
}

}  // namespace rumin
