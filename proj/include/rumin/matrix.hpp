#pragma once

#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "rumin/scalar.hpp"

namespace rumin {

using Vector = std::vector<Scalar>;

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<Scalar>> rows);

  static Matrix identity(std::size_t n);
  static Matrix from_columns(const std::vector<Vector>& cols, std::size_t ambient);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Vector column(std::size_t j) const;
  Vector row(std::size_t i) const;

  Matrix operator*(const Matrix& o) const;
  Vector operator*(const Vector& v) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Scalar& s) const;
  Matrix& operator+=(const Matrix& o);

  Matrix transpose() const;
  Matrix conj() const;
  Matrix adjoint() const;  // conjugate transpose

  bool is_zero() const;
  friend bool operator==(const Matrix& a, const Matrix& b);
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

  std::string str() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> a_;
};

struct Echelon {
  Matrix reduced;                   // reduced row echelon form
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

Echelon rref(const Matrix& a);
std::size_t rank(const Matrix& a);
// Free columns in increasing order; x_free = 1, pivots solved.
std::vector<Vector> kernel_basis(const Matrix& a);
// Pivot columns of a, i.e. a basis of the column space drawn from a's own columns.
std::vector<Vector> image_basis(const Matrix& a);
// Some x with a x = b.  With assert_unique the kernel must vanish.
Vector solve(const Matrix& a, const Vector& b, bool assert_unique = false);
Matrix inverse(const Matrix& a);

// Projection onto span(basis), orthogonal for <x,y> = y^* G x.
Matrix gram_orthogonal_projection(const std::vector<Vector>& basis, const Matrix& gram);

// Hermitian positive (semi)definiteness by exact symmetric elimination.
bool is_positive_definite(const Matrix& h);
bool is_positive_semidefinite(const Matrix& h);

// Vector helpers
bool is_zero(const Vector& v);
Vector conj(const Vector& v);
Vector scaled(const Vector& v, const Scalar& s);
Vector add(const Vector& a, const Vector& b);
Vector sub(const Vector& a, const Vector& b);
// Rank of a family of vectors of a common length.
std::size_t rank_of(const std::vector<Vector>& vs, std::size_t ambient);
// Whether v lies in span(vs).
bool in_span(const std::vector<Vector>& vs, const Vector& v, std::size_t ambient);
// Basis of span(a) ∩ span(b).
std::vector<Vector> intersect_spans(const std::vector<Vector>& a, const std::vector<Vector>& b,
                                    std::size_t ambient);
// Independent subfamily, greedy in order.
std::vector<Vector> independent_subset(const std::vector<Vector>& vs, std::size_t ambient);

}  // namespace rumin
