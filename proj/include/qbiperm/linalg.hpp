#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qbiperm {

using Complex = std::complex<double>;

/// Dense complex matrix, row-major.
///
/// Zero-dimensional shapes (0 x n, n x 0) are ordinary values: they are the
/// morphisms out of / into the initial object, e.g. the empty isometry 0 -> n.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  /// Matrix unit E_{ab} of shape n x n.
  static Matrix unit(std::size_t n, std::size_t a, std::size_t b);
  static Matrix diagonal(std::span<const Complex> diag);
  static Matrix from_rows(std::initializer_list<std::initializer_list<Complex>> rows);
  /// n x 1 column vector.
  static Matrix column_vector(std::span<const Complex> entries);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  Complex& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Complex& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Complex> data() const noexcept { return data_; }
  std::span<Complex> data() noexcept { return data_; }

  Matrix adjoint() const;
  Matrix transpose() const;
  Matrix conj() const;
  Complex trace() const;
  double frobenius_norm() const;

  Matrix block(std::size_t row0, std::size_t col0, std::size_t nrows,
               std::size_t ncols) const;
  void set_block(std::size_t row0, std::size_t col0, const Matrix& b);
  Matrix column(std::size_t j) const;

  Matrix& operator+=(const Matrix& rhs);
  Matrix& operator-=(const Matrix& rhs);
  Matrix& operator*=(Complex s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(Complex s, Matrix a);

/// Kronecker product with (a (x) b)_{i*p+k, j*q+l} = a_{ij} b_{kl}: the left
/// factor is the outer index. Every tensor layout in the library follows this.
Matrix kron(const Matrix& a, const Matrix& b);

/// Block diagonal [[a, 0], [0, b]].
Matrix direct_sum(const Matrix& a, const Matrix& b);

double frobenius_distance(const Matrix& a, const Matrix& b);

bool is_hermitian(const Matrix& h, double tol);
bool is_isometry(const Matrix& v, double tol);
bool is_unitary(const Matrix& u, double tol);

/// Completes the orthonormal columns of `v` to an n x n unitary whose first
/// m columns equal `v`. Candidates are standard basis vectors in index order.
Matrix extend_to_unitary(const Matrix& v);

struct EigenSystem {
  std::vector<double> values;  // descending
  Matrix vectors;              // columns, matching `values`
};

/// Cyclic complex Jacobi on a Hermitian matrix.
EigenSystem hermitian_eigensystem(const Matrix& h);

/// Largest singular value (0 for empty shapes).
double spectral_norm(const Matrix& a);

/// Orthonormal basis (as columns) of the range of a Hermitian PSD matrix,
/// keeping eigenvalues above rel * lambda_max.
Matrix range_basis(const Matrix& h, double rel);

/// Permutation matrix P with P e_{src} = e_{perm[src]}.
Matrix permutation_matrix(std::span<const std::size_t> perm);

}  // namespace qbiperm
