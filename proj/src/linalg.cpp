#include "qbiperm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qbiperm/error.hpp"
#include "qbiperm/tolerance.hpp"

namespace qbiperm {

namespace {

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    fail(ErrorKind::ShapeError, "matrix entry count " + std::to_string(data_.size()) +
                                    " does not match " + std::to_string(rows) + "x" +
                                    std::to_string(cols));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::unit(std::size_t n, std::size_t a, std::size_t b) {
  Matrix m(n, n);
  m(a, b) = 1.0;
  return m;
}

Matrix Matrix::diagonal(std::span<const Complex> diag) {
  Matrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.begin()->size();
  std::vector<Complex> entries;
  entries.reserve(r * c);
  for (const auto& row : rows) {
    if (row.size() != c) fail(ErrorKind::ShapeError, "ragged matrix literal");
    entries.insert(entries.end(), row.begin(), row.end());
  }
  return {r, c, std::move(entries)};
}

Matrix Matrix::column_vector(std::span<const Complex> entries) {
  return {entries.size(), 1, std::vector<Complex>(entries.begin(), entries.end())};
}

Matrix Matrix::adjoint() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

Matrix Matrix::transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

Matrix Matrix::conj() const {
  Matrix out = *this;
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

Complex Matrix::trace() const {
  if (!is_square()) fail(ErrorKind::ShapeError, "trace of non-square " + shape(*this));
  Complex t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

Matrix Matrix::block(std::size_t row0, std::size_t col0, std::size_t nrows,
                     std::size_t ncols) const {
  if (row0 + nrows > rows_ || col0 + ncols > cols_) {
    fail(ErrorKind::ShapeError, "block out of range of " + shape(*this));
  }
  Matrix out(nrows, ncols);
  for (std::size_t i = 0; i < nrows; ++i)
    for (std::size_t j = 0; j < ncols; ++j) out(i, j) = (*this)(row0 + i, col0 + j);
  return out;
}

void Matrix::set_block(std::size_t row0, std::size_t col0, const Matrix& b) {
  if (row0 + b.rows() > rows_ || col0 + b.cols() > cols_) {
    fail(ErrorKind::ShapeError, "block " + shape(b) + " does not fit in " + shape(*this));
  }
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(row0 + i, col0 + j) = b(i, j);
}

Matrix Matrix::column(std::size_t j) const { return block(0, j, rows_, 1); }

Matrix& Matrix::operator+=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    fail(ErrorKind::ShapeError, "cannot add " + shape(*this) + " and " + shape(rhs));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& rhs) {
  if (rows_ != rhs.rows_ || cols_ != rhs.cols_) {
    fail(ErrorKind::ShapeError, "cannot subtract " + shape(rhs) + " from " + shape(*this));
  }
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= rhs.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(Complex s) {
  for (auto& z : data_) z *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Complex s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    fail(ErrorKind::ShapeError, "cannot multiply " + shape(a) + " by " + shape(b));
  }
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

double frobenius_distance(const Matrix& a, const Matrix& b) { return (a - b).frobenius_norm(); }

bool is_hermitian(const Matrix& h, double tol) {
  return h.is_square() && frobenius_distance(h, h.adjoint()) <= tol;
}

bool is_isometry(const Matrix& v, double tol) {
  return v.cols() <= v.rows() &&
         frobenius_distance(v.adjoint() * v, Matrix::identity(v.cols())) <= tol;
}

bool is_unitary(const Matrix& u, double tol) { return u.is_square() && is_isometry(u, tol); }

Matrix extend_to_unitary(const Matrix& v) {
  const std::size_t n = v.rows();
  const std::size_t m = v.cols();
  if (m > n) {
    fail(ErrorKind::ShapeError, "cannot extend " + shape(v) + " to a unitary: more columns than rows");
  }
  const double defect = frobenius_distance(v.adjoint() * v, Matrix::identity(m));
  if (defect > tol::kStructural) {
    fail(ErrorKind::NotIsometry,
         "columns are not orthonormal (||V*V - I||_F = " + std::to_string(defect) + ")");
  }

  std::vector<std::vector<Complex>> basis;
  basis.reserve(n);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<Complex> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = v(i, j);
    basis.push_back(std::move(col));
  }

  auto project_out = [&](std::vector<Complex>& w) {
    for (const auto& u : basis) {
      Complex dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(u[i]) * w[i];
      for (std::size_t i = 0; i < n; ++i) w[i] -= dot * u[i];
    }
  };
  auto norm = [&](const std::vector<Complex>& w) {
    double s = 0.0;
    for (const auto& z : w) s += std::norm(z);
    return std::sqrt(s);
  };

  for (std::size_t k = 0; k < n && basis.size() < n; ++k) {
    std::vector<Complex> w(n);
    w[k] = 1.0;
    project_out(w);
    if (norm(w) < tol::kGramSchmidtSkip) continue;
    project_out(w);  // second pass restores orthogonality lost to rounding
    const double len = norm(w);
    for (auto& z : w) z /= len;
    basis.push_back(std::move(w));
  }
  if (basis.size() != n) {
    fail(ErrorKind::IllConditioned, "Gram-Schmidt ran out of candidate vectors");
  }

  Matrix u(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) = basis[j][i];
  return u;
}

EigenSystem hermitian_eigensystem(const Matrix& h) {
  if (!h.is_square()) fail(ErrorKind::ShapeError, "eigensystem of non-square " + shape(h));
  const std::size_t n = h.rows();
  const double scale = h.frobenius_norm();
  if (frobenius_distance(h, h.adjoint()) > tol::kStructural * std::max(1.0, scale)) {
    fail(ErrorKind::NotHermitian, "matrix is not Hermitian");
  }

  Matrix a = 0.5 * (h + h.adjoint());
  Matrix q = Matrix::identity(n);

  auto off_diagonal = [&] {
    double s = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = p + 1; r < n; ++r) s += std::norm(a(p, r));
    return std::sqrt(s);
  };

  const double target = 1e-15 * std::max(scale, 1e-300);
  for (int sweep = 0; sweep < 100 && off_diagonal() > target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const Complex apr = a(p, r);
        const double mag = std::abs(apr);
        if (mag < 1e-300) continue;
        const Complex phase = apr / mag;
        const double tau = (a(r, r).real() - a(p, p).real()) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]] acting on (p, r).
        const Complex gpp = c;
        const Complex gpr = s;
        const Complex grp = -s * std::conj(phase);
        const Complex grr = c * std::conj(phase);

        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akr = a(k, r);
          a(k, p) = akp * gpp + akr * grp;
          a(k, r) = akp * gpr + akr * grr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex ark = a(r, k);
          a(p, k) = std::conj(gpp) * apk + std::conj(grp) * ark;
          a(r, k) = std::conj(gpr) * apk + std::conj(grr) * ark;
        }
        a(p, r) = 0.0;
        a(r, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(r, r) = a(r, r).real();

        for (std::size_t k = 0; k < n; ++k) {
          const Complex qkp = q(k, p);
          const Complex qkr = q(k, r);
          q(k, p) = qkp * gpp + qkr * grp;
          q(k, r) = qkp * gpr + qkr * grr;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x).real() > a(y, y).real(); });

  EigenSystem out{std::vector<double>(n), Matrix(n, n)};
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = q(i, order[j]);
  }
  return out;
}

double spectral_norm(const Matrix& a) {
  if (a.empty()) return 0.0;
  const Matrix gram = a.rows() <= a.cols() ? a * a.adjoint() : a.adjoint() * a;
  const auto eig = hermitian_eigensystem(gram);
  return std::sqrt(std::max(eig.values.front(), 0.0));
}

Matrix range_basis(const Matrix& h, double rel) {
  const auto eig = hermitian_eigensystem(h);
  const std::size_t n = h.rows();
  if (n == 0) return {};
  const double cutoff = rel * std::max(eig.values.front(), 0.0);
  std::size_t rank = 0;
  while (rank < n && eig.values[rank] > cutoff && eig.values[rank] > 0.0) ++rank;
  return eig.vectors.block(0, 0, n, rank);
}

Matrix permutation_matrix(std::span<const std::size_t> perm) {
  Matrix p(perm.size(), perm.size());
  for (std::size_t src = 0; src < perm.size(); ++src) p(perm[src], src) = 1.0;
  return p;
}

}  // namespace qbiperm
