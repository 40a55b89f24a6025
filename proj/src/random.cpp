#include "qbiperm/random.hpp"

#include <cmath>
#include <numeric>

#include "qbiperm/error.hpp"

namespace qbiperm {

Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (auto& z : g.data()) z = Complex(normal(rng), normal(rng));
  return g;
}

Matrix random_unitary(std::size_t n, Rng& rng) {
  Matrix g = random_gaussian(n, n, rng);
  // Modified Gram-Schmidt over columns; positive R diagonal gives Haar measure.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot{};
      for (std::size_t r = 0; r < n; ++r) dot += std::conj(g(r, k)) * g(r, j);
      for (std::size_t r = 0; r < n; ++r) g(r, j) -= dot * g(r, k);
    }
    double norm = 0.0;
    for (std::size_t r = 0; r < n; ++r) norm += std::norm(g(r, j));
    norm = std::sqrt(norm);
    for (std::size_t r = 0; r < n; ++r) g(r, j) /= norm;
  }
  return g;
}

Matrix random_isometry(std::size_t n, std::size_t m, Rng& rng) {
  if (m > n) fail(ErrorKind::ShapeError, "isometry needs m <= n");
  return random_unitary(n, rng).block(0, 0, n, m);
}

Matrix random_hermitian(std::size_t n, Rng& rng) {
  Matrix g = random_gaussian(n, n, rng);
  Matrix h = g + g.adjoint();
  h *= 0.5;
  return h;
}

Channel random_channel(const CStarObject& dom, const CStarObject& cod, Rng& rng,
                       std::size_t rank) {
  const std::size_t out = cod.total_dim();
  if (!dom.empty() && out == 0) fail(ErrorKind::ShapeError, "no channel into the initial object");
  KrausGrid grid(cod.size(), std::vector<std::vector<Matrix>>(dom.size()));
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const std::size_t n = dom[i];
    const std::size_t r = std::max(rank, (n + out - 1) / out);
    // Rows of V are ordered (t, j, row of block j); V*V = I makes the
    // slices a complete Kraus family.
    const Matrix v = random_isometry(r * out, n, rng);
    std::size_t row = 0;
    for (std::size_t t = 0; t < r; ++t)
      for (std::size_t j = 0; j < cod.size(); ++j) {
        grid[j][i].push_back(v.block(row, 0, cod[j], n));
        row += cod[j];
      }
  }
  return channel_from_kraus(dom, cod, grid);
}

Channel random_cpu(const CStarObject& dom, const CStarObject& cod, Rng& rng, std::size_t rank) {
  return dualize(random_channel(cod, dom, rng, rank));
}

Channel star_hom(const std::vector<std::size_t>& mbar, const std::vector<std::size_t>& sbar,
                 const Matrix& u) {
  if (mbar.size() != sbar.size()) fail(ErrorKind::ShapeError, "mbar and sbar differ in length");
  std::size_t p = 0;
  for (std::size_t i = 0; i < mbar.size(); ++i) p += mbar[i] * sbar[i];
  if (u.rows() != p || u.cols() != p) fail(ErrorKind::ShapeError, "unitary must be p x p");
  const CStarObject dom(mbar);
  const CStarObject cod{p};
  KrausGrid grid(1, std::vector<std::vector<Matrix>>(mbar.size()));
  std::size_t offset = 0;
  for (std::size_t i = 0; i < mbar.size(); ++i) {
    for (std::size_t t = 0; t < sbar[i]; ++t) {
      Matrix j(p, mbar[i]);
      for (std::size_t a = 0; a < mbar[i]; ++a) j(offset + a * sbar[i] + t, a) = 1.0;
      grid[0][i].push_back(u * j);
    }
    offset += mbar[i] * sbar[i];
  }
  return channel_from_kraus(dom, cod, grid, Picture::heisenberg);
}

Channel random_star_hom(const std::vector<std::size_t>& mbar, const std::vector<std::size_t>& sbar,
                        Rng& rng) {
  std::size_t p = 0;
  for (std::size_t i = 0; i < mbar.size() && i < sbar.size(); ++i) p += mbar[i] * sbar[i];
  return star_hom(mbar, sbar, random_unitary(p, rng));
}

std::size_t uniform_index(std::size_t lo, std::size_t hi, Rng& rng) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

double uniform_real(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace qbiperm
