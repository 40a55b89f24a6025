#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "qbiperm/algebra.hpp"
#include "qbiperm/linalg.hpp"

namespace testing {

using qbiperm::Complex;
using qbiperm::Matrix;

inline const Complex I{0.0, 1.0};

inline Matrix pauli_x() { return Matrix::from_rows({{0, 1}, {1, 0}}); }
inline Matrix pauli_z() { return Matrix::from_rows({{1, 0}, {0, -1}}); }
inline Matrix hadamard() {
  const double r = 1.0 / std::sqrt(2.0);
  return Matrix::from_rows({{r, r}, {r, -r}});
}
inline Matrix t_gate() {
  return Matrix::from_rows({{1, 0}, {0, std::exp(I * (std::numbers::pi / 4))}});
}

inline double dist(const Matrix& a, const Matrix& b) { return qbiperm::frobenius_distance(a, b); }

inline std::string data_path(const std::string& rel) { return std::string(QBIPERM_DATA_DIR) + "/" + rel; }

// Amplitude damping with gamma = 1/2.
inline qbiperm::Channel amplitude_damping() {
  const double g = std::sqrt(0.5);
  qbiperm::KrausGrid grid{{{Matrix::from_rows({{1, 0}, {0, g}}), Matrix::from_rows({{0, g}, {0, 0}})}}};
  return qbiperm::channel_from_kraus({2}, {2}, grid);
}

// Preparation of the basis state |i> as a channel [1] -> [2].
inline qbiperm::Channel prep(std::size_t i) {
  Matrix v(2, 1);
  v(i, 0) = 1.0;
  return qbiperm::embed_E(v);
}

}  // namespace testing
