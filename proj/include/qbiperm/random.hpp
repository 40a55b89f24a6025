#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "qbiperm/algebra.hpp"
#include "qbiperm/linalg.hpp"

namespace qbiperm {

using Rng = std::mt19937_64;

/// Entries i.i.d. standard complex Gaussian.
Matrix random_gaussian(std::size_t rows, std::size_t cols, Rng& rng);
/// Haar-distributed unitary (Gram-Schmidt on a Gaussian matrix).
Matrix random_unitary(std::size_t n, Rng& rng);
/// The first m columns of a Haar unitary.
Matrix random_isometry(std::size_t n, std::size_t m, Rng& rng);
Matrix random_hermitian(std::size_t n, Rng& rng);

/// Schrodinger channel with `rank` Kraus operators per (output, input) pair.
/// A rank of 0 picks the smallest rank that admits a channel.
Channel random_channel(const CStarObject& dom, const CStarObject& cod, Rng& rng,
                       std::size_t rank = 0);
/// Heisenberg CPU map dom -> cod, the dual of a random channel cod -> dom.
Channel random_cpu(const CStarObject& dom, const CStarObject& cod, Rng& rng, std::size_t rank = 0);

/// Unital *-homomorphism A -> U (A_1 (x) I_{s_1} (+) ...) U* into M_p with
/// p = sum s_i m_i, for a Haar unitary U (or the given one).
Channel star_hom(const std::vector<std::size_t>& mbar, const std::vector<std::size_t>& sbar,
                 const Matrix& u);
Channel random_star_hom(const std::vector<std::size_t>& mbar, const std::vector<std::size_t>& sbar,
                        Rng& rng);

std::size_t uniform_index(std::size_t lo, std::size_t hi, Rng& rng);  // inclusive
double uniform_real(double lo, double hi, Rng& rng);

}  // namespace qbiperm
