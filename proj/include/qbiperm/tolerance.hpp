#pragma once

namespace qbiperm::tol {

// Absolute Frobenius tolerance for structural predicates (unitary, isometry,
// Hermitian, trace preservation, unitality).
inline constexpr double kStructural = 1e-9;

// A Choi block is PSD when its smallest eigenvalue is >= -kPsdRelative * lmax.
inline constexpr double kPsdRelative = 1e-8;

// Eigenvalues above kRankRelative * lmax count towards the rank.
inline constexpr double kRankRelative = 1e-7;

// Integer-valued invariants (multiplicities) must round within this distance.
inline constexpr double kInteger = 1e-6;

// Gram-Schmidt skips candidate vectors whose residual norm is below this.
inline constexpr double kGramSchmidtSkip = 1e-6;

}  // namespace qbiperm::tol
