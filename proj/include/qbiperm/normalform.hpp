#pragma once

#include <cstddef>
#include <vector>

#include "qbiperm/algebra.hpp"
#include "qbiperm/linalg.hpp"

namespace qbiperm {

/// V = U * iota where iota is I_m stacked on zeros, n = m + p.
struct IsometryFactorization {
  Matrix u;
  std::size_t m = 0;
  std::size_t p = 0;
};

IsometryFactorization factor_isometry(const Matrix& v);
/// iota_{m,n} = I_m stacked on an (n - m) x m zero block.
Matrix iota(std::size_t m, std::size_t n);

/// The p x p unitary W = C1* C2 + D1* D2 with u1 (I_m (+) W) = u2, where
/// C, D are the upper-right and lower-right blocks of u1 and u2.
Matrix isometry_witness(const Matrix& u1, const Matrix& u2, std::size_t m);

/// f(A) = U (A_1 (x) I_{s_1} (+) ... (+) A_k (x) I_{s_k}) U*, so column
/// (i, a, t) of U sits at offset_i + a * s_i + t.
struct BratteliForm {
  std::size_t p = 0;
  std::vector<std::size_t> mbar;
  std::vector<std::size_t> sbar;
  Matrix u;
};

/// Heisenberg unital *-homomorphism with codomain [p].
BratteliForm bratteli_form(const Channel& f);
Channel eval_bratteli(const BratteliForm& b);

/// Minimal Stinespring data. In the Heisenberg reading the map is
/// f(A) = W* pi(A) W with pi(A) = (+)_i I_{s_i} (x) A_i (multiplicity factor on
/// the left, so row (i, t, a) of W sits at offset_i + t * m_i + a) and
/// W = U* iota_{p,q}. The Schrodinger reading is the dual, a channel
/// [p] -> mbar with Kraus operators the m_i x p row blocks W_{i,t}.
struct NormalForm {
  std::size_t q = 0;
  std::size_t p = 0;
  std::vector<std::size_t> mbar;
  std::vector<std::size_t> sbar;
  Matrix u;
  Picture picture = Picture::heisenberg;
};

/// W = U* iota_{p,q}.
Matrix dilation_isometry(const NormalForm& nf);
/// Row block W_{i,t} of the dilation isometry (m_i x p).
Matrix dilation_slice(const NormalForm& nf, std::size_t block, std::size_t t);

/// The same *-homomorphism as a q = p normal form (columns regrouped from
/// (i, a, t) to (i, t, a)).
NormalForm normal_form_of(const BratteliForm& b);

/// Normal form of a map with a single-block codomain (Heisenberg) or a
/// single-block domain (Schrodinger).
NormalForm stinespring(const Channel& f);
/// Distributes over the codomain blocks of the Heisenberg form (the domain
/// blocks of a Schrodinger channel) and normal-forms each component.
std::vector<NormalForm> stinespring_components(const Channel& f);

/// Dilation built from an explicit Kraus family of one component (Heisenberg
/// Kraus K_{i,t}: p x m_i, or Schrodinger Kraus m_i x p). The counts need not
/// be minimal.
NormalForm normal_form_from_kraus(const std::vector<std::size_t>& mbar, std::size_t p,
                                  const std::vector<std::vector<Matrix>>& kraus, Picture picture);

Channel eval_normal_form(const NormalForm& nf);
/// Reassembles a component list produced by stinespring_components.
Channel eval_normal_forms(const std::vector<NormalForm>& parts);

/// (I_p (+) P) U1 ((+)_i Q_i (x) I_{m_i}) = U2.
struct EquivalenceWitness {
  Matrix p;
  std::vector<Matrix> q;
  double residual = 0.0;
};

EquivalenceWitness equivalence_witness(const NormalForm& nf1, const NormalForm& nf2);
double witness_residual(const NormalForm& nf1, const NormalForm& nf2, const EquivalenceWitness& w);
/// (+)_i Q_i (x) I_{m_i}.
Matrix multiplicity_action(const std::vector<std::size_t>& mbar, const std::vector<Matrix>& qbar);

}  // namespace qbiperm
