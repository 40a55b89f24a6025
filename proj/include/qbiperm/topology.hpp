#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "qbiperm/algebra.hpp"
#include "qbiperm/linalg.hpp"

namespace qbiperm {

/// Matrix of f in the matrix-unit bases, acting on row-major vectorized
/// elements: T[(j,r,s),(i,a,b)] = f_{j,i}(E_ab)[r,s]. Blocks are stacked in
/// order, so composition becomes the matrix product.
Matrix transfer_matrix(const Channel& f);
/// Spectral norm of the transfer matrix.
double transfer_norm(const Channel& f);
/// spectral_norm(T_f - T_g). Topologically equivalent to the operator norm
/// induced by spectral norms on the algebras, not numerically equal to it.
double distance(const Channel& f, const Channel& g);

/// Largest spectral norm over the blocks of an element.
double element_norm(const Element& x);
/// max over witnesses a (each of norm 1) of ||f(a) - g(a)||_2: a certified
/// lower bound on the spectral-induced operator norm of f - g.
double opnorm_lower_bound(const Channel& f, const Channel& g, const std::vector<Element>& witnesses);

struct BratteliTuple {
  std::size_t n = 0;
  std::vector<std::size_t> mbar;
  std::vector<std::size_t> sbar;
};

/// All sbar with sum s_i m_i = n, in ascending lexicographic order.
std::vector<BratteliTuple> bratteli_tuples(std::size_t n, const std::vector<std::size_t>& mbar);

struct ComponentInfo {
  BratteliTuple tuple;
  std::size_t real_dimension = 0;  // n^2 - sum s_i^2
  bool is_point = false;
};

ComponentInfo component_info(const BratteliTuple& tuple);
/// One entry per Bratteli tuple, in bratteli_tuples order.
std::vector<ComponentInfo> component_atlas(std::size_t n, const std::vector<std::size_t>& mbar);

/// Complex dimension of the commutant of the image of a map into [n],
/// computed as a numerical null space.
std::size_t commutant_dimension(const Channel& f);
/// Component of a unital *-homomorphism into [n]; the dimension formula is
/// cross-checked against the commutant.
ComponentInfo component_of(const Channel& f);

struct SeparationWitness {
  std::size_t block = 0;
  Element element;      // E^{(block)}_00
  Matrix certificate;   // unit vector in range(f(a)) meeting ker(g(a)), or vice versa
  double bound = 0.0;   // opnorm_lower_bound(f, g, {element})
};

SeparationWitness separation_witness(const Channel& f, const Channel& g);

/// W with Ad_W o g = f, for *-homomorphisms in the same component.
Matrix intertwiner(const Channel& f, const Channel& g);
/// X |-> W X W* as a Heisenberg map [n] -> [n].
Channel heisenberg_conjugation(const Matrix& w);

/// (1 - t) f + t g, blockwise on Choi matrices.
Channel convex_path(const Channel& f, const Channel& g, double t);

struct ContinuityEntry {
  std::string bound;
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  std::size_t samples = 0;
};

/// Sampled Lipschitz estimates behind the continuity of E, composition,
/// (+) and (x). A ratio is lhs / rhs. Samples with a vanishing rhs only
/// count toward max_ratio, as infinity, when lhs does not vanish too.
std::vector<ContinuityEntry> continuity_report(std::size_t samples, std::uint64_t seed);

}  // namespace qbiperm
