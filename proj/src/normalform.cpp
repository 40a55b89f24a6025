#include "qbiperm/normalform.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "qbiperm/error.hpp"
#include "qbiperm/tolerance.hpp"

namespace qbiperm {

namespace {

constexpr double kEvalResidual = 1e-8;
constexpr double kWitnessResidual = 1e-7;

std::size_t weighted_sum(const std::vector<std::size_t>& mbar, const std::vector<std::size_t>& sbar) {
  if (mbar.size() != sbar.size()) fail(ErrorKind::ShapeError, "mbar and sbar differ in length");
  std::size_t total = 0;
  for (std::size_t i = 0; i < mbar.size(); ++i) total += mbar[i] * sbar[i];
  return total;
}

std::size_t block_offset(const NormalForm& nf, std::size_t block) {
  std::size_t offset = 0;
  for (std::size_t k = 0; k < block; ++k) offset += nf.mbar[k] * nf.sbar[k];
  return offset;
}

void check_well_formed(const NormalForm& nf) {
  if (weighted_sum(nf.mbar, nf.sbar) != nf.q) fail(ErrorKind::ShapeError, "sum s_i m_i must equal q");
  if (nf.p > nf.q) fail(ErrorKind::ShapeError, "normal form needs p <= q");
  if (nf.p == 0) fail(ErrorKind::ShapeError, "normal form needs p >= 1");
  if (nf.u.rows() != nf.q || nf.u.cols() != nf.q) fail(ErrorKind::ShapeError, "u must be q x q");
}

}  // namespace

Matrix iota(std::size_t m, std::size_t n) { return pure::inclusion(m, n); }

IsometryFactorization factor_isometry(const Matrix& v) {
  if (v.cols() > v.rows()) fail(ErrorKind::ShapeError, "isometry needs cols <= rows");
  if (!is_isometry(v, tol::kStructural)) fail(ErrorKind::NotIsometry, "matrix is not an isometry");
  return {extend_to_unitary(v), v.cols(), v.rows() - v.cols()};
}

Matrix isometry_witness(const Matrix& u1, const Matrix& u2, std::size_t m) {
  const std::size_t n = u1.rows();
  if (!u1.is_square() || u2.rows() != n || u2.cols() != n || m > n) {
    fail(ErrorKind::ShapeError, "isometry_witness needs two n x n unitaries and m <= n");
  }
  const double gap = frobenius_distance(u1.block(0, 0, n, m), u2.block(0, 0, n, m));
  if (gap > kEvalResidual) {
    fail(ErrorKind::WitnessInfeasible,
         "leading columns differ (distance " + std::to_string(gap) + ")");
  }
  const std::size_t p = n - m;
  const Matrix c1 = u1.block(0, m, m, p);
  const Matrix d1 = u1.block(m, m, p, p);
  const Matrix c2 = u2.block(0, m, m, p);
  const Matrix d2 = u2.block(m, m, p, p);
  return c1.adjoint() * c2 + d1.adjoint() * d2;
}

// ---------------------------------------------------------------------------
// Bratteli

BratteliForm bratteli_form(const Channel& f) {
  if (f.picture() != Picture::heisenberg) {
    fail(ErrorKind::NotStarHom, "Bratteli forms are taken of Heisenberg *-homomorphisms");
  }
  if (f.cod().size() != 1) {
    fail(ErrorKind::NotSingleBlockCodomain, "codomain " + f.cod().to_string() + " has several blocks");
  }
  if (!classify(f).star_hom) fail(ErrorKind::NotStarHom, "map is not a *-homomorphism");

  BratteliForm form;
  form.p = f.cod()[0];
  form.mbar = f.dom().dims();
  form.u = Matrix(form.p, form.p);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < f.dom().size(); ++i) {
    const std::size_t m = f.dom()[i];
    const Matrix proj = component_image(f.map(), 0, i, 0, 0);
    const double tr = proj.trace().real();
    const double s_real = std::round(tr);
    if (std::abs(tr - s_real) > tol::kInteger) {
      fail(ErrorKind::IllConditioned, "multiplicity " + std::to_string(tr) + " is not an integer");
    }
    const auto s = static_cast<std::size_t>(s_real);
    const Matrix basis = range_basis(proj, tol::kRankRelative);
    if (basis.cols() != s) fail(ErrorKind::IllConditioned, "image projection rank disagrees with its trace");
    for (std::size_t a = 0; a < m; ++a) {
      const Matrix cols = component_image(f.map(), 0, i, a, 0) * basis;
      form.u.set_block(0, offset + a * s, cols);
    }
    form.sbar.push_back(s);
    offset += m * s;
  }
  if (offset != form.p) fail(ErrorKind::NotStarHom, "multiplicities do not fill the codomain");
  if (!is_unitary(form.u, kEvalResidual)) fail(ErrorKind::IllConditioned, "reconstructed U is not unitary");
  const auto cmp = channel_equal(eval_bratteli(form), f, kEvalResidual);
  if (!cmp.equal) {
    fail(ErrorKind::IllConditioned, "Bratteli form residual " + std::to_string(cmp.distance));
  }
  return form;
}

Channel eval_bratteli(const BratteliForm& b) {
  if (weighted_sum(b.mbar, b.sbar) != b.p) fail(ErrorKind::ShapeError, "sum s_i m_i must equal p");
  const CStarObject dom(b.mbar);
  KrausGrid grid(1, std::vector<std::vector<Matrix>>(b.mbar.size()));
  std::size_t offset = 0;
  for (std::size_t i = 0; i < b.mbar.size(); ++i) {
    const std::size_t m = b.mbar[i];
    const std::size_t s = b.sbar[i];
    for (std::size_t t = 0; t < s; ++t) {
      Matrix j(b.p, m);
      for (std::size_t a = 0; a < m; ++a) j(offset + a * s + t, a) = 1.0;
      grid[0][i].push_back(b.u * j);
    }
    offset += m * s;
  }
  return channel_from_kraus(dom, CStarObject{b.p}, grid, Picture::heisenberg);
}

NormalForm normal_form_of(const BratteliForm& b) {
  std::vector<std::size_t> perm(b.p);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < b.mbar.size(); ++i) {
    const std::size_t m = b.mbar[i];
    const std::size_t s = b.sbar[i];
    for (std::size_t t = 0; t < s; ++t)
      for (std::size_t a = 0; a < m; ++a) perm[offset + t * m + a] = offset + a * s + t;
    offset += m * s;
  }
  return {b.p, b.p, b.mbar, b.sbar, b.u * permutation_matrix(perm), Picture::heisenberg};
}

// ---------------------------------------------------------------------------
// Stinespring

Matrix dilation_isometry(const NormalForm& nf) {
  check_well_formed(nf);
  return nf.u.adjoint().block(0, 0, nf.q, nf.p);
}

Matrix dilation_slice(const NormalForm& nf, std::size_t block, std::size_t t) {
  const std::size_t m = nf.mbar.at(block);
  return dilation_isometry(nf).block(block_offset(nf, block) + t * m, 0, m, nf.p);
}

NormalForm normal_form_from_kraus(const std::vector<std::size_t>& mbar, std::size_t p,
                                  const std::vector<std::vector<Matrix>>& kraus, Picture picture) {
  if (kraus.size() != mbar.size()) fail(ErrorKind::ShapeError, "one Kraus list per block expected");
  NormalForm nf;
  nf.p = p;
  nf.mbar = mbar;
  nf.picture = picture;
  for (const auto& list : kraus) nf.sbar.push_back(list.size());
  nf.q = weighted_sum(mbar, nf.sbar);

  Matrix w(nf.q, p);
  std::size_t row = 0;
  for (std::size_t i = 0; i < mbar.size(); ++i)
    for (const auto& k : kraus[i]) {
      const Matrix slice = picture == Picture::heisenberg ? k.adjoint() : k;
      if (slice.rows() != mbar[i] || slice.cols() != p) {
        fail(ErrorKind::ShapeError, "Kraus operator has the wrong shape");
      }
      w.set_block(row, 0, slice);
      row += mbar[i];
    }
  if (nf.q < p || !is_isometry(w, tol::kStructural)) {
    fail(picture == Picture::heisenberg ? ErrorKind::NotCPU : ErrorKind::NotCPTP,
         "Kraus family does not assemble to an isometry");
  }
  nf.u = extend_to_unitary(w).adjoint();
  return nf;
}

NormalForm stinespring(const Channel& f) {
  if (f.picture() == Picture::schrodinger) {
    if (f.dom().size() != 1) {
      fail(ErrorKind::NotSingleBlockCodomain, "domain " + f.dom().to_string() + " has several blocks");
    }
    NormalForm nf = stinespring(dualize(f));
    nf.picture = Picture::schrodinger;
    return nf;
  }
  if (f.cod().size() != 1) {
    fail(ErrorKind::NotSingleBlockCodomain, "codomain " + f.cod().to_string() + " has several blocks");
  }
  const KrausGrid kraus = kraus_from_choi(f);
  return normal_form_from_kraus(f.dom().dims(), f.cod()[0], kraus[0], Picture::heisenberg);
}

std::vector<NormalForm> stinespring_components(const Channel& f) {
  const Channel h = f.picture() == Picture::heisenberg ? f : dualize(f);
  std::vector<NormalForm> parts;
  const KrausGrid kraus = kraus_from_choi(h);
  for (std::size_t j = 0; j < h.cod().size(); ++j) {
    parts.push_back(normal_form_from_kraus(h.dom().dims(), h.cod()[j], kraus[j], Picture::heisenberg));
    parts.back().picture = f.picture();
  }
  return parts;
}

Channel eval_normal_form(const NormalForm& nf) {
  check_well_formed(nf);
  const CStarObject algebra(nf.mbar);
  const CStarObject space{nf.p};
  const std::size_t k = nf.mbar.size();
  const bool heis = nf.picture == Picture::heisenberg;
  KrausGrid grid = heis ? KrausGrid(1, std::vector<std::vector<Matrix>>(k))
                        : KrausGrid(k, std::vector<std::vector<Matrix>>(1));
  const Matrix w = dilation_isometry(nf);
  std::size_t row = 0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t t = 0; t < nf.sbar[i]; ++t) {
      const Matrix slice = w.block(row, 0, nf.mbar[i], nf.p);
      if (heis) {
        grid[0][i].push_back(slice.adjoint());
      } else {
        grid[i][0].push_back(slice);
      }
      row += nf.mbar[i];
    }
  return heis ? channel_from_kraus(algebra, space, grid, Picture::heisenberg)
              : channel_from_kraus(space, algebra, grid, Picture::schrodinger);
}

Channel eval_normal_forms(const std::vector<NormalForm>& parts) {
  if (parts.empty()) fail(ErrorKind::ShapeError, "no components to assemble");
  const Picture picture = parts.front().picture;
  if (picture == Picture::schrodinger) {
    Channel acc = eval_normal_form(parts.front());
    for (std::size_t j = 1; j < parts.size(); ++j) acc = copair(acc, eval_normal_form(parts[j]));
    return acc;
  }
  ChoiFamily map{CStarObject(parts.front().mbar), CStarObject{}, {}};
  std::vector<std::size_t> cod;
  for (const auto& nf : parts) {
    const Channel c = eval_normal_form(nf);
    if (!(c.dom() == map.dom)) fail(ErrorKind::ShapeError, "components disagree on the domain");
    cod.push_back(nf.p);
    map.blocks.push_back(c.map().blocks[0]);
  }
  map.cod = CStarObject(cod);
  return Channel::make(std::move(map), Picture::heisenberg);
}

// ---------------------------------------------------------------------------
// Equivalence of normal forms

Matrix multiplicity_action(const std::vector<std::size_t>& mbar, const std::vector<Matrix>& qbar) {
  if (mbar.size() != qbar.size()) fail(ErrorKind::ShapeError, "one Q per block expected");
  Matrix acc;
  for (std::size_t i = 0; i < mbar.size(); ++i)
    acc = direct_sum(acc, kron(qbar[i], Matrix::identity(mbar[i])));
  return acc;
}

double witness_residual(const NormalForm& nf1, const NormalForm& nf2, const EquivalenceWitness& w) {
  const Matrix left = direct_sum(Matrix::identity(nf1.p), w.p);
  return frobenius_distance(left * nf1.u * multiplicity_action(nf1.mbar, w.q), nf2.u);
}

EquivalenceWitness equivalence_witness(const NormalForm& nf1, const NormalForm& nf2) {
  check_well_formed(nf1);
  check_well_formed(nf2);
  if (nf1.q != nf2.q || nf1.p != nf2.p || nf1.mbar != nf2.mbar || nf1.sbar != nf2.sbar) {
    fail(ErrorKind::WitnessInfeasible, "normal forms have different shapes");
  }
  EquivalenceWitness out;
  // Per block the Kraus families {W1_{i,t}} and {W2_{i,t}} present the same
  // map, so their stacked rows differ by a unitary V: X2 = V X1.
  for (std::size_t i = 0; i < nf1.mbar.size(); ++i) {
    const std::size_t s = nf1.sbar[i];
    const std::size_t len = nf1.mbar[i] * nf1.p;
    Matrix x1(s, len);
    Matrix x2(s, len);
    for (std::size_t t = 0; t < s; ++t) {
      const Matrix a = dilation_slice(nf1, i, t);
      const Matrix b = dilation_slice(nf2, i, t);
      for (std::size_t e = 0; e < len; ++e) {
        x1(t, e) = a.data()[e];
        x2(t, e) = b.data()[e];
      }
    }
    const auto eig = hermitian_eigensystem(x1 * x1.adjoint());
    const double top = s ? std::max(eig.values.front(), 0.0) : 0.0;
    std::size_t rank = 0;
    while (rank < s && eig.values[rank] > tol::kRankRelative * top) ++rank;
    Matrix c(s, rank);
    for (std::size_t k = 0; k < rank; ++k) {
      const Matrix ak = eig.vectors.column(k);
      c.set_block(0, k, (1.0 / eig.values[k]) * (x2 * (x1.adjoint() * ak)));
    }
    Matrix cfull;
    try {
      cfull = extend_to_unitary(c);
    } catch (const Error&) {
      fail(ErrorKind::WitnessInfeasible, "Kraus families of block " + std::to_string(i) +
                                             " are not unitarily related");
    }
    const Matrix v = cfull * eig.vectors.adjoint();
    out.q.push_back(v.adjoint());
  }

  const Matrix moved = nf1.u * multiplicity_action(nf1.mbar, out.q);
  try {
    out.p = isometry_witness(moved.adjoint(), nf2.u.adjoint(), nf1.p).adjoint();
  } catch (const Error& e) {
    fail(ErrorKind::WitnessInfeasible, std::string("no ancilla witness: ") + e.what());
  }
  out.residual = witness_residual(nf1, nf2, out);
  if (out.residual > kWitnessResidual) {
    fail(ErrorKind::WitnessInfeasible, "witness residual " + std::to_string(out.residual));
  }
  return out;
}

}  // namespace qbiperm
