#include "qbiperm/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "qbiperm/error.hpp"
#include "qbiperm/normalform.hpp"
#include "qbiperm/random.hpp"
#include "qbiperm/tolerance.hpp"

namespace qbiperm {

namespace {

void require_same_type(const Channel& f, const Channel& g) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()) || f.picture() != g.picture()) {
    fail(ErrorKind::ShapeError, "channels have different types");
  }
}

const Channel& require_star_hom_into_block(const Channel& f) {
  if (f.picture() != Picture::heisenberg || !classify(f).star_hom) {
    fail(ErrorKind::NotStarHom, "expected a Heisenberg *-homomorphism");
  }
  if (f.cod().size() != 1) fail(ErrorKind::NotSingleBlockCodomain, "codomain must be a single block");
  return f;
}

}  // namespace

Matrix transfer_matrix(const Channel& f) {
  const auto& map = f.map();
  Matrix t(map.cod.algebra_dim(), map.dom.algebra_dim());
  std::size_t row0 = 0;
  for (std::size_t j = 0; j < map.cod.size(); ++j) {
    const std::size_t m = map.cod[j];
    std::size_t col0 = 0;
    for (std::size_t i = 0; i < map.dom.size(); ++i) {
      const std::size_t n = map.dom[i];
      const Matrix& c = map.block(j, i);
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t s = 0; s < m; ++s)
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) t(row0 + r * m + s, col0 + a * n + b) = c(a * m + r, b * m + s);
      col0 += n * n;
    }
    row0 += m * m;
  }
  return t;
}

double transfer_norm(const Channel& f) { return spectral_norm(transfer_matrix(f)); }

double distance(const Channel& f, const Channel& g) {
  require_same_type(f, g);
  return spectral_norm(transfer_matrix(f) - transfer_matrix(g));
}

double element_norm(const Element& x) {
  double best = 0.0;
  for (const auto& block : x) best = std::max(best, spectral_norm(block));
  return best;
}

double opnorm_lower_bound(const Channel& f, const Channel& g, const std::vector<Element>& witnesses) {
  require_same_type(f, g);
  double best = 0.0;
  for (const auto& a : witnesses) {
    const double norm = element_norm(a);
    if (std::abs(norm - 1.0) > tol::kStructural) {
      fail(ErrorKind::WitnessNotNormalized, "witness has norm " + std::to_string(norm));
    }
    const Element fa = apply_map(f, a);
    const Element ga = apply_map(g, a);
    for (std::size_t j = 0; j < fa.size(); ++j) best = std::max(best, spectral_norm(fa[j] - ga[j]));
  }
  return best;
}

std::vector<BratteliTuple> bratteli_tuples(std::size_t n, const std::vector<std::size_t>& mbar) {
  for (auto m : mbar) {
    if (m == 0) fail(ErrorKind::ShapeError, "block sizes must be positive");
  }
  std::vector<BratteliTuple> out;
  std::vector<std::size_t> current(mbar.size());
  auto search = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
    if (i == mbar.size()) {
      if (remaining == 0) out.push_back({n, mbar, current});
      return;
    }
    for (std::size_t s = 0; s * mbar[i] <= remaining; ++s) {
      current[i] = s;
      self(self, i + 1, remaining - s * mbar[i]);
    }
  };
  search(search, 0, n);
  return out;
}

ComponentInfo component_info(const BratteliTuple& tuple) {
  std::size_t stabilizer = 0;
  for (auto s : tuple.sbar) stabilizer += s * s;
  const std::size_t dim = tuple.n * tuple.n - stabilizer;
  return {tuple, dim, dim == 0};
}

std::vector<ComponentInfo> component_atlas(std::size_t n, const std::vector<std::size_t>& mbar) {
  std::vector<ComponentInfo> atlas;
  for (const auto& t : bratteli_tuples(n, mbar)) atlas.push_back(component_info(t));
  return atlas;
}

std::size_t commutant_dimension(const Channel& f) {
  if (f.cod().size() != 1) fail(ErrorKind::NotSingleBlockCodomain, "codomain must be a single block");
  const std::size_t n = f.cod()[0];
  const Matrix id = Matrix::identity(n);
  // X F = F X  <=>  (I (x) F^T - F (x) I) vec(X) = 0 for row-major vec.
  Matrix gram(n * n, n * n);
  for (std::size_t i = 0; i < f.dom().size(); ++i)
    for (std::size_t a = 0; a < f.dom()[i]; ++a)
      for (std::size_t b = 0; b < f.dom()[i]; ++b) {
        const Matrix img = component_image(f.map(), 0, i, a, b);
        const Matrix op = kron(id, img.transpose()) - kron(img, id);
        gram += op.adjoint() * op;
      }
  const auto eig = hermitian_eigensystem(gram);
  const double cutoff = 1e-8 * std::max(1.0, eig.values.front());
  return static_cast<std::size_t>(
      std::count_if(eig.values.begin(), eig.values.end(), [&](double v) { return v <= cutoff; }));
}

ComponentInfo component_of(const Channel& f) {
  require_star_hom_into_block(f);
  const auto form = bratteli_form(f);
  const ComponentInfo info = component_info({form.p, form.mbar, form.sbar});
  const std::size_t nullity = commutant_dimension(f);
  if (info.tuple.n * info.tuple.n - nullity != info.real_dimension) {
    fail(ErrorKind::IllConditioned, "commutant dimension " + std::to_string(nullity) +
                                        " disagrees with the Bratteli tuple");
  }
  return info;
}

SeparationWitness separation_witness(const Channel& f, const Channel& g) {
  require_star_hom_into_block(f);
  require_star_hom_into_block(g);
  require_same_type(f, g);
  const auto sf = bratteli_form(f).sbar;
  const auto sg = bratteli_form(g).sbar;
  std::size_t block = 0;
  while (block < sf.size() && sf[block] == sg[block]) ++block;
  if (block == sf.size()) fail(ErrorKind::SameComponent, "maps have the same Bratteli tuple");

  SeparationWitness w;
  w.block = block;
  w.element = matrix_unit(f.dom(), block, 0, 0);
  Matrix big = apply_map(f, w.element)[0];
  Matrix small = apply_map(g, w.element)[0];
  if (sf[block] < sg[block]) std::swap(big, small);
  // A unit vector in range(big) killed by small: the projections have
  // different ranks, so the intersection is nonzero.
  const Matrix range = range_basis(big, tol::kRankRelative);
  const Matrix pushed = small * range;
  const auto eig = hermitian_eigensystem(pushed.adjoint() * pushed);
  w.certificate = range * eig.vectors.column(eig.vectors.cols() - 1);
  w.bound = opnorm_lower_bound(f, g, {w.element});
  return w;
}

Matrix intertwiner(const Channel& f, const Channel& g) {
  require_star_hom_into_block(f);
  require_star_hom_into_block(g);
  require_same_type(f, g);
  const auto bf = bratteli_form(f);
  const auto bg = bratteli_form(g);
  if (bf.sbar != bg.sbar) fail(ErrorKind::WitnessInfeasible, "maps lie in different components");
  return bf.u * bg.u.adjoint();
}

Channel heisenberg_conjugation(const Matrix& w) {
  if (!is_unitary(w, tol::kStructural)) fail(ErrorKind::NotIsometry, "conjugation needs a unitary");
  const CStarObject obj{w.rows()};
  return channel_from_kraus(obj, obj, {{{w}}}, Picture::heisenberg);
}

Channel convex_path(const Channel& f, const Channel& g, double t) {
  require_same_type(f, g);
  if (!(t >= 0.0 && t <= 1.0)) fail(ErrorKind::ShapeError, "path parameter must lie in [0, 1]");
  ChoiFamily map = f.map();
  for (std::size_t j = 0; j < map.cod.size(); ++j)
    for (std::size_t i = 0; i < map.dom.size(); ++i)
      map.blocks[j][i] = (1.0 - t) * f.block(j, i) + t * g.block(j, i);
  return Channel::make(std::move(map), f.picture());
}

namespace {

struct RatioTracker {
  ContinuityEntry entry;
  explicit RatioTracker(std::string name) {
    entry.bound = std::move(name);
    entry.min_ratio = std::numeric_limits<double>::infinity();
  }
  void add(double lhs, double rhs) {
    constexpr double kVanishing = 1e-12;
    ++entry.samples;
    if (rhs <= kVanishing) {
      if (lhs > kVanishing) entry.max_ratio = std::numeric_limits<double>::infinity();
      return;
    }
    entry.max_ratio = std::max(entry.max_ratio, lhs / rhs);
    entry.min_ratio = std::min(entry.min_ratio, lhs / rhs);
  }
};

// Modified Gram-Schmidt on the columns, keeping their order.
Matrix orthonormalize_columns(Matrix q) {
  for (std::size_t c = 0; c < q.cols(); ++c) {
    for (std::size_t d = 0; d < c; ++d) {
      Complex dot{};
      for (std::size_t r = 0; r < q.rows(); ++r) dot += std::conj(q(r, d)) * q(r, c);
      for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) -= dot * q(r, d);
    }
    double len = 0;
    for (std::size_t r = 0; r < q.rows(); ++r) len += std::norm(q(r, c));
    len = std::sqrt(len);
    for (std::size_t r = 0; r < q.rows(); ++r) q(r, c) /= len;
  }
  return q;
}

CStarObject small_object(std::size_t max_total, Rng& rng) {
  const std::size_t k = uniform_index(1, 2, rng);
  std::vector<std::size_t> dims;
  std::size_t total = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t room = max_total - total - (k - i - 1);
    const std::size_t d = uniform_index(1, std::min<std::size_t>(room, 2), rng);
    dims.push_back(d);
    total += d;
  }
  return CStarObject(dims);
}

}  // namespace

std::vector<ContinuityEntry> continuity_report(std::size_t samples, std::uint64_t seed) {
  Rng rng(seed);
  RatioTracker embedding("embedding"), composition("composition"), oplus_eq("oplus_equality"),
      otimes_bound("otimes");
  for (std::size_t k = 0; k < samples; ++k) {
    // (i) distance(E(V), E(W)) <= 2 ||V - W||_2.
    const std::size_t n = uniform_index(1, 4, rng), m = uniform_index(1, n, rng);
    const Matrix v = random_isometry(n, m, rng);
    Matrix w;
    switch (k % 3) {
      case 0:
        w = random_isometry(n, m, rng);
        break;
      case 1:
        w = std::exp(Complex(0.0, uniform_real(0.0, 2 * std::numbers::pi, rng))) * v;
        break;
      default: {
        const Matrix u = random_unitary(n, rng);
        w = orthonormalize_columns((Matrix::identity(n) + 1e-3 * (u - u.adjoint())) * v);
        break;
      }
    }
    embedding.add(distance(embed_E(v), embed_E(w)), 2.0 * spectral_norm(v - w));

    // (ii) composition.
    const CStarObject a = small_object(3, rng), b = small_object(3, rng), c = small_object(3, rng);
    const Channel f1 = random_channel(a, b, rng), f2 = random_channel(a, b, rng);
    const Channel g1 = random_channel(b, c, rng), g2 = random_channel(b, c, rng);
    composition.add(distance(compose(g1, f1), compose(g2, f2)),
                    transfer_norm(g1) * distance(f1, f2) + distance(g1, g2) * transfer_norm(f2));

    // (iii) (+) is an isometry in each argument; (x) is Lipschitz.
    const Channel h = random_channel(small_object(2, rng), small_object(2, rng), rng);
    oplus_eq.add(distance(oplus(h, f1), oplus(h, f2)), distance(f1, f2));
    const Channel hs = random_channel({uniform_index(1, 2, rng)}, {uniform_index(1, 2, rng)}, rng);
    const Channel p1 = random_channel({uniform_index(1, 2, rng)}, {2}, rng);
    const Channel p2 = random_channel(p1.dom(), p1.cod(), rng);
    otimes_bound.add(distance(otimes(hs, p1), otimes(hs, p2)), transfer_norm(hs) * distance(p1, p2));
  }
  return {embedding.entry, composition.entry, oplus_eq.entry, otimes_bound.entry};
}

}  // namespace qbiperm
