#include "qbiperm/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "qbiperm/error.hpp"
#include "qbiperm/tolerance.hpp"

namespace qbiperm {

// ---------------------------------------------------------------------------
// Objects and elements

CStarObject::CStarObject(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  for (auto d : dims_) {
    if (d == 0) fail(ErrorKind::ShapeError, "C*-object block sizes must be positive");
  }
}

std::size_t CStarObject::total_dim() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

std::size_t CStarObject::algebra_dim() const {
  std::size_t s = 0;
  for (auto d : dims_) s += d * d;
  return s;
}

std::string CStarObject::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < dims_.size(); ++i) os << (i ? "," : "") << dims_[i];
  os << ']';
  return os.str();
}

CStarObject oplus(const CStarObject& a, const CStarObject& b) {
  std::vector<std::size_t> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return CStarObject(std::move(dims));
}

CStarObject otimes(const CStarObject& a, const CStarObject& b) {
  std::vector<std::size_t> dims;
  dims.reserve(a.size() * b.size());
  for (auto x : a.dims())
    for (auto y : b.dims()) dims.push_back(x * y);
  return CStarObject(std::move(dims));
}

CStarObject embed_object(PureObject n) {
  return n.n == 0 ? CStarObject{} : CStarObject(std::vector<std::size_t>{n.n});
}

Element zero_element(const CStarObject& obj) {
  Element x;
  x.reserve(obj.size());
  for (auto d : obj.dims()) x.emplace_back(d, d);
  return x;
}

Element unit_element(const CStarObject& obj) {
  Element x;
  x.reserve(obj.size());
  for (auto d : obj.dims()) x.push_back(Matrix::identity(d));
  return x;
}

Element matrix_unit(const CStarObject& obj, std::size_t block, std::size_t a, std::size_t b) {
  Element x = zero_element(obj);
  x.at(block)(a, b) = 1.0;
  return x;
}

// ---------------------------------------------------------------------------
// Raw Choi families

void check_shape(const ChoiFamily& map) {
  if (map.blocks.size() != map.cod.size()) {
    fail(ErrorKind::ShapeError, "Choi grid has " + std::to_string(map.blocks.size()) +
                                    " rows, codomain " + map.cod.to_string() + " needs " +
                                    std::to_string(map.cod.size()));
  }
  for (std::size_t j = 0; j < map.cod.size(); ++j) {
    if (map.blocks[j].size() != map.dom.size()) {
      fail(ErrorKind::ShapeError, "Choi grid row " + std::to_string(j) + " does not match domain " +
                                      map.dom.to_string());
    }
    for (std::size_t i = 0; i < map.dom.size(); ++i) {
      const std::size_t d = map.dom[i] * map.cod[j];
      const Matrix& c = map.blocks[j][i];
      if (c.rows() != d || c.cols() != d) {
        fail(ErrorKind::ShapeError, "Choi block (" + std::to_string(j) + "," + std::to_string(i) +
                                        ") must be " + std::to_string(d) + "x" + std::to_string(d));
      }
    }
  }
}

Matrix component_image(const ChoiFamily& map, std::size_t out, std::size_t in, std::size_t a,
                       std::size_t b) {
  const std::size_t m = map.cod[out];
  return map.block(out, in).block(a * m, b * m, m, m);
}

Element apply_map(const ChoiFamily& map, const Element& x) {
  if (x.size() != map.dom.size()) fail(ErrorKind::ShapeError, "element does not match domain");
  Element out = zero_element(map.cod);
  for (std::size_t i = 0; i < map.dom.size(); ++i) {
    const std::size_t n = map.dom[i];
    if (x[i].rows() != n || x[i].cols() != n) {
      fail(ErrorKind::ShapeError, "element block " + std::to_string(i) + " has wrong size");
    }
    for (std::size_t j = 0; j < map.cod.size(); ++j) {
      const std::size_t m = map.cod[j];
      const Matrix& c = map.block(j, i);
      Matrix& y = out[j];
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
          const Complex xab = x[i](a, b);
          if (xab == Complex{}) continue;
          for (std::size_t r = 0; r < m; ++r)
            for (std::size_t s = 0; s < m; ++s) y(r, s) += xab * c(a * m + r, b * m + s);
        }
    }
  }
  return out;
}

ChoiFamily choi_from_action(
    const CStarObject& dom, const CStarObject& cod,
    const std::function<Element(std::size_t, std::size_t, std::size_t)>& action) {
  ChoiFamily map{dom, cod, {}};
  map.blocks.assign(cod.size(), std::vector<Matrix>(dom.size()));
  for (std::size_t j = 0; j < cod.size(); ++j)
    for (std::size_t i = 0; i < dom.size(); ++i) {
      const std::size_t d = dom[i] * cod[j];
      map.blocks[j][i] = Matrix(d, d);
    }
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const std::size_t n = dom[i];
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) {
        const Element img = action(i, a, b);
        if (img.size() != cod.size()) fail(ErrorKind::ShapeError, "action image has wrong block count");
        for (std::size_t j = 0; j < cod.size(); ++j) {
          const std::size_t m = cod[j];
          if (img[j].rows() != m || img[j].cols() != m) {
            fail(ErrorKind::ShapeError, "action image block has wrong size");
          }
          map.blocks[j][i].set_block(a * m, b * m, img[j]);
        }
      }
  }
  return map;
}

// ---------------------------------------------------------------------------
// Predicates

Picture opposite(Picture p) {
  return p == Picture::schrodinger ? Picture::heisenberg : Picture::schrodinger;
}

std::string_view picture_name(Picture p) {
  return p == Picture::schrodinger ? "schrodinger" : "heisenberg";
}

Picture parse_picture(std::string_view name) {
  if (name == "schrodinger") return Picture::schrodinger;
  if (name == "heisenberg") return Picture::heisenberg;
  fail(ErrorKind::FormatError, "unknown picture '" + std::string(name) + "'");
}

namespace {

// PSD test shared by classify and validation. The negativity threshold is
// relative to the largest eigenvalue over the whole family, so numerically
// zero blocks do not fail on rounding noise.
bool completely_positive(const ChoiFamily& map) {
  std::vector<double> minima;
  double lmax = 0.0;
  for (const auto& row : map.blocks)
    for (const auto& c : row) {
      if (c.rows() == 0) continue;
      if (!is_hermitian(c, tol::kStructural * std::max(1.0, c.frobenius_norm()))) return false;
      const auto eig = hermitian_eigensystem(c);
      lmax = std::max(lmax, eig.values.front());
      minima.push_back(eig.values.back());
    }
  for (double m : minima) {
    if (m < -tol::kPsdRelative * lmax) return false;
  }
  return true;
}

double trace_defect(const ChoiFamily& map) {
  double worst = 0.0;
  for (std::size_t i = 0; i < map.dom.size(); ++i) {
    const std::size_t n = map.dom[i];
    Matrix acc(n, n);
    for (std::size_t j = 0; j < map.cod.size(); ++j) {
      const std::size_t m = map.cod[j];
      const Matrix& c = map.block(j, i);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t r = 0; r < m; ++r) acc(a, b) += c(a * m + r, b * m + r);
    }
    worst = std::max(worst, frobenius_distance(acc, Matrix::identity(n)));
  }
  return worst;
}

double unital_defect(const ChoiFamily& map) {
  double worst = 0.0;
  for (std::size_t j = 0; j < map.cod.size(); ++j) {
    const std::size_t m = map.cod[j];
    Matrix acc(m, m);
    for (std::size_t i = 0; i < map.dom.size(); ++i) {
      const std::size_t n = map.dom[i];
      const Matrix& c = map.block(j, i);
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t r = 0; r < m; ++r)
          for (std::size_t s = 0; s < m; ++s) acc(r, s) += c(a * m + r, a * m + s);
    }
    worst = std::max(worst, frobenius_distance(acc, Matrix::identity(m)));
  }
  return worst;
}

// Multiplicativity and *-preservation on the matrix-unit basis, one codomain
// block at a time.
bool star_homomorphic(const ChoiFamily& map) {
  for (std::size_t j = 0; j < map.cod.size(); ++j) {
    struct Unit {
      std::size_t block, a, b;
      Matrix image;
    };
    std::vector<Unit> units;
    for (std::size_t i = 0; i < map.dom.size(); ++i)
      for (std::size_t a = 0; a < map.dom[i]; ++a)
        for (std::size_t b = 0; b < map.dom[i]; ++b)
          units.push_back({i, a, b, component_image(map, j, i, a, b)});

    auto image_of = [&](std::size_t i, std::size_t a, std::size_t b) -> const Matrix& {
      std::size_t offset = 0;
      for (std::size_t k = 0; k < i; ++k) offset += map.dom[k] * map.dom[k];
      return units[offset + a * map.dom[i] + b].image;
    };

    const Matrix zero(map.cod[j], map.cod[j]);
    for (const auto& u : units) {
      if (frobenius_distance(u.image.adjoint(), image_of(u.block, u.b, u.a)) > tol::kStructural) {
        return false;
      }
      for (const auto& v : units) {
        const Matrix prod = u.image * v.image;
        const bool linked = u.block == v.block && u.b == v.a;
        const Matrix& expect = linked ? image_of(u.block, u.a, v.b) : zero;
        if (frobenius_distance(prod, expect) > tol::kStructural) return false;
      }
    }
  }
  return true;
}

Matrix choi_of_kraus(std::size_t n, std::size_t m, const std::vector<Matrix>& kraus) {
  Matrix c(n * m, n * m);
  for (const auto& k : kraus) {
    if (k.rows() != m || k.cols() != n) {
      fail(ErrorKind::ShapeError, "Kraus operator must be " + std::to_string(m) + "x" +
                                      std::to_string(n));
    }
    std::vector<Complex> vec(n * m);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t r = 0; r < m; ++r) vec[a * m + r] = k(r, a);
    for (std::size_t x = 0; x < n * m; ++x) {
      if (vec[x] == Complex{}) continue;
      for (std::size_t y = 0; y < n * m; ++y) c(x, y) += vec[x] * std::conj(vec[y]);
    }
  }
  return c;
}

struct Route {
  std::size_t target;
  Matrix op;  // m_target x n_source isometry
};

// Channel sending each input block through one isometry into one output block.
Channel routing_channel(const CStarObject& dom, const CStarObject& cod,
                        const std::vector<Route>& routes) {
  KrausGrid grid(cod.size(), std::vector<std::vector<Matrix>>(dom.size()));
  for (std::size_t i = 0; i < dom.size(); ++i) grid.at(routes.at(i).target)[i].push_back(routes[i].op);
  return channel_from_kraus(dom, cod, grid);
}

void require_same_picture(const Channel& f, const Channel& g, const char* op) {
  if (f.picture() != g.picture()) {
    fail(ErrorKind::ShapeError, std::string(op) + " of channels in different pictures");
  }
}

}  // namespace

ChannelFlags classify(const ChoiFamily& map) {
  check_shape(map);
  ChannelFlags flags;
  flags.cp = completely_positive(map);
  flags.tp = trace_defect(map) <= tol::kStructural;
  flags.unital = unital_defect(map) <= tol::kStructural;
  flags.star_hom = flags.unital && star_homomorphic(map);
  return flags;
}

ChannelFlags classify(const Channel& c) { return classify(c.map()); }

Element apply_map(const Channel& c, const Element& x) { return apply_map(c.map(), x); }

Channel Channel::make(ChoiFamily map, Picture picture) {
  check_shape(map);
  if (!completely_positive(map)) fail(ErrorKind::NotCP, "Choi matrices are not positive semidefinite");
  if (picture == Picture::schrodinger) {
    const double d = trace_defect(map);
    if (d > tol::kStructural) {
      fail(ErrorKind::NotTracePreserving, "map is not trace preserving (defect " + std::to_string(d) + ")");
    }
  } else {
    const double d = unital_defect(map);
    if (d > tol::kStructural) {
      fail(ErrorKind::NotUnital, "map is not unital (defect " + std::to_string(d) + ")");
    }
  }
  return Channel(std::move(map), picture);
}

// ---------------------------------------------------------------------------
// Kraus

Channel channel_from_kraus(const CStarObject& dom, const CStarObject& cod, const KrausGrid& kraus,
                           Picture picture) {
  if (kraus.size() != cod.size()) fail(ErrorKind::ShapeError, "Kraus grid rows must match codomain");
  ChoiFamily map{dom, cod, {}};
  map.blocks.resize(cod.size());
  for (std::size_t j = 0; j < cod.size(); ++j) {
    if (kraus[j].size() != dom.size()) fail(ErrorKind::ShapeError, "Kraus grid columns must match domain");
    for (std::size_t i = 0; i < dom.size(); ++i)
      map.blocks[j].push_back(choi_of_kraus(dom[i], cod[j], kraus[j][i]));
  }
  return Channel::make(std::move(map), picture);
}

KrausGrid kraus_from_choi(const Channel& c) {
  const auto& map = c.map();
  std::vector<std::vector<EigenSystem>> eig(map.cod.size());
  double lmax = 0.0;
  for (std::size_t j = 0; j < map.cod.size(); ++j)
    for (std::size_t i = 0; i < map.dom.size(); ++i) {
      eig[j].push_back(hermitian_eigensystem(map.block(j, i)));
      if (!eig[j].back().values.empty()) lmax = std::max(lmax, eig[j].back().values.front());
    }

  KrausGrid grid(map.cod.size(), std::vector<std::vector<Matrix>>(map.dom.size()));
  for (std::size_t j = 0; j < map.cod.size(); ++j)
    for (std::size_t i = 0; i < map.dom.size(); ++i) {
      const std::size_t n = map.dom[i];
      const std::size_t m = map.cod[j];
      const auto& e = eig[j][i];
      for (std::size_t k = 0; k < e.values.size(); ++k) {
        const double lambda = e.values[k];
        if (lambda < -tol::kPsdRelative * lmax) fail(ErrorKind::NotCP, "negative Choi eigenvalue");
        if (lambda <= tol::kRankRelative * lmax || lambda <= 0.0) continue;
        const double scale = std::sqrt(lambda);
        Matrix kop(m, n);
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t r = 0; r < m; ++r) kop(r, a) = scale * e.vectors(a * m + r, k);
        grid[j][i].push_back(std::move(kop));
      }
    }
  return grid;
}

// ---------------------------------------------------------------------------
// Categorical operations

Channel compose(const Channel& g, const Channel& f) {
  require_same_picture(f, g, "composition");
  if (!(f.cod() == g.dom())) {
    fail(ErrorKind::ShapeError, "cannot compose: " + f.cod().to_string() + " vs " + g.dom().to_string());
  }
  const auto& fm = f.map();
  auto map = choi_from_action(f.dom(), g.cod(), [&](std::size_t i, std::size_t a, std::size_t b) {
    Element mid;
    mid.reserve(fm.cod.size());
    for (std::size_t j = 0; j < fm.cod.size(); ++j) mid.push_back(component_image(fm, j, i, a, b));
    return apply_map(g.map(), mid);
  });
  return Channel::make(std::move(map), f.picture());
}

Channel oplus(const Channel& f, const Channel& g) {
  require_same_picture(f, g, "direct sum");
  ChoiFamily map{oplus(f.dom(), g.dom()), oplus(f.cod(), g.cod()), {}};
  const std::size_t kf = f.dom().size();
  const std::size_t pf = f.cod().size();
  map.blocks.resize(map.cod.size());
  for (std::size_t j = 0; j < map.cod.size(); ++j) {
    for (std::size_t i = 0; i < map.dom.size(); ++i) {
      if (j < pf && i < kf) {
        map.blocks[j].push_back(f.block(j, i));
      } else if (j >= pf && i >= kf) {
        map.blocks[j].push_back(g.block(j - pf, i - kf));
      } else {
        const std::size_t d = map.dom[i] * map.cod[j];
        map.blocks[j].emplace_back(d, d);
      }
    }
  }
  return Channel::make(std::move(map), f.picture());
}

Channel otimes(const Channel& f, const Channel& g) {
  require_same_picture(f, g, "tensor product");
  const CStarObject dom = otimes(f.dom(), g.dom());
  const CStarObject cod = otimes(f.cod(), g.cod());
  const std::size_t k2 = g.dom().size();
  const std::size_t p1 = f.cod().size();
  const std::size_t p2 = g.cod().size();
  auto map = choi_from_action(dom, cod, [&](std::size_t i, std::size_t a, std::size_t b) {
    const std::size_t i1 = i / k2;
    const std::size_t i2 = i % k2;
    const std::size_t n2 = g.dom()[i2];
    Element out;
    out.reserve(p1 * p2);
    for (std::size_t j1 = 0; j1 < p1; ++j1)
      for (std::size_t j2 = 0; j2 < p2; ++j2)
        out.push_back(kron(component_image(f.map(), j1, i1, a / n2, b / n2),
                           component_image(g.map(), j2, i2, a % n2, b % n2)));
    return out;
  });
  return Channel::make(std::move(map), f.picture());
}

Channel dualize(const Channel& f) {
  const auto& src = f.map();
  ChoiFamily map{src.cod, src.dom, {}};
  map.blocks.assign(src.dom.size(), std::vector<Matrix>(src.cod.size()));
  for (std::size_t i = 0; i < src.dom.size(); ++i)
    for (std::size_t j = 0; j < src.cod.size(); ++j) {
      const std::size_t n = src.dom[i];
      const std::size_t m = src.cod[j];
      const Matrix& c = src.block(j, i);
      Matrix d(n * m, n * m);
      // D[(r,b),(s,a)] = C[(a,s),(b,r)]: swap tensor factors, then transpose.
      for (std::size_t r = 0; r < m; ++r)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t s = 0; s < m; ++s)
            for (std::size_t a = 0; a < n; ++a) d(r * n + b, s * n + a) = c(a * m + s, b * m + r);
      map.blocks[i][j] = std::move(d);
    }
  return Channel::make(std::move(map), opposite(f.picture()));
}

Channel embed_E(const Matrix& v) {
  if (!is_isometry(v, tol::kStructural)) fail(ErrorKind::NotIsometry, "E is only defined on isometries");
  const CStarObject dom = embed_object({v.cols()});
  const CStarObject cod = embed_object({v.rows()});
  KrausGrid grid(cod.size(), std::vector<std::vector<Matrix>>(dom.size()));
  if (!dom.empty()) grid[0][0].push_back(v);
  return channel_from_kraus(dom, cod, grid);
}

Channel embed_E(const Matrix& v, PureObject dom, PureObject cod) {
  if (v.cols() != dom.n || v.rows() != cod.n) {
    fail(ErrorKind::ShapeError, "isometry shape does not match " + std::to_string(dom.n) + " -> " +
                                    std::to_string(cod.n));
  }
  return embed_E(v);
}

Channel copair(const Channel& f, const Channel& g) {
  require_same_picture(f, g, "copairing");
  if (f.picture() != Picture::schrodinger) {
    fail(ErrorKind::ShapeError, "copairing is defined for Schrodinger channels");
  }
  if (!(f.cod() == g.cod())) fail(ErrorKind::ShapeError, "copairing needs a common codomain");
  ChoiFamily map{oplus(f.dom(), g.dom()), f.cod(), {}};
  map.blocks.resize(map.cod.size());
  for (std::size_t j = 0; j < map.cod.size(); ++j) {
    map.blocks[j] = f.map().blocks[j];
    map.blocks[j].insert(map.blocks[j].end(), g.map().blocks[j].begin(), g.map().blocks[j].end());
  }
  return Channel::make(std::move(map), Picture::schrodinger);
}

Channel copair_via_terminal(const Channel& f, const Channel& g) {
  if (!(f.cod() == g.cod())) fail(ErrorKind::ShapeError, "copairing needs a common codomain");
  const Channel both = oplus(f, g);  // A (+) B -> C (+) C, and C (+) C = [1,1] (x) C
  const Channel collapse =
      otimes(structural::terminal(CStarObject{1, 1}), structural::identity(f.cod()));
  return compose(collapse, both);
}

ChannelComparison channel_equal(const Channel& f, const Channel& g, double tol) {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()) || f.picture() != g.picture()) {
    fail(ErrorKind::ShapeError, "channels have different types");
  }
  double worst = 0.0;
  for (std::size_t j = 0; j < f.cod().size(); ++j)
    for (std::size_t i = 0; i < f.dom().size(); ++i)
      worst = std::max(worst, frobenius_distance(f.block(j, i), g.block(j, i)));
  return {worst <= tol, worst};
}

// ---------------------------------------------------------------------------
// Pure structural morphisms

namespace pure {

Matrix identity(std::size_t n) { return Matrix::identity(n); }

Matrix initial(std::size_t n) { return Matrix(n, 0); }

Matrix gamma_plus(std::size_t n, std::size_t m) {
  std::vector<std::size_t> perm(n + m);
  for (std::size_t x = 0; x < n; ++x) perm[x] = m + x;
  for (std::size_t y = 0; y < m; ++y) perm[n + y] = y;
  return permutation_matrix(perm);
}

Matrix gamma_times(std::size_t n, std::size_t m) {
  std::vector<std::size_t> perm(n * m);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < m; ++y) perm[x * m + y] = y * n + x;
  return permutation_matrix(perm);
}

Matrix delta(std::size_t a, std::size_t b, std::size_t c) {
  std::vector<std::size_t> perm(a * (b + c));
  for (std::size_t x = 0; x < a; ++x) {
    for (std::size_t y = 0; y < b; ++y) perm[x * b + y] = x * (b + c) + y;
    for (std::size_t z = 0; z < c; ++z) perm[a * b + x * c + z] = x * (b + c) + b + z;
  }
  return permutation_matrix(perm);
}

Matrix delta_sharp(std::size_t a, std::size_t b, std::size_t c) {
  return gamma_times(c, a + b) * delta(c, a, b) * direct_sum(gamma_times(a, c), gamma_times(b, c));
}

Matrix inclusion(std::size_t m, std::size_t n) {
  if (m > n) fail(ErrorKind::ShapeError, "inclusion needs m <= n");
  Matrix v(n, m);
  for (std::size_t i = 0; i < m; ++i) v(i, i) = 1.0;
  return v;
}

}  // namespace pure

// ---------------------------------------------------------------------------
// Channel structural morphisms

namespace structural {

Channel identity(const CStarObject& a) {
  std::vector<Route> routes;
  for (std::size_t i = 0; i < a.size(); ++i) routes.push_back({i, Matrix::identity(a[i])});
  return routing_channel(a, a, routes);
}

Channel terminal(const CStarObject& a) {
  ChoiFamily map{a, CStarObject{1}, {}};
  map.blocks.resize(1);
  for (auto n : a.dims()) map.blocks[0].push_back(Matrix::identity(n));
  return Channel::make(std::move(map), Picture::schrodinger);
}

Channel initial(const CStarObject& a) {
  ChoiFamily map{CStarObject{}, a, std::vector<std::vector<Matrix>>(a.size())};
  return Channel::make(std::move(map), Picture::schrodinger);
}

Channel injection(std::span<const CStarObject> summands, std::size_t index) {
  if (index >= summands.size()) fail(ErrorKind::ShapeError, "injection index out of range");
  CStarObject cod;
  std::size_t offset = 0;
  for (std::size_t k = 0; k < summands.size(); ++k) {
    if (k < index) offset += summands[k].size();
    cod = oplus(cod, summands[k]);
  }
  const CStarObject& dom = summands[index];
  std::vector<Route> routes;
  for (std::size_t i = 0; i < dom.size(); ++i) routes.push_back({offset + i, Matrix::identity(dom[i])});
  return routing_channel(dom, cod, routes);
}

Channel fold(const CStarObject& a, std::size_t arity) {
  CStarObject dom;
  for (std::size_t t = 0; t < arity; ++t) dom = oplus(dom, a);
  std::vector<Route> routes;
  for (std::size_t t = 0; t < arity; ++t)
    for (std::size_t i = 0; i < a.size(); ++i) routes.push_back({i, Matrix::identity(a[i])});
  return routing_channel(dom, a, routes);
}

namespace {

Channel binary_split(std::size_t n, std::size_t m) {
  const CStarObject dom{n + m};
  const CStarObject cod{n, m};
  KrausGrid grid(2, std::vector<std::vector<Matrix>>(1));
  grid[0][0].push_back(Matrix::identity(n + m).block(0, 0, n, n + m));
  grid[1][0].push_back(Matrix::identity(n + m).block(n, 0, m, n + m));
  return channel_from_kraus(dom, cod, grid);
}

}  // namespace

Channel measure_phi(std::span<const std::size_t> parts) {
  if (parts.empty()) fail(ErrorKind::ShapeError, "measurement needs at least one part");
  for (auto p : parts) {
    if (p == 0) fail(ErrorKind::ShapeError, "measurement parts must be positive");
  }
  if (parts.size() == 1) return identity(CStarObject{parts[0]});
  // ((n1 + n2) + n3) + ...: split off the last part, then recurse on the rest.
  const auto head = parts.first(parts.size() - 1);
  const std::size_t rest = std::accumulate(head.begin(), head.end(), std::size_t{0});
  const Channel split = binary_split(rest, parts.back());
  return compose(oplus(measure_phi(head), identity(CStarObject{parts.back()})), split);
}

Channel partial_trace(std::size_t n, std::size_t m) {
  KrausGrid grid(1, std::vector<std::vector<Matrix>>(1));
  for (std::size_t x = 0; x < n; ++x) {
    Matrix row(1, n);
    row(0, x) = 1.0;
    grid[0][0].push_back(kron(row, Matrix::identity(m)));
  }
  return channel_from_kraus(CStarObject{n * m}, CStarObject{m}, grid);
}

Channel gamma_plus(const CStarObject& a, const CStarObject& b) {
  std::vector<Route> routes;
  for (std::size_t i = 0; i < a.size(); ++i) routes.push_back({b.size() + i, Matrix::identity(a[i])});
  for (std::size_t k = 0; k < b.size(); ++k) routes.push_back({k, Matrix::identity(b[k])});
  return routing_channel(oplus(a, b), oplus(b, a), routes);
}

Channel gamma_times(const CStarObject& a, const CStarObject& b) {
  std::vector<Route> routes;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k)
      routes.push_back({k * a.size() + i, pure::gamma_times(a[i], b[k])});
  return routing_channel(otimes(a, b), otimes(b, a), routes);
}

Channel delta(const CStarObject& a, const CStarObject& b, const CStarObject& c) {
  const std::size_t nb = b.size();
  const std::size_t nc = c.size();
  std::vector<Route> routes;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < nb; ++k) routes.push_back({i * (nb + nc) + k, Matrix::identity(a[i] * b[k])});
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t l = 0; l < nc; ++l)
      routes.push_back({i * (nb + nc) + nb + l, Matrix::identity(a[i] * c[l])});
  return routing_channel(oplus(otimes(a, b), otimes(a, c)), otimes(a, oplus(b, c)), routes);
}

Channel delta_sharp(const CStarObject& a, const CStarObject& b, const CStarObject& c) {
  return compose(gamma_times(c, oplus(a, b)),
                 compose(delta(c, a, b), oplus(gamma_times(a, c), gamma_times(b, c))));
}

}  // namespace structural

std::variant<Matrix, Channel> structural_morphism(const StructuralName& name) {
  using Kind = StructuralName::Kind;
  const auto& objs = name.objects;
  auto need_objects = [&](std::size_t k) {
    if (objs.size() != k) {
      fail(ErrorKind::ShapeError, "structural morphism needs " + std::to_string(k) + " object(s)");
    }
  };
  auto need_params = [&](std::size_t k) {
    if (name.params.size() != k) {
      fail(ErrorKind::ShapeError, "structural morphism needs " + std::to_string(k) + " parameter(s)");
    }
  };

  if (name.level == StructuralName::Level::pure) {
    auto dim = [&](std::size_t k) -> std::size_t {
      const auto& o = objs.at(k);
      if (o.size() > 1) fail(ErrorKind::ShapeError, "pure objects are single dimensions");
      return o.empty() ? 0 : o[0];
    };
    switch (name.kind) {
      case Kind::identity:
        need_objects(1);
        return pure::identity(dim(0));
      case Kind::initial:
        need_objects(1);
        return pure::initial(dim(0));
      case Kind::gamma_plus:
        need_objects(2);
        return pure::gamma_plus(dim(0), dim(1));
      case Kind::gamma_times:
        need_objects(2);
        return pure::gamma_times(dim(0), dim(1));
      case Kind::delta:
        need_objects(3);
        return pure::delta(dim(0), dim(1), dim(2));
      case Kind::delta_sharp:
        need_objects(3);
        return pure::delta_sharp(dim(0), dim(1), dim(2));
      default:
        fail(ErrorKind::ShapeError, "structural morphism has no pure-level form");
    }
  }

  switch (name.kind) {
    case Kind::identity:
      need_objects(1);
      return structural::identity(objs[0]);
    case Kind::gamma_plus:
      need_objects(2);
      return structural::gamma_plus(objs[0], objs[1]);
    case Kind::gamma_times:
      need_objects(2);
      return structural::gamma_times(objs[0], objs[1]);
    case Kind::delta:
      need_objects(3);
      return structural::delta(objs[0], objs[1], objs[2]);
    case Kind::delta_sharp:
      need_objects(3);
      return structural::delta_sharp(objs[0], objs[1], objs[2]);
    case Kind::terminal:
      need_objects(1);
      return structural::terminal(objs[0]);
    case Kind::initial:
      need_objects(1);
      return structural::initial(objs[0]);
    case Kind::injection:
      need_params(1);
      return structural::injection(objs, name.params[0]);
    case Kind::fold:
      need_objects(1);
      need_params(1);
      return structural::fold(objs[0], name.params[0]);
    case Kind::partial_trace:
      need_params(2);
      return structural::partial_trace(name.params[0], name.params[1]);
    case Kind::measure_phi:
      return structural::measure_phi(name.params);
  }
  fail(ErrorKind::ShapeError, "unknown structural morphism");
}

}  // namespace qbiperm
