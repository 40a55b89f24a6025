#include "qbiperm/completion.hpp"

#include <algorithm>

namespace qbiperm {

bool IsometryCategory::equal(const Matrix& f, const Matrix& g) const {
  if (f.rows() != g.rows() || f.cols() != g.cols()) return false;
  return frobenius_distance(f, g) <= 1e-8;
}

bool CptpCategory::equal(const Channel& f, const Channel& g) const {
  if (!(f.dom() == g.dom()) || !(f.cod() == g.cod()) || f.picture() != g.picture()) return false;
  return channel_equal(f, g, tolerance).equal;
}

UnitaryFunctor<IsometryCategory> inclusion_functor() {
  return {[](std::size_t n) { return n; }, [](const Matrix& u) { return u; }};
}

UnitaryFunctor<IsometryCategory> conjugation_functor() {
  return {[](std::size_t n) { return n; }, [](const Matrix& u) { return u.conj(); }};
}

namespace {

Channel measurement_psi(std::size_t a, std::size_t b) {
  if (a == 0 || b == 0) return structural::identity(embed_object({a + b}));
  const std::size_t parts[] = {a, b};
  return structural::measure_phi(parts);
}

}  // namespace

ColaxFunctorData<CptpCategory> embedding_functor() {
  return {[](std::size_t n) { return embed_object({n}); }, [](const Matrix& v) { return embed_E(v); },
          measurement_psi};
}

ColaxFunctorData<CptpCategory> conjugate_embedding_functor() {
  return {[](std::size_t n) { return embed_object({n}); },
          [](const Matrix& v) { return embed_E(v.conj()); }, measurement_psi};
}

ColaxFunctorData<TerminalCategory> terminal_functor() {
  return {[](std::size_t) { return TerminalCategory::Object{}; },
          [](const Matrix&) { return TerminalCategory::Morphism{}; },
          [](std::size_t, std::size_t) { return TerminalCategory::Morphism{}; }};
}

Channel conjugate_channel(const Channel& c) {
  ChoiFamily map = c.map();
  for (auto& row : map.blocks)
    for (auto& block : row) block = block.conj();
  return Channel::make(std::move(map), c.picture());
}

bool SelfTestReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const LawCheck& c) { return c.passed(); });
}

SelfTestReport self_test_isometry(const UnitaryFunctor<IsometryCategory>& f, const std::string& name,
                                  std::uint64_t seed, std::size_t samples) {
  const IsometryCategory target;
  Rng rng(seed);
  SelfTestReport report{name, seed, {}};
  LawCheck functorial{"functoriality"}, tensor{"tensor_strictness"}, oplus_strict{"oplus_strictness"},
      triangle{"lift_triangle"}, independence{"lift_independence"};
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t n = uniform_index(1, 4, rng);
    const Matrix u = random_unitary(n, rng), w = random_unitary(n, rng), x = random_unitary(uniform_index(1, 3, rng), rng);
    detail::record(functorial, target, f.morphism(u * w), f.morphism(u) * f.morphism(w));
    detail::record(tensor, target, f.morphism(kron(u, x)), kron(f.morphism(u), f.morphism(x)));
    detail::record(oplus_strict, target, f.morphism(direct_sum(u, x)), direct_sum(f.morphism(u), f.morphism(x)));
    detail::record(triangle, target, lift_isometry(target, f, u), f.morphism(u));

    // Another factorization U (I (+) W) of the same isometry lifts equally.
    const std::size_t m = uniform_index(0, n, rng);
    const Matrix v = random_isometry(n, m, rng);
    const Matrix other = extend_to_unitary(v) * direct_sum(Matrix::identity(m), random_unitary(n - m, rng));
    const Matrix via_other = f.morphism(other) * direct_sum(Matrix::identity(m), Matrix(n - m, 0));
    detail::record(independence, target, lift_isometry(target, f, v), via_other);
  }
  report.checks = {functorial, tensor, oplus_strict, triangle, independence};
  return report;
}

}  // namespace qbiperm
