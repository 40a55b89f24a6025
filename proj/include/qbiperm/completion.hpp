#pragma once

#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qbiperm/algebra.hpp"
#include "qbiperm/error.hpp"
#include "qbiperm/linalg.hpp"
#include "qbiperm/normalform.hpp"
#include "qbiperm/random.hpp"

namespace qbiperm {

/// What a target category must provide for the lifts. compose(g, f) is g o f.
template <class C>
concept TargetCategory = requires(const C& c, const typename C::Object& a,
                                  const typename C::Morphism& f) {
  { c.identity(a) } -> std::same_as<typename C::Morphism>;
  { c.compose(f, f) } -> std::same_as<typename C::Morphism>;
  { c.oplus(a, a) } -> std::same_as<typename C::Object>;
  { c.otimes(a, a) } -> std::same_as<typename C::Object>;
  { c.oplus(f, f) } -> std::same_as<typename C::Morphism>;
  { c.otimes(f, f) } -> std::same_as<typename C::Morphism>;
  { c.equal(f, f) } -> std::same_as<bool>;
};

/// The additive unit N is initial.
template <class C>
concept WithInitial = TargetCategory<C> && requires(const C& c, const typename C::Object& a) {
  { c.zero_object() } -> std::same_as<typename C::Object>;
  { c.initial(a) } -> std::same_as<typename C::Morphism>;
};

/// The tensor unit I is terminal, which makes (+) a coproduct.
template <class C>
concept WithHiding = WithInitial<C> && requires(const C& c, const typename C::Object& a,
                                                const typename C::Morphism& f) {
  { c.unit_object() } -> std::same_as<typename C::Object>;
  { c.terminal(a) } -> std::same_as<typename C::Morphism>;
  { c.copair(f, f) } -> std::same_as<typename C::Morphism>;
};

/// A strict bipermutative functor on Unitary, given on dimensions and unitaries.
template <class C>
struct UnitaryFunctor {
  std::function<typename C::Object(std::size_t)> object;
  std::function<typename C::Morphism(const Matrix&)> morphism;
};

/// A (+)-colax functor on Isometry: psi(a, b) : F(a + b) -> F(a) (+) F(b).
/// F(0) must be the initial object of the target.
template <class C>
struct ColaxFunctorData {
  std::function<typename C::Object(std::size_t)> object;
  std::function<typename C::Morphism(const Matrix&)> morphism;
  std::function<typename C::Morphism(std::size_t, std::size_t)> psi;
};

// ---------------------------------------------------------------------------
// Lifts

/// F^(v) = F(U) o (id_{F(m)} (+) initial_{F(p)}) for V = U iota.
template <WithInitial C>
typename C::Morphism lift_isometry(const C& target, const UnitaryFunctor<C>& f, const Matrix& v) {
  const auto fac = factor_isometry(v);
  return target.compose(f.morphism(fac.u),
                        target.oplus(target.identity(f.object(fac.m)), target.initial(f.object(fac.p))));
}

template <TargetCategory C, class Functor>
typename C::Object lift_object(const C& target, const Functor& f, const CStarObject& a) {
  typename C::Object acc = f.object(0);
  for (auto n : a.dims()) acc = target.oplus(acc, f.object(n));
  return acc;
}

/// fold_s : F(m) (+) ... (+) F(m) -> F(m), copairs of identities.
template <WithHiding C>
typename C::Morphism fold_morphism(const C& target, const typename C::Object& a, std::size_t arity) {
  if (arity == 0) return target.initial(a);
  typename C::Morphism acc = target.identity(a);
  for (std::size_t s = 1; s < arity; ++s) acc = target.copair(acc, target.identity(a));
  return acc;
}

/// Psi : F(n_1 + ... + n_k) -> F(n_1) (+) ... (+) F(n_k), iterating psi with
/// left-associated bracketing.
template <WithHiding C>
typename C::Morphism iterated_psi(const C& target, const ColaxFunctorData<C>& f,
                                  const std::vector<std::size_t>& parts) {
  if (parts.empty()) return target.identity(f.object(0));
  typename C::Morphism acc = target.identity(f.object(parts[0]));
  std::size_t prefix = parts[0];
  for (std::size_t k = 1; k < parts.size(); ++k) {
    acc = target.compose(target.oplus(acc, target.identity(f.object(parts[k]))), f.psi(prefix, parts[k]));
    prefix += parts[k];
  }
  return acc;
}

/// (+)_i fold_{s_i} o Psi_{[m_i x s_i]} o F(W) for one dilation isometry W
/// whose rows are grouped (i, t, a).
template <WithHiding C>
typename C::Morphism assemble_component(const C& target, const ColaxFunctorData<C>& f,
                                        const Matrix& w, const std::vector<std::size_t>& mbar,
                                        const std::vector<std::size_t>& sbar) {
  std::vector<std::size_t> parts;
  typename C::Morphism folds = target.identity(f.object(0));
  for (std::size_t i = 0; i < mbar.size(); ++i) {
    for (std::size_t t = 0; t < sbar[i]; ++t) parts.push_back(mbar[i]);
    folds = target.oplus(folds, fold_morphism(target, f.object(mbar[i]), sbar[i]));
  }
  return target.compose(folds, target.compose(iterated_psi(target, f, parts), f.morphism(w)));
}

/// Lift of a channel given by Schrodinger normal forms, one per domain block.
template <WithHiding C>
typename C::Morphism lift_normal_forms(const C& target, const ColaxFunctorData<C>& f,
                                       const CStarObject& cod, const std::vector<NormalForm>& parts) {
  if (parts.empty()) return target.initial(lift_object(target, f, cod));
  typename C::Morphism acc = assemble_component(target, f, dilation_isometry(parts[0]), parts[0].mbar,
                                                parts[0].sbar);
  for (std::size_t j = 1; j < parts.size(); ++j)
    acc = target.copair(acc, assemble_component(target, f, dilation_isometry(parts[j]), parts[j].mbar,
                                                parts[j].sbar));
  return acc;
}

/// F^(g) for a Schrodinger CPTP map g.
template <WithHiding C>
typename C::Morphism lift_channel(const C& target, const ColaxFunctorData<C>& f, const Channel& g) {
  if (g.picture() != Picture::schrodinger) fail(ErrorKind::NotCPTP, "lift_channel expects a Schrodinger channel");
  if (g.dom().empty()) return target.initial(lift_object(target, f, g.cod()));
  return lift_normal_forms(target, f, g.cod(), stinespring_components(g));
}

/// F^ of a Heisenberg *-homomorphism A -> B, landing in the Schrodinger
/// direction F^(B) -> F^(A); assembled from Bratteli forms per block of B.
template <WithHiding C>
typename C::Morphism lift_starhom(const C& target, const ColaxFunctorData<C>& f, const Channel& h) {
  if (h.picture() != Picture::heisenberg || !classify(h).star_hom) {
    fail(ErrorKind::NotStarHom, "lift_starhom expects a Heisenberg *-homomorphism");
  }
  if (h.cod().empty()) return target.initial(lift_object(target, f, h.dom()));
  std::vector<NormalForm> parts;
  for (std::size_t j = 0; j < h.cod().size(); ++j) {
    ChoiFamily row{h.dom(), CStarObject{h.cod()[j]}, {h.map().blocks[j]}};
    NormalForm nf = normal_form_of(bratteli_form(Channel::make(std::move(row), Picture::heisenberg)));
    nf.picture = Picture::schrodinger;
    parts.push_back(std::move(nf));
  }
  return lift_normal_forms(target, f, h.dom(), parts);
}

// ---------------------------------------------------------------------------
// Builtin targets

/// Isometries between dimensions.
struct IsometryCategory {
  using Object = std::size_t;
  using Morphism = Matrix;

  Morphism identity(Object n) const { return Matrix::identity(n); }
  Morphism compose(const Morphism& g, const Morphism& f) const { return g * f; }
  Object oplus(Object a, Object b) const { return a + b; }
  Object otimes(Object a, Object b) const { return a * b; }
  Morphism oplus(const Morphism& f, const Morphism& g) const { return direct_sum(f, g); }
  Morphism otimes(const Morphism& f, const Morphism& g) const { return kron(f, g); }
  bool equal(const Morphism& f, const Morphism& g) const;
  Object zero_object() const { return 0; }
  Morphism initial(Object n) const { return Matrix(n, 0); }
};

/// CPTP maps in the Schrodinger picture.
struct CptpCategory {
  using Object = CStarObject;
  using Morphism = Channel;

  double tolerance = 1e-8;

  Morphism identity(const Object& a) const { return structural::identity(a); }
  Morphism compose(const Morphism& g, const Morphism& f) const { return qbiperm::compose(g, f); }
  Object oplus(const Object& a, const Object& b) const { return qbiperm::oplus(a, b); }
  Object otimes(const Object& a, const Object& b) const { return qbiperm::otimes(a, b); }
  Morphism oplus(const Morphism& f, const Morphism& g) const { return qbiperm::oplus(f, g); }
  Morphism otimes(const Morphism& f, const Morphism& g) const { return qbiperm::otimes(f, g); }
  bool equal(const Morphism& f, const Morphism& g) const;
  Object zero_object() const { return {}; }
  Morphism initial(const Object& a) const { return structural::initial(a); }
  Object unit_object() const { return {1}; }
  Morphism terminal(const Object& a) const { return structural::terminal(a); }
  Morphism copair(const Morphism& f, const Morphism& g) const { return qbiperm::copair(f, g); }
};

/// One object, one morphism.
struct TerminalCategory {
  struct Object {
    friend bool operator==(const Object&, const Object&) = default;
  };
  struct Morphism {
    friend bool operator==(const Morphism&, const Morphism&) = default;
  };

  Morphism identity(const Object&) const { return {}; }
  Morphism compose(const Morphism&, const Morphism&) const { return {}; }
  Object oplus(const Object&, const Object&) const { return {}; }
  Object otimes(const Object&, const Object&) const { return {}; }
  Morphism oplus(const Morphism&, const Morphism&) const { return {}; }
  Morphism otimes(const Morphism&, const Morphism&) const { return {}; }
  bool equal(const Morphism&, const Morphism&) const { return true; }
  Object zero_object() const { return {}; }
  Morphism initial(const Object&) const { return {}; }
  Object unit_object() const { return {}; }
  Morphism terminal(const Object&) const { return {}; }
  Morphism copair(const Morphism&, const Morphism&) const { return {}; }
};

static_assert(WithInitial<IsometryCategory>);
static_assert(WithHiding<CptpCategory>);
static_assert(WithHiding<TerminalCategory>);

UnitaryFunctor<IsometryCategory> inclusion_functor();
UnitaryFunctor<IsometryCategory> conjugation_functor();

/// E with its measurement phi.
ColaxFunctorData<CptpCategory> embedding_functor();
/// E precomposed with entrywise conjugation of isometries.
ColaxFunctorData<CptpCategory> conjugate_embedding_functor();
ColaxFunctorData<TerminalCategory> terminal_functor();

/// Conjugates every Choi block entrywise.
Channel conjugate_channel(const Channel& c);

// ---------------------------------------------------------------------------
// Sampled law checks

struct LawCheck {
  std::string name;
  std::size_t samples = 0;
  std::size_t failures = 0;
  bool passed() const { return failures == 0; }
};

struct SelfTestReport {
  std::string target;
  std::uint64_t seed = 0;
  std::vector<LawCheck> checks;
  bool passed() const;
};

namespace detail {

template <class C>
void record(LawCheck& check, const C& target, const typename C::Morphism& lhs,
            const typename C::Morphism& rhs) {
  ++check.samples;
  if (!target.equal(lhs, rhs)) ++check.failures;
}

}  // namespace detail

/// Spot-checks functor laws, colax naturality of psi, bipermutative
/// interchange and coproduct laws on images of random isometries.
template <WithHiding C>
SelfTestReport self_test(const C& target, const ColaxFunctorData<C>& f, const std::string& name,
                         std::uint64_t seed, std::size_t samples = 20) {
  Rng rng(seed);
  SelfTestReport report{name, seed, {}};
  LawCheck functorial{"functoriality"}, tensor{"tensor_strictness"}, colax{"psi_naturality"},
      assoc{"composition_associativity"}, unit_law{"identity_laws"}, interchange{"oplus_interchange"},
      oplus_assoc{"oplus_associativity"}, coproduct{"coproduct_injections"}, terminal{"terminal_uniqueness"};

  auto iso = [&](std::size_t n, std::size_t m) { return random_isometry(n, m, rng); };
  for (std::size_t k = 0; k < samples; ++k) {
    const std::size_t a = uniform_index(1, 2, rng), b = uniform_index(a, 3, rng), c = uniform_index(b, 3, rng);
    const Matrix v = iso(b, a), w = iso(c, b), v2 = iso(b, a), w2 = iso(c, b), u = iso(c, c);
    const auto fv = f.morphism(v), fw = f.morphism(w), fv2 = f.morphism(v2), fw2 = f.morphism(w2);

    detail::record(functorial, target, f.morphism(w * v), target.compose(fw, fv));
    detail::record(tensor, target, f.morphism(kron(v, w)), target.otimes(fv, fw));
    detail::record(colax, target, target.compose(f.psi(b, c), f.morphism(direct_sum(v, w))),
                   target.compose(target.oplus(fv, fw), f.psi(a, b)));
    detail::record(assoc, target, target.compose(target.compose(f.morphism(u), fw), fv),
                   target.compose(f.morphism(u), target.compose(fw, fv)));
    detail::record(unit_law, target, target.compose(target.identity(f.object(b)), fv), fv);
    detail::record(unit_law, target, target.compose(fv, target.identity(f.object(a))), fv);
    detail::record(interchange, target, target.compose(target.oplus(fw, fw2), target.oplus(fv, fv2)),
                   target.oplus(target.compose(fw, fv), target.compose(fw2, fv2)));
    detail::record(oplus_assoc, target, target.oplus(target.oplus(fv, fw), fv2),
                   target.oplus(fv, target.oplus(fw, fv2)));

    // copair(g, h) o (id (+) initial) = g, and symmetrically for h.
    const auto g = f.morphism(iso(c, a));
    const auto h = f.morphism(iso(c, b));
    const auto inj1 = target.oplus(target.identity(f.object(a)), target.initial(f.object(b)));
    const auto inj2 = target.oplus(target.initial(f.object(a)), target.identity(f.object(b)));
    detail::record(coproduct, target, target.compose(target.copair(g, h), inj1), g);
    detail::record(coproduct, target, target.compose(target.copair(g, h), inj2), h);
    detail::record(terminal, target, target.compose(target.terminal(f.object(c)), g),
                   target.terminal(f.object(a)));
  }
  report.checks = {functorial, tensor, colax, assoc, unit_law, interchange, oplus_assoc, coproduct, terminal};
  return report;
}

SelfTestReport self_test_isometry(const UnitaryFunctor<IsometryCategory>& f, const std::string& name,
                                  std::uint64_t seed, std::size_t samples = 20);

}  // namespace qbiperm
