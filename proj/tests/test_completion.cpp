#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qbiperm/completion.hpp"
#include "qbiperm/error.hpp"
#include "qbiperm/random.hpp"
#include "support.hpp"

using namespace qbiperm;
using namespace testing;

namespace {

double gap(const Channel& f, const Channel& g) { return channel_equal(f, g, 0).distance; }

Channel random_pair_channel(Rng& rng) {
  const CStarObject dom{uniform_index(1, 2, rng), uniform_index(1, 2, rng)};
  const CStarObject cod{uniform_index(1, 2, rng)};
  return random_channel(dom, cod, rng);
}

}  // namespace

TEST_CASE("lifting isometries") {
  const IsometryCategory iso;
  Rng rng(41);
  const Matrix u = random_unitary(3, rng);
  CHECK(dist(lift_isometry(iso, inclusion_functor(), u), u) < 1e-15);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = uniform_index(1, 6, rng);
    const Matrix v = random_isometry(n, uniform_index(0, n, rng), rng);
    CHECK(dist(lift_isometry(iso, inclusion_functor(), v), v) < 1e-12);
    CHECK(dist(lift_isometry(iso, conjugation_functor(), v), v.conj()) < 1e-12);
  }
  CHECK(self_test_isometry(inclusion_functor(), "isometry", 0).passed());
  CHECK(self_test_isometry(conjugation_functor(), "isometry_conjugate", 1).passed());
}

TEST_CASE("lifting *-homomorphisms") {
  const CptpCategory cptp;
  const auto e = embedding_functor();
  Rng rng(42);
  const Matrix u = random_unitary(3, rng);
  CHECK(gap(lift_starhom(cptp, e, dualize(embed_E(u))), embed_E(u)) <= 1e-8);

  const std::size_t split[] = {1, 1};
  const Channel phi = structural::measure_phi(split);
  CHECK(gap(lift_starhom(cptp, e, dualize(phi)), phi) <= 1e-8);

  const auto conj = conjugate_embedding_functor();
  for (int trial = 0; trial < 30; ++trial) {
    const std::vector<std::size_t> mbar{uniform_index(1, 2, rng), uniform_index(1, 2, rng)};
    const std::vector<std::size_t> sbar{uniform_index(0, 2, rng), uniform_index(1, 2, rng)};
    const Channel h = random_star_hom(mbar, sbar, rng);
    const Channel dual = dualize(h);
    CHECK(gap(lift_starhom(cptp, e, h), dual) <= 1e-8);
    CHECK(gap(lift_starhom(cptp, conj, h), conjugate_channel(dual)) <= 1e-8);
    // The star-hom route and the channel route agree on the same morphism.
    CHECK(gap(lift_starhom(cptp, conj, h), lift_channel(cptp, conj, dual)) <= 1e-8);
  }

  // A two-block codomain: (+) of star homs.
  const Channel h2 = oplus(random_star_hom({1, 2}, {1, 1}, rng), random_star_hom({2}, {2}, rng));
  CHECK(gap(lift_starhom(cptp, e, h2), dualize(h2)) <= 1e-8);

  std::string kind;
  try {
    lift_starhom(cptp, e, dualize(amplitude_damping()));
  } catch (const Error& err) {
    kind = std::string(kind_name(err.kind()));
  }
  CHECK(kind == "NotStarHom");
}

TEST_CASE("lifting channels into CPTP reproduces the channel") {
  const CptpCategory cptp;
  const auto e = embedding_functor();
  const std::size_t split[] = {1, 1};
  const std::vector<Channel> corpus{structural::identity({2}), structural::measure_phi(split),
                                    structural::partial_trace(2, 2), amplitude_damping(),
                                    copair(prep(0), prep(1)), structural::identity({1, 3, 2})};
  for (const auto& g : corpus) CHECK(gap(lift_channel(cptp, e, g), g) <= 1e-8);

  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = uniform_index(1, 4, rng);
    const Matrix v = random_isometry(n, uniform_index(1, n, rng), rng);
    CHECK(gap(lift_channel(cptp, e, embed_E(v)), e.morphism(v)) <= 1e-8);
  }

  // Real Choi matrices are fixed by conjugation.
  const auto conj = conjugate_embedding_functor();
  CHECK(gap(lift_channel(cptp, conj, amplitude_damping()), amplitude_damping()) <= 1e-8);
  for (int trial = 0; trial < 20; ++trial) {
    const Channel g = random_pair_channel(rng);
    CHECK(gap(lift_channel(cptp, conj, g), conjugate_channel(g)) <= 1e-8);
  }

  // The initial map lifts to the initial map.
  CHECK(gap(lift_channel(cptp, e, structural::initial({2, 1})), cptp.initial({2, 1})) == 0.0);
  CHECK(gap(lift_channel(cptp, conj, structural::initial({3})), cptp.initial({3})) == 0.0);

  CHECK_THROWS_AS(lift_channel(cptp, e, dualize(amplitude_damping())), Error);
}

TEST_CASE("lifts do not depend on the chosen dilation") {
  const CptpCategory cptp;
  const auto conj = conjugate_embedding_functor();
  Rng rng(44);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t p = uniform_index(1, 3, rng);
    const CStarObject cod{uniform_index(1, 2, rng), uniform_index(1, 2, rng)};
    const Channel g = random_channel({p}, cod, rng, uniform_index(1, 3, rng));
    const auto base = lift_channel(cptp, conj, g);

    const KrausGrid kr = kraus_from_choi(g);
    // Schrodinger Kraus per codomain block, reversed and duplicated.
    std::vector<std::vector<Matrix>> reversed(cod.size()), doubled(cod.size());
    for (std::size_t i = 0; i < cod.size(); ++i) {
      const auto& ops = kr[i][0];
      for (auto it = ops.rbegin(); it != ops.rend(); ++it) reversed[i].push_back(*it);
      for (const auto& op : ops) {
        doubled[i].push_back(std::sqrt(0.25) * op);
        doubled[i].push_back(std::sqrt(0.75) * op);
      }
    }
    const NormalForm nr = normal_form_from_kraus(cod.dims(), p, reversed, Picture::schrodinger);
    const NormalForm nd = normal_form_from_kraus(cod.dims(), p, doubled, Picture::schrodinger);
    CHECK(gap(lift_normal_forms(cptp, conj, cod, {nr}), base) <= 1e-8);
    CHECK(gap(lift_normal_forms(cptp, conj, cod, {nd}), base) <= 1e-8);
  }
}

TEST_CASE("lifts are strict for (+) and (x)") {
  const CptpCategory cptp;
  const auto conj = conjugate_embedding_functor();
  Rng rng(45);
  for (int trial = 0; trial < 50; ++trial) {
    const Channel g = random_pair_channel(rng);
    const Channel h = random_channel({uniform_index(1, 2, rng)}, {uniform_index(1, 2, rng), 1}, rng);
    const auto lg = lift_channel(cptp, conj, g);
    const auto lh = lift_channel(cptp, conj, h);
    CHECK(gap(lift_channel(cptp, conj, oplus(g, h)), oplus(lg, lh)) <= 1e-8);
    CHECK(gap(lift_channel(cptp, conj, otimes(g, h)), otimes(lg, lh)) <= 1e-8);
  }
}

TEST_CASE("builtin targets") {
  const TerminalCategory terminal;
  const auto tf = terminal_functor();
  CHECK(lift_channel(terminal, tf, amplitude_damping()) == TerminalCategory::Morphism{});
  CHECK(self_test(terminal, tf, "terminal_category", 0).passed());

  const CptpCategory cptp;
  const auto cptp_report = self_test(cptp, embedding_functor(), "cptp", 0);
  for (const auto& c : cptp_report.checks) {
    INFO(c.name);
    CHECK(c.passed());
    CHECK(c.samples > 0);
  }
  CHECK(self_test(cptp, conjugate_embedding_functor(), "cptp_conjugate", 3).passed());

  // F(T) for the conjugated embedding is Ad of diag(1, e^{-i pi/4}).
  const Channel ft = conjugate_embedding_functor().morphism(t_gate());
  const Matrix tbar = Matrix::from_rows({{1, 0}, {0, std::exp(-I * (std::numbers::pi / 4))}});
  CHECK(gap(ft, embed_E(tbar)) < 1e-15);
}
