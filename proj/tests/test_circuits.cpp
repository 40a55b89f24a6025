#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "qbiperm/circuits.hpp"
#include "qbiperm/error.hpp"
#include "qbiperm/random.hpp"
#include "support.hpp"

using namespace qbiperm;
using namespace qbiperm::circuits;
using namespace testing;

namespace {

Matrix pure_value(std::string_view src) { return std::get<Matrix>(evaluate(*parse(src))); }

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::FormatError;
}

Matrix dft(std::size_t n) {
  Matrix f(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      f(j, k) = std::polar(1.0 / std::sqrt(double(n)), 2 * std::numbers::pi * double(j * k) / double(n));
    }
  }
  return f;
}

// Random well-typed pure expression of the given dimension.
ExprPtr random_pure(std::size_t n, int depth, Rng& rng) {
  const bool leaf = depth == 0 || uniform_index(0, 3, rng) == 0;
  if (leaf) {
    if (n == 2) {
      static const char* gates[] = {"H", "T", "S", "X", "Z"};
      const auto i = uniform_index(0, 5, rng);
      if (i == 5) {
        auto e = std::make_shared<Expr>(*make_node(NodeKind::Phase, "phase"));
        e->angle = Angle::multiple_of_pi(std::int64_t(uniform_index(0, 7, rng)) - 3, 4);
        return e;
      }
      return make_node(NodeKind::Gate, gates[i]);
    }
    if (n == 4 && uniform_index(0, 1, rng)) return make_node(NodeKind::Gate, uniform_index(0, 1, rng) ? "swap" : "cnot");
    if (n >= 2 && uniform_index(0, 1, rng)) {
      const std::size_t a = uniform_index(1, n - 1, rng);
      return make_node(NodeKind::Perm, "sym_plus", {a, n - a});
    }
    return make_node(NodeKind::Id, "id", {n});
  }
  switch (uniform_index(0, 2, rng)) {
    case 0:
      return make_binary(NodeKind::Seq, random_pure(n, depth - 1, rng), random_pure(n, depth - 1, rng));
    case 1:
      if (n >= 2) {
        const std::size_t a = uniform_index(1, n - 1, rng);
        return make_binary(NodeKind::Oplus, random_pure(a, depth - 1, rng), random_pure(n - a, depth - 1, rng));
      }
      [[fallthrough]];
    default:
      for (std::size_t a = 2; a < n; ++a) {
        if (n % a == 0) {
          return make_binary(NodeKind::Otimes, random_pure(a, depth - 1, rng), random_pure(n / a, depth - 1, rng));
        }
      }
      return random_pure(n, depth - 1, rng);
  }
}

}  // namespace

TEST_CASE("parsing") {
  const auto h = parse("H");
  CHECK(h->kind == NodeKind::Gate);
  CHECK(h->name == "H");

  const auto ct = parse("id[2] (+) phase(pi/4)");
  REQUIRE(ct->kind == NodeKind::Oplus);
  CHECK(ct->lhs->kind == NodeKind::Id);
  CHECK(ct->rhs->kind == NodeKind::Phase);
  CHECK(ct->rhs->angle.num == 1);
  CHECK(ct->rhs->angle.den == 4);

  // Precedence: (x) binds tighter than (+), which binds tighter than ;.
  const auto p = parse("H ; X (+) Z (x) S");
  REQUIRE(p->kind == NodeKind::Seq);
  REQUIRE(p->rhs->kind == NodeKind::Oplus);
  CHECK(p->rhs->rhs->kind == NodeKind::Otimes);

  const auto assoc = parse("H ; T ; S");
  REQUIRE(assoc->kind == NodeKind::Seq);
  CHECK(assoc->lhs->kind == NodeKind::Seq);

  CHECK(parse("phase(3*pi/4)")->angle.num == 3);
  CHECK(parse("phase(-2pi/8)")->angle.num == -1);
  CHECK(parse("phase(-2pi/8)")->angle.den == 4);
  CHECK_FALSE(parse("phase(0.25)")->angle.exact);
  CHECK(parse("phase(0.25)")->angle.value() == 0.25);

  const auto let = parse("let a = H ; T  # comment\nlet b = a (x) a\nb ; b");
  REQUIRE(let->kind == NodeKind::Let);
  CHECK(let->name == "a");
  CHECK(let->rhs->kind == NodeKind::Let);
  CHECK(typecheck(*let).pure_dom() == 4);

  CHECK_NOTHROW(load_file(data_path("circuits/qft3.qc")));
}

TEST_CASE("syntax errors carry positions") {
  const auto position = [](std::string_view src) -> std::pair<std::size_t, std::size_t> {
    try {
      parse(src);
    } catch (const SyntaxError& e) {
      CHECK(e.kind() == ErrorKind::SyntaxError);
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(position("H ;") == std::pair<std::size_t, std::size_t>{1, 4});
  CHECK(position("H\n  ; id[2") == std::pair<std::size_t, std::size_t>{2, 9});
  CHECK(position("H $ T") == std::pair<std::size_t, std::size_t>{1, 3});
  CHECK(position("phase(1.5pi)") == std::pair<std::size_t, std::size_t>{1, 7});
  CHECK(position("let H = X\nH") == std::pair<std::size_t, std::size_t>{1, 5});
  CHECK(position("init[1]") == std::pair<std::size_t, std::size_t>{1, 5});
  CHECK(position("(H ; T") == std::pair<std::size_t, std::size_t>{1, 7});
}

TEST_CASE("typing") {
  const auto t = typecheck(*parse("H ; T ; H"));
  CHECK(t.level == Level::Pure);
  CHECK(t.pure_dom() == 2);
  CHECK(t.pure_cod() == 2);

  const auto m = typecheck(*parse("measure[1,1]"));
  CHECK(m.level == Level::Channel);
  CHECK(m.dom == CStarObject{2});
  CHECK(m.cod == CStarObject{1, 1});

  CHECK(typecheck(*parse("init[1,2] (x) init[0,3]")).cod == CStarObject{6});
  CHECK(typecheck(*parse("init[1,2] (x) init[0,3]")).dom == CStarObject{});
  CHECK(typecheck(*parse("H (+) H ; measure[2,2]")).level == Level::Channel);
  CHECK(typecheck(*parse("discard[1,1]")).cod == CStarObject{1});
  CHECK(typecheck(*parse("id[2,3] (x) H")).dom == CStarObject{4, 6});
  CHECK(typecheck(*parse("measure[1,1] (+) H")).cod == CStarObject{1, 1, 2});

  // E(I (+) I)^{(x)2} -> (E(I) (+) E(I))^{(x)3} (x) E(I (+) I)^{(x)2}.
  const CStarObject qubit = embed_object({2});
  const CStarObject bit{1, 1};
  const auto pe = typecheck(*load_file(data_path("circuits/phase_estimation.qc")));
  CHECK(pe.level == Level::Channel);
  CHECK(pe.dom == otimes(qubit, qubit));
  CHECK(pe.cod == otimes(otimes(otimes(bit, bit), bit), otimes(qubit, qubit)));

  CHECK(kind_of([] { typecheck(*parse("H ; swap")); }) == ErrorKind::TypeError);
  CHECK(kind_of([] { typecheck(*parse("measure[1,1] ; H")); }) == ErrorKind::TypeError);
  CHECK(kind_of([] { typecheck(*parse("init[3,2]")); }) == ErrorKind::TypeError);
  CHECK(kind_of([] { typecheck(*parse("undefined_gate")); }) == ErrorKind::TypeError);
  CHECK(kind_of([] { typecheck(*parse("measure[0,2]")); }) == ErrorKind::TypeError);
}

TEST_CASE("pure evaluation") {
  CHECK(pure_value("X") == Matrix::from_rows({{0, 1}, {1, 0}}));
  CHECK(pure_value("cnot") == direct_sum(Matrix::identity(2), pauli_x()));
  CHECK(pure_value("swap") == Matrix::from_rows({{1, 0, 0, 0}, {0, 0, 1, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}}));
  CHECK(dist(pure_value("T"), t_gate()) < 1e-15);
  CHECK(dist(pure_value("phase(pi/4)"), t_gate()) < 1e-15);
  CHECK(dist(pure_value("id[2] (+) phase(pi/4)"), direct_sum(Matrix::identity(2), t_gate())) < 1e-15);
  CHECK(dist(pure_value("T ; T"), pure_value("S")) < 1e-15);
  CHECK(dist(pure_value("S ; S"), pure_value("Z")) < 1e-15);
  CHECK(dist(pure_value("H ; Z ; H"), pure_value("X")) < 1e-15);
  CHECK(pure_value("init[1,3]") == Matrix::from_rows({{1}, {0}, {0}}));
  CHECK(pure_value("sym_times[2,3]") == pure::gamma_times(2, 3));
  // The left factor of ; is applied first.
  CHECK(dist(pure_value("H ; S"), pure_value("S") * pure_value("H")) < 1e-15);

  const Matrix qft = std::get<Matrix>(evaluate(*load_file(data_path("circuits/qft3.qc"))));
  CHECK(dist(qft, dft(8)) < 1e-10);

  Rng rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = uniform_index(1, 8, rng);
    const auto e = random_pure(n, 6, rng);
    const Matrix v = std::get<Matrix>(evaluate(*e));
    CHECK(is_unitary(v, 1e-12));
    // E-promotion coherence.
    CHECK(channel_equal(evaluate_channel(*e), embed_E(v), 0).equal);
    // Round trip through the printer.
    const std::string src = print(*e);
    CHECK(print(*parse(src)) == src);
    CHECK(dist(std::get<Matrix>(evaluate(*parse(src))), v) < 1e-14);
  }
}

TEST_CASE("channel evaluation") {
  // Fair coin: |0> ; H ; measure.
  const Channel coin = evaluate_channel(*parse("init[1,2] ; H ; measure[1,1]"));
  REQUIRE(coin.cod() == CStarObject{1, 1});
  CHECK(std::abs(coin.block(0, 0)(0, 0) - 0.5) < 1e-12);
  CHECK(std::abs(coin.block(1, 0)(0, 0) - 0.5) < 1e-12);

  CHECK(channel_equal(evaluate_channel(*parse("measure[1,1]")),
                      structural::measure_phi(std::vector<std::size_t>{1, 1}), 0)
            .equal);
  CHECK(channel_equal(evaluate_channel(*parse("id[2,1]")), structural::identity({2, 1}), 0).equal);
  CHECK(channel_equal(evaluate_channel(*parse("H (x) id[2] ; measure[2,2]")),
                      compose(structural::measure_phi(std::vector<std::size_t>{2, 2}),
                              embed_E(kron(hadamard(), Matrix::identity(2)))),
                      1e-14)
            .equal);

  // Phase estimation of U = T (x) S on the eigenvector |11>: the phase is
  // 1/8 + 1/4 = 3/8, so the readout is 011 with certainty.
  const Channel pe = evaluate_channel(*load_file(data_path("circuits/phase_estimation.qc")));
  const Matrix state = Matrix::unit(4, 3, 3);
  const Element out = apply_map(pe, {state});
  for (std::size_t k = 0; k < 8; ++k) {
    INFO(k);
    CHECK(std::abs(out[k].trace() - (k == 3 ? 1.0 : 0.0)) < 1e-10);
  }
  CHECK(dist(out[3], state) < 1e-10);
}
