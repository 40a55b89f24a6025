#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qbiperm/algebra.hpp"
#include "qbiperm/linalg.hpp"

namespace qbiperm::circuits {

/// Either num/den * pi (exact) or a plain decimal in radians.
struct Angle {
  bool exact = true;
  std::int64_t num = 0;
  std::int64_t den = 1;
  double radians = 0.0;
  std::string text;  // decimal spelling, kept for printing

  double value() const;
  static Angle multiple_of_pi(std::int64_t num, std::int64_t den);
  static Angle decimal(double radians, std::string text);
};

enum class NodeKind {
  Gate,     // H, T, S, X, Z, swap, cnot
  Id,       // id[n] (pure) or id[n1,...,nk] with k >= 2 (channel)
  Phase,    // phase(theta) = 1 (+) e^{i theta}
  Init,     // init[m,n] = iota_{m,n}
  Measure,  // measure[n1,...,nk] : [sum n] -> [n1,...,nk]
  Discard,  // discard[n1,...,nk] : [n1,...,nk] -> [1]
  Perm,     // sym_plus[n,m] (gamma) or sym_times[n,m] (gamma')
  Seq,
  Oplus,
  Otimes,
  Name,
  Let,      // let name = lhs in rhs
};

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  NodeKind kind = NodeKind::Gate;
  std::string name;                 // gate, perm, bound or referenced name
  std::vector<std::size_t> params;  // bracketed naturals
  Angle angle;
  ExprPtr lhs, rhs;
  std::size_t line = 1, column = 1;
};

ExprPtr make_node(NodeKind kind, std::string name = {}, std::vector<std::size_t> params = {});
ExprPtr make_binary(NodeKind kind, ExprPtr lhs, ExprPtr rhs);

/// Program := ('let' name '=' expr)* expr, with '#' line comments.
ExprPtr parse(std::string_view text);

/// Normalized source: minimal parentheses, single spaces around operators,
/// one let-binding per line.
std::string print(const Expr& e);

enum class Level { Pure, Channel };

/// Pure types are kept E-promoted: n is stored as [n] ([] for n = 0).
struct CircuitType {
  Level level = Level::Pure;
  CStarObject dom;
  CStarObject cod;

  std::size_t pure_dom() const { return dom.total_dim(); }
  std::size_t pure_cod() const { return cod.total_dim(); }
  friend bool operator==(const CircuitType&, const CircuitType&) = default;
};

CircuitType typecheck(const Expr& e);

using Value = std::variant<Matrix, Channel>;

/// Pure expressions give an isometry, channel expressions a Schrodinger Channel.
Value evaluate(const Expr& e);
Channel evaluate_channel(const Expr& e);

ExprPtr load_file(const std::string& path);

}  // namespace qbiperm::circuits
