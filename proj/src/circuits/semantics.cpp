#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

#include "qbiperm/circuits.hpp"
#include "qbiperm/error.hpp"

namespace qbiperm::circuits {

namespace {

[[noreturn]] void type_error(const Expr& e, const std::string& msg) {
  fail(ErrorKind::TypeError,
       msg + " at " + std::to_string(e.line) + ":" + std::to_string(e.column));
}

CircuitType pure_type(std::size_t dom, std::size_t cod) {
  return {Level::Pure, embed_object({dom}), embed_object({cod})};
}

CircuitType channel_type(CStarObject dom, CStarObject cod) {
  return {Level::Channel, std::move(dom), std::move(cod)};
}

void require_positive(const Expr& e) {
  for (auto n : e.params) {
    if (n == 0) type_error(e, e.name + " needs positive block sizes");
  }
}

using TypeEnv = std::map<std::string, CircuitType>;

CircuitType check(const Expr& e, const TypeEnv& env) {
  switch (e.kind) {
    case NodeKind::Gate:
      return e.name == "swap" || e.name == "cnot" ? pure_type(4, 4) : pure_type(2, 2);
    case NodeKind::Phase:
      return pure_type(2, 2);
    case NodeKind::Id:
      if (e.params.size() == 1) return pure_type(e.params[0], e.params[0]);
      require_positive(e);
      return channel_type(CStarObject(e.params), CStarObject(e.params));
    case NodeKind::Init:
      if (e.params[0] > e.params[1]) type_error(e, "init[m,n] needs m <= n");
      return pure_type(e.params[0], e.params[1]);
    case NodeKind::Perm: {
      const std::size_t n = e.name == "sym_plus" ? e.params[0] + e.params[1] : e.params[0] * e.params[1];
      return pure_type(n, n);
    }
    case NodeKind::Measure: {
      require_positive(e);
      const std::size_t total = std::accumulate(e.params.begin(), e.params.end(), std::size_t{0});
      return channel_type(CStarObject{total}, CStarObject(e.params));
    }
    case NodeKind::Discard:
      require_positive(e);
      return channel_type(CStarObject(e.params), CStarObject{1});
    case NodeKind::Name: {
      const auto it = env.find(e.name);
      if (it == env.end()) type_error(e, "unbound name '" + e.name + "'");
      return it->second;
    }
    case NodeKind::Let: {
      TypeEnv inner = env;
      inner[e.name] = check(*e.lhs, env);
      return check(*e.rhs, inner);
    }
    case NodeKind::Seq: {
      const CircuitType a = check(*e.lhs, env), b = check(*e.rhs, env);
      if (!(a.cod == b.dom)) {
        type_error(e, "cannot compose " + a.dom.to_string() + " -> " + a.cod.to_string() + " with " +
                          b.dom.to_string() + " -> " + b.cod.to_string());
      }
      const Level level = a.level == Level::Pure && b.level == Level::Pure ? Level::Pure : Level::Channel;
      return {level, a.dom, b.cod};
    }
    case NodeKind::Oplus: {
      const CircuitType a = check(*e.lhs, env), b = check(*e.rhs, env);
      if (a.level == Level::Pure && b.level == Level::Pure) {
        return pure_type(a.pure_dom() + b.pure_dom(), a.pure_cod() + b.pure_cod());
      }
      return channel_type(oplus(a.dom, b.dom), oplus(a.cod, b.cod));
    }
    case NodeKind::Otimes: {
      const CircuitType a = check(*e.lhs, env), b = check(*e.rhs, env);
      if (a.level == Level::Pure && b.level == Level::Pure) {
        return pure_type(a.pure_dom() * b.pure_dom(), a.pure_cod() * b.pure_cod());
      }
      return channel_type(otimes(a.dom, b.dom), otimes(a.cod, b.cod));
    }
  }
  type_error(e, "unknown node");
}

Matrix phase_gate(double theta) {
  return Matrix::diagonal(std::vector<Complex>{1.0, std::polar(1.0, theta)});
}

Matrix gate(const std::string& name) {
  if (name == "H") {
    const double r = 1.0 / std::sqrt(2.0);
    return Matrix::from_rows({{r, r}, {r, -r}});
  }
  if (name == "X") return pure::gamma_plus(1, 1);
  if (name == "Z") return Matrix::diagonal(std::vector<Complex>{1.0, -1.0});
  if (name == "S") return Matrix::diagonal(std::vector<Complex>{1.0, Complex(0.0, 1.0)});
  if (name == "T") return phase_gate(std::numbers::pi / 4);
  if (name == "swap") return pure::gamma_times(2, 2);
  return direct_sum(Matrix::identity(2), pure::gamma_plus(1, 1));  // cnot
}

Channel promote(const Value& v) {
  if (const auto* c = std::get_if<Channel>(&v)) return *c;
  const Matrix& m = std::get<Matrix>(v);
  return embed_E(m, {m.cols()}, {m.rows()});
}

using ValueEnv = std::map<std::string, Value>;

Value eval(const Expr& e, const ValueEnv& env) {
  switch (e.kind) {
    case NodeKind::Gate: return gate(e.name);
    case NodeKind::Phase: return phase_gate(e.angle.value());
    case NodeKind::Id:
      if (e.params.size() == 1) return pure::identity(e.params[0]);
      return structural::identity(CStarObject(e.params));
    case NodeKind::Init: return pure::inclusion(e.params[0], e.params[1]);
    case NodeKind::Perm:
      return e.name == "sym_plus" ? pure::gamma_plus(e.params[0], e.params[1])
                                  : pure::gamma_times(e.params[0], e.params[1]);
    case NodeKind::Measure: return structural::measure_phi(e.params);
    case NodeKind::Discard: return structural::terminal(CStarObject(e.params));
    case NodeKind::Name: return env.at(e.name);
    case NodeKind::Let: {
      ValueEnv inner = env;
      inner.insert_or_assign(e.name, eval(*e.lhs, env));
      return eval(*e.rhs, inner);
    }
    case NodeKind::Seq:
    case NodeKind::Oplus:
    case NodeKind::Otimes: {
      const Value a = eval(*e.lhs, env), b = eval(*e.rhs, env);
      const auto* ma = std::get_if<Matrix>(&a);
      const auto* mb = std::get_if<Matrix>(&b);
      if (ma && mb) {
        if (e.kind == NodeKind::Seq) return *mb * *ma;
        return e.kind == NodeKind::Oplus ? direct_sum(*ma, *mb) : kron(*ma, *mb);
      }
      const Channel f = promote(a), g = promote(b);
      if (e.kind == NodeKind::Seq) return compose(g, f);
      return e.kind == NodeKind::Oplus ? oplus(f, g) : otimes(f, g);
    }
  }
  type_error(e, "unknown node");
}

}  // namespace

CircuitType typecheck(const Expr& e) { return check(e, {}); }

Value evaluate(const Expr& e) {
  typecheck(e);
  return eval(e, {});
}

Channel evaluate_channel(const Expr& e) { return promote(evaluate(e)); }

}  // namespace qbiperm::circuits
