#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "qbiperm/circuits.hpp"
#include "qbiperm/error.hpp"

namespace qbiperm::circuits {

double Angle::value() const {
  return exact ? std::numbers::pi * static_cast<double>(num) / static_cast<double>(den) : radians;
}

Angle Angle::multiple_of_pi(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::ShapeError, "angle denominator is zero");
  if (den < 0) num = -num, den = -den;
  const std::int64_t g = std::gcd(num, den);
  Angle a;
  a.num = g == 0 ? 0 : num / g;
  a.den = g == 0 ? 1 : den / g;
  return a;
}

Angle Angle::decimal(double radians, std::string text) {
  Angle a;
  a.exact = false;
  a.radians = radians;
  a.text = std::move(text);
  return a;
}

ExprPtr make_node(NodeKind kind, std::string name, std::vector<std::size_t> params) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->name = std::move(name);
  e->params = std::move(params);
  return e;
}

ExprPtr make_binary(NodeKind kind, ExprPtr lhs, ExprPtr rhs) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->line = lhs->line;
  e->column = lhs->column;
  e->lhs = std::move(lhs);
  e->rhs = std::move(rhs);
  return e;
}

namespace {

enum class Tok { Ident, Number, Oplus, Otimes, LParen, RParen, LBracket, RBracket, Comma, Semi, Equals, Star, Slash, Minus, End };

struct Token {
  Tok kind;
  std::string text;
  std::size_t line, column;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t k) {
    for (std::size_t j = 0; j < k; ++j, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    const std::size_t l = line, k = col;
    if (src.substr(i, 3) == "(+)") {
      out.push_back({Tok::Oplus, "(+)", l, k});
      advance(3);
      continue;
    }
    if (src.substr(i, 3) == "(x)") {
      out.push_back({Tok::Otimes, "(x)", l, k});
      advance(3);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t e = j + 1;
        if (e < src.size() && (src[e] == '+' || src[e] == '-')) ++e;
        if (e < src.size() && std::isdigit(static_cast<unsigned char>(src[e]))) {
          j = e;
          while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        }
      }
      out.push_back({Tok::Number, std::string(src.substr(i, j - i)), l, k});
      advance(j - i);
      continue;
    }
    Tok kind;
    switch (c) {
      case '(': kind = Tok::LParen; break;
      case ')': kind = Tok::RParen; break;
      case '[': kind = Tok::LBracket; break;
      case ']': kind = Tok::RBracket; break;
      case ',': kind = Tok::Comma; break;
      case ';': kind = Tok::Semi; break;
      case '=': kind = Tok::Equals; break;
      case '*': kind = Tok::Star; break;
      case '/': kind = Tok::Slash; break;
      case '-': kind = Tok::Minus; break;
      default: throw SyntaxError(std::string("unexpected character '") + c + "'", l, k);
    }
    out.push_back({kind, std::string(1, c), l, k});
    advance(1);
  }
  out.push_back({Tok::End, "end of input", line, col});
  return out;
}

bool is_builtin(std::string_view s) {
  return s == "H" || s == "T" || s == "S" || s == "X" || s == "Z" || s == "swap" || s == "cnot";
}

bool is_reserved(std::string_view s) {
  return is_builtin(s) || s == "let" || s == "id" || s == "phase" || s == "init" ||
         s == "measure" || s == "discard" || s == "sym_plus" || s == "sym_times" || s == "pi";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  ExprPtr program() {
    ExprPtr e = bindings();
    expect(Tok::End, "end of input");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view s) const { return at(Tok::Ident) && peek().text == s; }
  const Token& take() { return toks_[pos_++]; }

  [[noreturn]] void unexpected(std::string_view wanted) const {
    const Token& t = peek();
    throw SyntaxError("expected " + std::string(wanted) + ", found '" + t.text + "'", t.line, t.column);
  }

  const Token& expect(Tok k, std::string_view wanted) {
    if (!at(k)) unexpected(wanted);
    return take();
  }

  ExprPtr bindings() {
    if (!at_ident("let")) return expr();
    const Token& kw = take();
    const Token& name = expect(Tok::Ident, "a name");
    if (is_reserved(name.text))
      throw SyntaxError("'" + name.text + "' is reserved", name.line, name.column);
    expect(Tok::Equals, "'='");
    ExprPtr bound = expr();
    ExprPtr body = bindings();
    auto e = std::make_shared<Expr>();
    e->kind = NodeKind::Let;
    e->name = name.text;
    e->lhs = std::move(bound);
    e->rhs = std::move(body);
    e->line = kw.line;
    e->column = kw.column;
    return e;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    while (at(Tok::Semi)) {
      take();
      e = make_binary(NodeKind::Seq, e, term());
    }
    return e;
  }

  ExprPtr term() {
    ExprPtr e = factor();
    while (at(Tok::Oplus)) {
      take();
      e = make_binary(NodeKind::Oplus, e, factor());
    }
    return e;
  }

  ExprPtr factor() {
    ExprPtr e = atom();
    while (at(Tok::Otimes)) {
      take();
      e = make_binary(NodeKind::Otimes, e, atom());
    }
    return e;
  }

  std::size_t nat() {
    const Token& t = expect(Tok::Number, "a natural number");
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw SyntaxError("'" + t.text + "' is not a natural number", t.line, t.column);
    return v;
  }

  std::vector<std::size_t> nats(std::size_t exactly = 0) {
    const Token& open = expect(Tok::LBracket, "'['");
    std::vector<std::size_t> v{nat()};
    while (at(Tok::Comma)) {
      take();
      v.push_back(nat());
    }
    expect(Tok::RBracket, "']'");
    if (exactly != 0 && v.size() != exactly)
      throw SyntaxError("expected " + std::to_string(exactly) + " bracketed arguments", open.line,
                        open.column);
    return v;
  }

  std::int64_t integer() {
    const Token& t = expect(Tok::Number, "an integer");
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc() || p != t.text.data() + t.text.size())
      throw SyntaxError("multiples of pi need integer coefficients, found '" + t.text + "'", t.line,
                        t.column);
    return v;
  }

  Angle angle() {
    bool negative = false;
    if (at(Tok::Minus)) {
      take();
      negative = true;
    }
    std::int64_t num = 1;
    if (at(Tok::Number)) {
      const std::size_t save = pos_;
      const Token& t = take();
      const bool times_pi = at(Tok::Star) || at_ident("pi");
      if (!times_pi) {
        double v = 0;
        const auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (ec != std::errc() || p != t.text.data() + t.text.size())
          throw SyntaxError("malformed number '" + t.text + "'", t.line, t.column);
        return Angle::decimal(negative ? -v : v, (negative ? "-" : "") + t.text);
      }
      pos_ = save;
      num = integer();
      if (at(Tok::Star)) take();
    }
    if (!at_ident("pi")) unexpected("an angle");
    take();
    std::int64_t den = 1;
    if (at(Tok::Slash)) {
      take();
      const Token& t = peek();
      den = integer();
      if (den == 0) throw SyntaxError("zero denominator", t.line, t.column);
    }
    return Angle::multiple_of_pi(negative ? -num : num, den);
  }

  ExprPtr atom() {
    const Token& t = peek();
    if (at(Tok::LParen)) {
      take();
      ExprPtr inner = expr();
      expect(Tok::RParen, "')'");
      return inner;
    }
    if (!at(Tok::Ident)) unexpected("a circuit");
    const std::string word = take().text;
    auto fresh = [&](NodeKind kind, std::vector<std::size_t> params = {}) {
      auto node = std::make_shared<Expr>();
      node->kind = kind;
      node->name = word;
      node->params = std::move(params);
      return node;
    };
    std::shared_ptr<Expr> e;
    if (word == "id") {
      e = fresh(NodeKind::Id, nats());
    } else if (word == "init") {
      e = fresh(NodeKind::Init, nats(2));
    } else if (word == "measure") {
      e = fresh(NodeKind::Measure, nats());
    } else if (word == "discard") {
      e = fresh(NodeKind::Discard, nats());
    } else if (word == "sym_plus" || word == "sym_times") {
      e = fresh(NodeKind::Perm, nats(2));
    } else if (word == "phase") {
      expect(Tok::LParen, "'('");
      e = fresh(NodeKind::Phase);
      e->angle = angle();
      expect(Tok::RParen, "')'");
    } else if (is_builtin(word)) {
      e = fresh(NodeKind::Gate);
    } else if (word == "let" || word == "pi") {
      throw SyntaxError("unexpected '" + word + "'", t.line, t.column);
    } else {
      e = fresh(NodeKind::Name);
    }
    e->line = t.line;
    e->column = t.column;
    return e;
  }
};

std::string print_angle(const Angle& a) {
  if (!a.exact) return a.text;
  if (a.num == 0) return "0";
  std::string s = a.num == 1 ? "pi" : a.num == -1 ? "-pi" : std::to_string(a.num) + "*pi";
  if (a.den != 1) s += "/" + std::to_string(a.den);
  return s;
}

std::string print_list(const std::vector<std::size_t>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::Let: return 0;
    case NodeKind::Seq: return 1;
    case NodeKind::Oplus: return 2;
    case NodeKind::Otimes: return 3;
    default: return 4;
  }
}

std::string print_at(const Expr& e, int min_prec) {
  std::string s;
  switch (e.kind) {
    case NodeKind::Gate:
    case NodeKind::Name: s = e.name; break;
    case NodeKind::Id:
    case NodeKind::Init:
    case NodeKind::Measure:
    case NodeKind::Discard:
    case NodeKind::Perm: s = e.name + print_list(e.params); break;
    case NodeKind::Phase: s = "phase(" + print_angle(e.angle) + ")"; break;
    case NodeKind::Let:
      s = "let " + e.name + " = " + print_at(*e.lhs, 1) + "\n" + print_at(*e.rhs, 0);
      break;
    case NodeKind::Seq:
    case NodeKind::Oplus:
    case NodeKind::Otimes: {
      const int p = precedence(e.kind);
      const char* op = e.kind == NodeKind::Seq ? " ; " : e.kind == NodeKind::Oplus ? " (+) " : " (x) ";
      s = print_at(*e.lhs, p) + op + print_at(*e.rhs, p + 1);
      break;
    }
  }
  return precedence(e.kind) < min_prec ? "(" + s + ")" : s;
}

}  // namespace

ExprPtr parse(std::string_view text) { return Parser(lex(text)).program(); }

std::string print(const Expr& e) { return print_at(e, 0); }

ExprPtr load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::FormatError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

}  // namespace qbiperm::circuits
