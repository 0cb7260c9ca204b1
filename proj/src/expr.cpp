#include "rankrec/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <string>

#include "rankrec/errors.hpp"
#include "rankrec/rank.hpp"

namespace rankrec::expr {

// ---------------------------------------------------------------------------
// Construction and equality

Expr Expr::number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return Expr(std::move(n));
}

Expr Expr::var_x() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::VarX;
  return Expr(std::move(n));
}

Expr Expr::var_n() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::VarN;
  return Expr(std::move(n));
}

Expr Expr::var_y(int index) {
  if (index < 1) throw ArgumentError("y variable index must be >= 1");
  auto n = std::make_shared<Node>();
  n->kind = Kind::VarY;
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::neg(Expr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->args.push_back(std::move(a));
  return Expr(std::move(n));
}

Expr Expr::binary(Kind op, Expr a, Expr b) {
  if (op != Kind::Add && op != Kind::Sub && op != Kind::Mul && op != Kind::Div && op != Kind::Pow) {
    throw ArgumentError("Expr::binary: not a binary operator");
  }
  auto n = std::make_shared<Node>();
  n->kind = op;
  n->args = {std::move(a), std::move(b)};
  return Expr(std::move(n));
}

Expr Expr::call(Func f, std::vector<Expr> args) {
  const bool unary = f != Func::Max && f != Func::Min;
  if (unary ? args.size() != 1 : args.empty()) throw ArgumentError("Expr::call: bad arity");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->args = std::move(args);
  return Expr(std::move(n));
}

Expr Expr::rank(int k, std::vector<Expr> args) {
  if (k < 1 || static_cast<std::size_t>(k) > args.size()) {
    throw ArgumentError("Expr::rank: rank index outside 1..argument count");
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Rank;
  n->index = k;
  n->args = std::move(args);
  return Expr(std::move(n));
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
  switch (x.kind) {
    case Kind::Number:
      if (std::signbit(x.value) != std::signbit(y.value) || x.value != y.value) return false;
      break;
    case Kind::VarY:
    case Kind::Rank:
      if (x.index != y.index) return false;
      break;
    case Kind::Call:
      if (x.func != y.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!(x.args[i] == y.args[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

enum class Tok { Number, Ident, LParen, RParen, Comma, Semicolon, Plus, Minus, Star, Slash, Caret, End };

struct Token {
  Tok type = Tok::End;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1;
  int col = 1;
  std::size_t i = 0;
  auto advance = [&](std::size_t count) {
    for (std::size_t j = 0; j < count; ++j) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++i;
    }
  };
  while (i < src.size()) {
    const char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < src.size() && (std::isdigit(static_cast<unsigned char>(src[j])) || src[j] == '.')) ++j;
      if (j < src.size() && (src[j] == 'e' || src[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < src.size() && (src[k] == '+' || src[k] == '-')) ++k;
        if (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) {
          while (k < src.size() && std::isdigit(static_cast<unsigned char>(src[k]))) ++k;
          j = k;
        }
      }
      const std::string_view lit = src.substr(i, j - i);
      double v = 0.0;
      const auto res = std::from_chars(lit.data(), lit.data() + lit.size(), v);
      if (res.ec != std::errc() || res.ptr != lit.data() + lit.size()) {
        throw ParseError(ParseError::Kind::Syntax, "malformed number '" + std::string(lit) + "'", line, col);
      }
      t.type = Tok::Number;
      t.text = std::string(lit);
      t.number = v;
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) ++j;
      t.type = Tok::Ident;
      t.text = std::string(src.substr(i, j - i));
      out.push_back(std::move(t));
      advance(j - i);
      continue;
    }
    switch (c) {
      case '(': t.type = Tok::LParen; break;
      case ')': t.type = Tok::RParen; break;
      case ',': t.type = Tok::Comma; break;
      case ';': t.type = Tok::Semicolon; break;
      case '+': t.type = Tok::Plus; break;
      case '-': t.type = Tok::Minus; break;
      case '*': t.type = Tok::Star; break;
      case '/': t.type = Tok::Slash; break;
      case '^': t.type = Tok::Caret; break;
      default:
        throw ParseError(ParseError::Kind::Syntax, std::string("unexpected character '") + c + "'", line, col);
    }
    t.text = std::string(1, c);
    out.push_back(std::move(t));
    advance(1);
  }
  Token end;
  end.type = Tok::End;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

struct FuncInfo {
  std::string_view name;
  Func func;
  bool variadic;
};

constexpr std::array<FuncInfo, 7> kFuncs{{{"exp", Func::Exp, false},
                                          {"ln", Func::Ln, false},
                                          {"sin", Func::Sin, false},
                                          {"cos", Func::Cos, false},
                                          {"abs", Func::Abs, false},
                                          {"max", Func::Max, true},
                                          {"min", Func::Min, true}}};

class Parser {
 public:
  // arity == 0 selects the scalar grammar (x, n); otherwise y1..y_arity.
  Parser(std::string_view src, int arity) : toks_(lex(src)), arity_(arity) {}

  Expr parse() {
    Expr e = expression();
    if (peek().type != Tok::End) fail(ParseError::Kind::Syntax, "unexpected '" + peek().text + "'");
    return e;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg) const { fail_at(kind, msg, peek()); }
  [[noreturn]] static void fail_at(ParseError::Kind kind, const std::string& msg, const Token& t) {
    throw ParseError(kind, msg, t.line, t.column);
  }

  void expect(Tok type, const char* what) {
    if (peek().type != type) {
      const std::string got = peek().type == Tok::End ? "end of input" : "'" + peek().text + "'";
      fail(ParseError::Kind::Syntax, std::string("expected ") + what + ", found " + got);
    }
    next();
  }

  Expr expression() {
    Expr lhs = term();
    while (peek().type == Tok::Plus || peek().type == Tok::Minus) {
      const Kind op = next().type == Tok::Plus ? Kind::Add : Kind::Sub;
      lhs = Expr::binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  Expr term() {
    Expr lhs = unary();
    while (peek().type == Tok::Star || peek().type == Tok::Slash) {
      const Kind op = next().type == Tok::Star ? Kind::Mul : Kind::Div;
      lhs = Expr::binary(op, std::move(lhs), unary());
    }
    return lhs;
  }

  Expr unary() {
    if (peek().type == Tok::Plus) {
      next();
      return unary();
    }
    if (peek().type == Tok::Minus) {
      // "-2" is a negative literal unless it is the base of a power.
      if (peek(1).type == Tok::Number && peek(2).type != Tok::Caret) {
        next();
        return Expr::number(-next().number);
      }
      next();
      return Expr::neg(unary());
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (peek().type != Tok::Caret) return base;
    const Token caret = next();
    Expr exponent = unary();
    if (!is_constant(exponent)) {
      fail_at(ParseError::Kind::NonConstantExponent, "exponent of '^' must be constant", caret);
    }
    return Expr::binary(Kind::Pow, std::move(base), std::move(exponent));
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    args.push_back(expression());
    while (peek().type == Tok::Comma) {
      next();
      args.push_back(expression());
    }
    expect(Tok::RParen, "')'");
    return args;
  }

  Expr primary() {
    const Token& t = peek();
    switch (t.type) {
      case Tok::Number:
        return Expr::number(next().number);
      case Tok::LParen: {
        next();
        Expr e = expression();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::Ident:
        return identifier();
      case Tok::End:
        fail(ParseError::Kind::Syntax, "unexpected end of input");
      default:
        fail(ParseError::Kind::Syntax, "unexpected '" + t.text + "'");
    }
  }

  Expr identifier() {
    const Token id = next();
    const std::string& name = id.text;
    if (name == "rank") return rank_call(id);
    for (const auto& f : kFuncs) {
      if (name != f.name) continue;
      if (peek().type != Tok::LParen) fail(ParseError::Kind::Syntax, "expected '(' after " + name);
      next();
      std::vector<Expr> args = arguments();
      if (!f.variadic && args.size() != 1) {
        fail_at(ParseError::Kind::Arity, name + " takes 1 argument, got " + std::to_string(args.size()), id);
      }
      return Expr::call(f.func, std::move(args));
    }
    if (peek().type == Tok::LParen) fail_at(ParseError::Kind::UnknownIdentifier, "unknown function '" + name + "'", id);
    if (name == "pi") return Expr::number(std::numbers::pi);
    if (arity_ == 0) {
      if (name == "x") return Expr::var_x();
      if (name == "n") return Expr::var_n();
      fail_at(ParseError::Kind::UnknownIdentifier, "unknown identifier '" + name + "' (scalar functions use x and n)", id);
    }
    if (name.size() > 1 && name[0] == 'y' &&
        name.find_first_not_of("0123456789", 1) == std::string::npos && name[1] != '0') {
      int index = 0;
      const auto res = std::from_chars(name.data() + 1, name.data() + name.size(), index);
      if (res.ec != std::errc() || index > arity_) {
        fail_at(ParseError::Kind::Arity,
                "'" + name + "' exceeds the block arity " + std::to_string(arity_), id);
      }
      return Expr::var_y(index);
    }
    fail_at(ParseError::Kind::UnknownIdentifier,
            "unknown identifier '" + name + "' (block functions use y1..y" + std::to_string(arity_) + ")", id);
  }

  Expr rank_call(const Token& id) {
    if (peek().type != Tok::LParen) fail(ParseError::Kind::Syntax, "expected '(' after rank");
    next();
    const Token& kt = peek();
    if (kt.type != Tok::Number) {
      fail(ParseError::Kind::NonLiteralRank, "rank index must be a literal positive integer");
    }
    const double kv = kt.number;
    if (kv < 1 || kv != std::floor(kv) || kv > 1e6) {
      fail(ParseError::Kind::NonLiteralRank, "rank index must be a literal positive integer");
    }
    next();
    expect(Tok::Semicolon, "';' after rank index");
    std::vector<Expr> args = arguments();
    const int k = static_cast<int>(kv);
    if (static_cast<std::size_t>(k) > args.size()) {
      fail_at(ParseError::Kind::Arity,
              "rank index " + std::to_string(k) + " exceeds argument count " + std::to_string(args.size()), id);
    }
    return Expr::rank(k, std::move(args));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int arity_;
};

// ---------------------------------------------------------------------------
// Printer

int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub:
      return 1;
    case Kind::Mul:
    case Kind::Div:
      return 2;
    case Kind::Neg:
      return 3;
    case Kind::Pow:
      return 4;
    case Kind::Number:
      return std::signbit(n.value) ? 3 : 5;
    default:
      return 5;
  }
}

std::string format_number(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string_view func_name(Func f) {
  for (const auto& info : kFuncs) {
    if (info.func == f) return info.name;
  }
  return "?";
}

void print(const Expr& e, std::string& out);

void print_child(const Expr& child, bool parens, std::string& out) {
  if (parens) out += '(';
  print(child, out);
  if (parens) out += ')';
}

void print(const Expr& e, std::string& out) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
      out += format_number(n.value);
      return;
    case Kind::VarX:
      out += 'x';
      return;
    case Kind::VarN:
      out += 'n';
      return;
    case Kind::VarY:
      out += 'y' + std::to_string(n.index);
      return;
    case Kind::Neg: {
      const Node& c = n.args[0].node();
      out += '-';
      print_child(n.args[0], c.kind == Kind::Number || precedence(c) < 3, out);
      return;
    }
    case Kind::Pow:
      print_child(n.args[0], precedence(n.args[0].node()) <= 4, out);
      out += '^';
      print_child(n.args[1], precedence(n.args[1].node()) < 3, out);
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      const int p = precedence(n);
      print_child(n.args[0], precedence(n.args[0].node()) < p, out);
      switch (n.kind) {
        case Kind::Add: out += " + "; break;
        case Kind::Sub: out += " - "; break;
        case Kind::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      print_child(n.args[1], precedence(n.args[1].node()) <= p, out);
      return;
    }
    case Kind::Call:
    case Kind::Rank: {
      if (n.kind == Kind::Call) {
        out += func_name(n.func);
        out += '(';
      } else {
        out += "rank(" + std::to_string(n.index) + "; ";
      }
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(n.args[i], out);
      }
      out += ')';
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

struct Bindings {
  double x = 0.0;
  double n = 0.0;
  std::span<const double> y;
};

[[noreturn]] void domain_fail(const std::string& what, const Expr& at) {
  throw NumericDomainError(what + " in '" + to_string(at) + "'");
}

double eval_node(const Expr& e, const Bindings& b) {
  const Node& n = e.node();
  double r = 0.0;
  switch (n.kind) {
    case Kind::Number:
      return n.value;
    case Kind::VarX:
      return b.x;
    case Kind::VarN:
      return b.n;
    case Kind::VarY:
      if (static_cast<std::size_t>(n.index) > b.y.size()) {
        throw ArgumentError("y" + std::to_string(n.index) + " not bound (" + std::to_string(b.y.size()) +
                            " values supplied)");
      }
      return b.y[static_cast<std::size_t>(n.index - 1)];
    case Kind::Neg:
      return -eval_node(n.args[0], b);
    case Kind::Add:
      r = eval_node(n.args[0], b) + eval_node(n.args[1], b);
      break;
    case Kind::Sub:
      r = eval_node(n.args[0], b) - eval_node(n.args[1], b);
      break;
    case Kind::Mul:
      r = eval_node(n.args[0], b) * eval_node(n.args[1], b);
      break;
    case Kind::Div: {
      const double num = eval_node(n.args[0], b);
      const double den = eval_node(n.args[1], b);
      if (den == 0.0) domain_fail("division by zero", e);
      r = num / den;
      break;
    }
    case Kind::Pow: {
      const double base = eval_node(n.args[0], b);
      const double ex = eval_node(n.args[1], b);
      if (base < 0.0 && ex != std::floor(ex)) {
        domain_fail("negative base " + format_number(base) + " with non-integer exponent", e);
      }
      if (base == 0.0 && ex < 0.0) domain_fail("zero base with negative exponent", e);
      r = std::pow(base, ex);
      break;
    }
    case Kind::Call: {
      if (n.func == Func::Max || n.func == Func::Min) {
        r = eval_node(n.args[0], b);
        for (std::size_t i = 1; i < n.args.size(); ++i) {
          const double v = eval_node(n.args[i], b);
          r = n.func == Func::Max ? std::max(r, v) : std::min(r, v);
        }
        break;
      }
      const double a = eval_node(n.args[0], b);
      switch (n.func) {
        case Func::Exp: r = std::exp(a); break;
        case Func::Ln:
          if (a <= 0.0) domain_fail("ln of non-positive argument " + format_number(a), e);
          r = std::log(a);
          break;
        case Func::Sin: r = std::sin(a); break;
        case Func::Cos: r = std::cos(a); break;
        case Func::Abs: r = std::abs(a); break;
        default: break;
      }
      break;
    }
    case Kind::Rank: {
      constexpr std::size_t kInline = 32;
      std::array<double, kInline> inline_buf;
      std::vector<double> heap_buf;
      double* vals = inline_buf.data();
      if (n.args.size() > kInline) {
        heap_buf.resize(n.args.size());
        vals = heap_buf.data();
      }
      for (std::size_t i = 0; i < n.args.size(); ++i) vals[i] = eval_node(n.args[i], b);
      return k_rank(std::span<const double>(vals, n.args.size()), RankIndex(n.index));
    }
  }
  if (!std::isfinite(r)) domain_fail("non-finite value", e);
  return r;
}

Expr rebuild(const Expr& e, int y_index, long n_value) {
  const Node& n = e.node();
  switch (n.kind) {
    case Kind::Number:
    case Kind::VarY:
      return e;
    case Kind::VarX:
      return Expr::var_y(y_index);
    case Kind::VarN:
      return Expr::number(static_cast<double>(n_value));
    default:
      break;
  }
  std::vector<Expr> args;
  args.reserve(n.args.size());
  for (const auto& a : n.args) args.push_back(rebuild(a, y_index, n_value));
  switch (n.kind) {
    case Kind::Neg: return Expr::neg(std::move(args[0]));
    case Kind::Call: return Expr::call(n.func, std::move(args));
    case Kind::Rank: return Expr::rank(n.index, std::move(args));
    default: return Expr::binary(n.kind, std::move(args[0]), std::move(args[1]));
  }
}

bool depends_on_x(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::VarX) return true;
  for (const auto& a : n.args) {
    if (depends_on_x(a)) return true;
  }
  return false;
}

std::optional<Affine> affine_node(const Expr& e, long n_value) {
  const Node& n = e.node();
  if (n.kind == Kind::VarX) return Affine{1.0, 0.0};
  if (n.kind == Kind::VarY) return std::nullopt;
  if (!depends_on_x(e)) {
    Bindings b;
    b.n = static_cast<double>(n_value);
    return Affine{0.0, eval_node(e, b)};
  }
  switch (n.kind) {
    case Kind::Neg: {
      auto a = affine_node(n.args[0], n_value);
      if (!a) return std::nullopt;
      return Affine{-a->slope, -a->intercept};
    }
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      auto a = affine_node(n.args[0], n_value);
      auto c = affine_node(n.args[1], n_value);
      if (!a || !c) return std::nullopt;
      if (n.kind == Kind::Add) return Affine{a->slope + c->slope, a->intercept + c->intercept};
      if (n.kind == Kind::Sub) return Affine{a->slope - c->slope, a->intercept - c->intercept};
      if (n.kind == Kind::Mul) {
        if (a->slope == 0.0) return Affine{a->intercept * c->slope, a->intercept * c->intercept};
        if (c->slope == 0.0) return Affine{a->slope * c->intercept, a->intercept * c->intercept};
        return std::nullopt;
      }
      if (c->slope != 0.0 || c->intercept == 0.0) return std::nullopt;
      return Affine{a->slope / c->intercept, a->intercept / c->intercept};
    }
    default:
      return std::nullopt;
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface

ScalarExpr parse_scalar(std::string_view src) { return ScalarExpr{Parser(src, 0).parse()}; }

BlockExpr parse_block(std::string_view src, int arity) {
  if (arity < 1) throw ArgumentError("parse_block: arity must be >= 1");
  return BlockExpr{Parser(src, arity).parse(), arity};
}

std::string to_string(const Expr& e) {
  std::string out;
  print(e, out);
  return out;
}

double eval(const ScalarExpr& f, double x, long n) {
  if (!std::isfinite(x)) throw NumericDomainError("eval: non-finite x");
  Bindings b;
  b.x = x;
  b.n = static_cast<double>(n);
  return eval_node(f.ast, b);
}

double eval(const BlockExpr& g, std::span<const double> y) {
  if (y.size() < static_cast<std::size_t>(g.arity)) {
    throw ArgumentError("eval: block function of arity " + std::to_string(g.arity) + " given " +
                        std::to_string(y.size()) + " values");
  }
  for (std::size_t i = 0; i < static_cast<std::size_t>(g.arity); ++i) {
    if (!std::isfinite(y[i])) throw NumericDomainError("eval: non-finite argument y" + std::to_string(i + 1));
  }
  Bindings b;
  b.y = y.first(static_cast<std::size_t>(g.arity));
  return eval_node(g.ast, b);
}

bool is_constant(const Expr& e) {
  const Node& n = e.node();
  if (n.kind == Kind::VarX || n.kind == Kind::VarN || n.kind == Kind::VarY) return false;
  for (const auto& a : n.args) {
    if (!is_constant(a)) return false;
  }
  return true;
}

std::optional<Affine> affine_in_x(const ScalarExpr& f, long n) { return affine_node(f.ast, n); }

Expr bind_to_block(const ScalarExpr& f, int y_index, long n) { return rebuild(f.ast, y_index, n); }

int max_y_index(const Expr& e) {
  const Node& n = e.node();
  int m = n.kind == Kind::VarY ? n.index : 0;
  for (const auto& a : n.args) m = std::max(m, max_y_index(a));
  return m;
}

}  // namespace rankrec::expr
