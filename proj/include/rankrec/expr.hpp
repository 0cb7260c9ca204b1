#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rankrec::expr {

enum class Kind { Number, VarX, VarN, VarY, Neg, Add, Sub, Mul, Div, Pow, Call, Rank };
enum class Func { Exp, Ln, Sin, Cos, Abs, Max, Min };

struct Node;

/// Immutable expression tree. Copies share structure; equality is structural.
class Expr {
 public:
  Expr() = default;

  static Expr number(double v);
  static Expr var_x();
  static Expr var_n();
  static Expr var_y(int index);  // 1-based
  static Expr neg(Expr a);
  static Expr binary(Kind op, Expr a, Expr b);
  static Expr call(Func f, std::vector<Expr> args);
  static Expr rank(int k, std::vector<Expr> args);

  const Node& node() const { return *node_; }
  bool empty() const { return node_ == nullptr; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Number;
  double value = 0.0;  // Number
  int index = 0;       // VarY: 1-based variable; Rank: k
  Func func = Func::Exp;
  std::vector<Expr> args;
};

/// f(x, n) over the scalar state x and integer time n.
struct ScalarExpr {
  Expr ast;
  bool operator==(const ScalarExpr&) const = default;
};

/// G(y_1, ..., y_M); y_1 is the most recent term.
struct BlockExpr {
  Expr ast;
  int arity = 1;
  bool operator==(const BlockExpr&) const = default;
};

ScalarExpr parse_scalar(std::string_view src);
BlockExpr parse_block(std::string_view src, int arity);

/// Canonical text form. parse(to_string(e)) reproduces e structurally.
std::string to_string(const Expr& e);
inline std::string to_string(const ScalarExpr& f) { return to_string(f.ast); }
inline std::string to_string(const BlockExpr& g) { return to_string(g.ast); }

double eval(const ScalarExpr& f, double x, long n);
double eval(const BlockExpr& g, std::span<const double> y);

/// True if the tree references no variable.
bool is_constant(const Expr& e);

struct Affine {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Syntactic affine detection in x with n held at `n`: succeeds when the tree
/// folds to slope*x + intercept using only +, -, *, / by constants, negation
/// and constant subtrees.
std::optional<Affine> affine_in_x(const ScalarExpr& f, long n);

/// Rewrites a scalar function as a block-function term: x becomes y_`y_index`
/// and n becomes the constant `n`.
Expr bind_to_block(const ScalarExpr& f, int y_index, long n);

/// Highest y index referenced (0 if none).
int max_y_index(const Expr& e);

}  // namespace rankrec::expr
