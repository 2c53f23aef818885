#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace confgeo {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Atan };

const char* to_string(Func f);

// Immutable expression tree over coordinates, parameters and the constants
// pi, e and (complex mode only) i. Nodes are shared, so copies are cheap and
// an Expr may be evaluated from several threads at once.
class Expr {
 public:
  enum class Kind { Number, Ident, Neg, Add, Sub, Mul, Div, Pow, Call };

  struct Node {
    Kind kind;
    double number = 0.0;
    std::string name;
    Func func = Func::Sin;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  Expr();  // the literal 0
  explicit Expr(std::shared_ptr<const Node> root);

  // Grammar:
  //   expr   := term (("+"|"-") term)*
  //   term   := factor (("*"|"/") factor)*
  //   factor := "-" factor | power
  //   power  := atom ("^" factor)?
  //   atom   := NUMBER | IDENT | IDENT "(" expr ")" | "(" expr ")"
  // Throws SyntaxError with a 1-based line/column.
  static Expr parse(std::string_view source);

  static Expr number(double value);
  static Expr ident(std::string name);
  static Expr call(Func f, Expr arg);
  static Expr neg(Expr a);

  friend Expr operator+(Expr a, Expr b);
  friend Expr operator-(Expr a, Expr b);
  friend Expr operator*(Expr a, Expr b);
  friend Expr operator/(Expr a, Expr b);
  friend Expr pow(Expr a, Expr b);

  const Node& root() const { return *root_; }
  Kind kind() const { return root_->kind; }

  // Fully parenthesised source text; parse(to_string()) is structurally equal.
  std::string to_string() const;
  // Compact tree dump such as Add(Pow(x,2),Pow(y,2)).
  std::string to_sexpr() const;

  bool structurally_equal(const Expr& other) const;
  std::set<std::string> identifiers() const;
  bool is_zero_literal() const;

 private:
  std::shared_ptr<const Node> root_;
};

}  // namespace confgeo
