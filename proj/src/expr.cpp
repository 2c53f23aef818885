#include "confgeo/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <vector>

#include "confgeo/error.hpp"

namespace confgeo {

const char* to_string(Func f) {
  switch (f) {
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Tan: return "tan";
    case Func::Sinh: return "sinh";
    case Func::Cosh: return "cosh";
    case Func::Tanh: return "tanh";
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sqrt: return "sqrt";
    case Func::Atan: return "atan";
  }
  return "?";
}

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

std::optional<Func> lookup_func(std::string_view name) {
  static const std::pair<const char*, Func> table[] = {
      {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"sinh", Func::Sinh},
      {"cosh", Func::Cosh}, {"tanh", Func::Tanh}, {"exp", Func::Exp},   {"log", Func::Log},
      {"sqrt", Func::Sqrt}, {"atan", Func::Atan}};
  for (const auto& [n, f] : table)
    if (name == n) return f;
  return std::nullopt;
}

NodePtr make(Expr::Kind kind, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double value = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) {
      t.kind = Tok::End;
      t.text = "end of input";
      return t;
    }
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && pos_ + 1 < src_.size() &&
                                                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
      return lex_number(t);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.kind = Tok::Ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    advance();
    t.text = std::string(1, c);
    switch (c) {
      case '+': t.kind = Tok::Plus; return t;
      case '-': t.kind = Tok::Minus; return t;
      case '*': t.kind = Tok::Star; return t;
      case '/': t.kind = Tok::Slash; return t;
      case '^': t.kind = Tok::Caret; return t;
      case '(': t.kind = Tok::LParen; return t;
      case ')': t.kind = Tok::RParen; return t;
      default: break;
    }
    throw SyntaxError(t.line, t.column, {"NUMBER", "IDENT", "(", "-"}, "character '" + t.text + "'");
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token lex_number(Token t) {
    size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      // Only an exponent if digits follow; otherwise "2e" is 2 followed by IDENT e.
      size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        while (pos_ < look) advance();
        digits();
      }
    }
    t.kind = Tok::Number;
    t.text = std::string(src_.substr(start, pos_ - start));
    t.value = std::strtod(t.text.c_str(), nullptr);
    if (!std::isfinite(t.value))
      throw SyntaxError(t.line, t.column, {"finite NUMBER"}, "literal '" + t.text + "'");
    return t;
  }

  std::string_view src_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  NodePtr parse_all() {
    NodePtr e = expr();
    if (cur_.kind != Tok::End) unexpected({"+", "-", "*", "/", "^", "end of input"});
    return e;
  }

 private:
  [[noreturn]] void unexpected(std::vector<std::string> expected) {
    std::string found = cur_.kind == Tok::End ? cur_.text : "'" + cur_.text + "'";
    throw SyntaxError(cur_.line, cur_.column, std::move(expected), found);
  }

  void bump() { cur_ = lex_.next(); }

  NodePtr expr() {
    NodePtr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      auto kind = cur_.kind == Tok::Plus ? Expr::Kind::Add : Expr::Kind::Sub;
      bump();
      lhs = make(kind, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      auto kind = cur_.kind == Tok::Star ? Expr::Kind::Mul : Expr::Kind::Div;
      bump();
      lhs = make(kind, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    if (cur_.kind == Tok::Minus) {
      bump();
      return make(Expr::Kind::Neg, factor());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (cur_.kind == Tok::Caret) {
      bump();
      return make(Expr::Kind::Pow, base, factor());
    }
    return base;
  }

  NodePtr atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::Number;
        n->number = cur_.value;
        bump();
        return n;
      }
      case Tok::Ident: {
        Token id = cur_;
        bump();
        if (cur_.kind == Tok::LParen) {
          auto f = lookup_func(id.text);
          if (!f)
            throw SyntaxError(id.line, id.column,
                              {"sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "atan"},
                              "function '" + id.text + "'");
          bump();
          NodePtr arg = expr();
          if (cur_.kind != Tok::RParen) unexpected({")"});
          bump();
          auto n = std::make_shared<Expr::Node>();
          n->kind = Expr::Kind::Call;
          n->func = *f;
          n->lhs = arg;
          return n;
        }
        auto n = std::make_shared<Expr::Node>();
        n->kind = Expr::Kind::Ident;
        n->name = id.text;
        return n;
      }
      case Tok::LParen: {
        bump();
        NodePtr inner = expr();
        if (cur_.kind != Tok::RParen) unexpected({")"});
        bump();
        return inner;
      }
      default:
        unexpected({"NUMBER", "IDENT", "(", "-"});
    }
  }

  Lexer lex_;
  Token cur_;
};

std::string format_number(double v, const char* fmt) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

void print(const Expr::Node& n, std::string& out) {
  using K = Expr::Kind;
  auto binary = [&](const char* op) {
    out += '(';
    print(*n.lhs, out);
    out += op;
    print(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: out += format_number(n.number, "%.17g"); break;
    case K::Ident: out += n.name; break;
    case K::Neg:
      out += "(-";
      print(*n.lhs, out);
      out += ')';
      break;
    case K::Add: binary(" + "); break;
    case K::Sub: binary(" - "); break;
    case K::Mul: binary(" * "); break;
    case K::Div: binary(" / "); break;
    case K::Pow: binary("^"); break;
    case K::Call:
      out += to_string(n.func);
      out += '(';
      print(*n.lhs, out);
      out += ')';
      break;
  }
}

void sexpr(const Expr::Node& n, std::string& out) {
  using K = Expr::Kind;
  auto binary = [&](const char* tag) {
    out += tag;
    out += '(';
    sexpr(*n.lhs, out);
    out += ',';
    sexpr(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case K::Number: out += format_number(n.number, "%.15g"); break;
    case K::Ident: out += n.name; break;
    case K::Neg:
      out += "Neg(";
      sexpr(*n.lhs, out);
      out += ')';
      break;
    case K::Add: binary("Add"); break;
    case K::Sub: binary("Sub"); break;
    case K::Mul: binary("Mul"); break;
    case K::Div: binary("Div"); break;
    case K::Pow: binary("Pow"); break;
    case K::Call:
      out += to_string(n.func);
      out += '(';
      sexpr(*n.lhs, out);
      out += ')';
      break;
  }
}

bool equal(const Expr::Node& a, const Expr::Node& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number: return a.number == b.number;
    case Expr::Kind::Ident: return a.name == b.name;
    case Expr::Kind::Call: return a.func == b.func && equal(*a.lhs, *b.lhs);
    case Expr::Kind::Neg: return equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

}  // namespace

Expr::Expr() : root_(make(Kind::Number)) {}

Expr::Expr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

Expr Expr::parse(std::string_view source) { return Expr(Parser(source).parse_all()); }

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = std::fabs(value);
  // Keep literals non-negative, as the parser does.
  if (std::signbit(value)) return Expr(make(Kind::Neg, n));
  return Expr(n);
}

Expr Expr::ident(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Ident;
  n->name = std::move(name);
  return Expr(n);
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->lhs = arg.root_;
  return Expr(n);
}

Expr Expr::neg(Expr a) { return Expr(make(Kind::Neg, a.root_)); }

Expr operator+(Expr a, Expr b) { return Expr(make(Expr::Kind::Add, a.root_, b.root_)); }
Expr operator-(Expr a, Expr b) { return Expr(make(Expr::Kind::Sub, a.root_, b.root_)); }
Expr operator*(Expr a, Expr b) { return Expr(make(Expr::Kind::Mul, a.root_, b.root_)); }
Expr operator/(Expr a, Expr b) { return Expr(make(Expr::Kind::Div, a.root_, b.root_)); }
Expr pow(Expr a, Expr b) { return Expr(make(Expr::Kind::Pow, a.root_, b.root_)); }

std::string Expr::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

std::string Expr::to_sexpr() const {
  std::string out;
  sexpr(*root_, out);
  return out;
}

bool Expr::structurally_equal(const Expr& other) const { return equal(*root_, *other.root_); }

std::set<std::string> Expr::identifiers() const {
  std::set<std::string> out;
  std::function<void(const Node&)> walk = [&](const Node& n) {
    if (n.kind == Kind::Ident) out.insert(n.name);
    if (n.lhs) walk(*n.lhs);
    if (n.rhs) walk(*n.rhs);
  };
  walk(*root_);
  return out;
}

bool Expr::is_zero_literal() const { return root_->kind == Kind::Number && root_->number == 0.0; }

}  // namespace confgeo
