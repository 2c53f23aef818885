#include "confgeo/evaluate.hpp"

#include <cmath>
#include <numbers>

#include "confgeo/error.hpp"

namespace confgeo {

namespace {

using Op = CompiledExpr::Op;
using Instr = CompiledExpr::Instr;

struct Compiler {
  const std::vector<std::string>& coordinates;
  const Parameters& parameters;
  Mode mode;
  std::vector<Instr>& out;
  bool depends = false;

  // Returns whether the subtree depends on coordinates.
  bool emit(const Expr::Node& n) {
    using K = Expr::Kind;
    switch (n.kind) {
      case K::Number:
        out.push_back({Op::Const, Func::Sin, 0, n.number});
        return false;
      case K::Ident: {
        for (std::size_t i = 0; i < coordinates.size(); ++i) {
          if (coordinates[i] == n.name) {
            out.push_back({Op::Coord, Func::Sin, static_cast<int>(i), 0.0});
            depends = true;
            return true;
          }
        }
        if (auto it = parameters.find(n.name); it != parameters.end()) {
          out.push_back({Op::Const, Func::Sin, 0, it->second});
          return false;
        }
        Scalar c;
        if (n.name == "pi") {
          c = std::numbers::pi;
        } else if (n.name == "e") {
          c = std::numbers::e;
        } else if (n.name == "i") {
          if (mode == Mode::Real) fail(ErrorCode::DomainError, "imaginary unit i used in a real-mode expression");
          c = Scalar(0.0, 1.0);
        } else {
          fail(ErrorCode::UnknownIdentifier, "unknown identifier '" + n.name + "'");
        }
        out.push_back({Op::Const, Func::Sin, 0, c});
        return false;
      }
      case K::Neg: {
        bool d = emit(*n.lhs);
        out.push_back({Op::Neg});
        return d;
      }
      case K::Call: {
        bool d = emit(*n.lhs);
        out.push_back({Op::Call, n.func});
        return d;
      }
      case K::Pow: {
        bool a = emit(*n.lhs);
        bool b = emit(*n.rhs);
        out.push_back({b ? Op::Pow : Op::IntPow});
        return a || b;
      }
      default: {
        bool a = emit(*n.lhs);
        bool b = emit(*n.rhs);
        Op op = n.kind == K::Add ? Op::Add : n.kind == K::Sub ? Op::Sub : n.kind == K::Mul ? Op::Mul : Op::Div;
        out.push_back({op});
        return a || b;
      }
    }
  }
};

bool integral(Scalar v, long long& k) {
  if (v.imag() != 0.0 || !std::isfinite(v.real())) return false;
  double r = v.real();
  if (r != std::floor(r) || std::abs(r) > 1e6) return false;
  k = static_cast<long long>(r);
  return true;
}

void check_log_argument(Scalar v, Mode mode) {
  if (v == Scalar(0.0)) fail(ErrorCode::DomainError, "log of zero");
  if (mode == Mode::Real && v.real() <= 0.0)
    fail(ErrorCode::DomainError, "log of a nonpositive real number");
}

void check_sqrt_argument(Scalar v, Mode mode) {
  if (mode == Mode::Real && v.real() < 0.0)
    fail(ErrorCode::DomainError, "sqrt of a negative real number");
}

// Scalar and jet primitives share one interpreter loop.
Scalar apply(Func f, const Scalar& u, Mode mode) {
  switch (f) {
    case Func::Sin: return std::sin(u);
    case Func::Cos: return std::cos(u);
    case Func::Tan: return std::tan(u);
    case Func::Sinh: return std::sinh(u);
    case Func::Cosh: return std::cosh(u);
    case Func::Tanh: return std::tanh(u);
    case Func::Exp: return std::exp(u);
    case Func::Log: check_log_argument(u, mode); return std::log(u);
    case Func::Sqrt: check_sqrt_argument(u, mode); return std::sqrt(u);
    case Func::Atan: return std::atan(u);
  }
  return 0.0;
}

Jet apply(Func f, const Jet& u, Mode mode) {
  switch (f) {
    case Func::Sin: return sin(u);
    case Func::Cos: return cos(u);
    case Func::Tan: return tan(u);
    case Func::Sinh: return sinh(u);
    case Func::Cosh: return cosh(u);
    case Func::Tanh: return tanh(u);
    case Func::Exp: return exp(u);
    case Func::Log: check_log_argument(u.value(), mode); return log(u);
    case Func::Sqrt:
      check_sqrt_argument(u.value(), mode);
      if (u.value() == Scalar(0.0) && u.order() > 0)
        fail(ErrorCode::DomainError, "sqrt is not differentiable at zero");
      return power_series(u, 0.5);
    case Func::Atan: return atan(u);
  }
  return u;
}

Scalar divide(const Scalar& a, const Scalar& b) {
  if (b == Scalar(0.0)) fail(ErrorCode::DomainError, "division by zero");
  return a / b;
}

Jet divide(const Jet& a, const Jet& b) { return a / b; }

Scalar int_power(const Scalar& a, long long k) {
  if (k < 0 && a == Scalar(0.0)) fail(ErrorCode::DomainError, "division by zero");
  Scalar result = 1.0, base = a;
  long long m = k < 0 ? -k : k;
  while (m > 0) {
    if (m & 1) result *= base;
    m >>= 1;
    if (m) base *= base;
  }
  return k < 0 ? 1.0 / result : result;
}

Jet int_power(const Jet& a, long long k) { return integer_power(a, k); }

Scalar general_power(const Scalar& a, const Scalar& b, Mode mode) {
  check_log_argument(a, mode);
  return std::exp(b * std::log(a));
}

Jet general_power(const Jet& a, const Jet& b, Mode mode) {
  check_log_argument(a.value(), mode);
  return exp(b * log(a));
}

Scalar value_of(const Scalar& s) { return s; }
Scalar value_of(const Jet& j) { return j.value(); }

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& coordinates,
                           const Parameters& parameters, Mode mode)
    : arity_(coordinates.size()), mode_(mode) {
  Compiler c{coordinates, parameters, mode, program_};
  c.emit(e.root());
  depends_ = c.depends;
}

template <class T, class Lift>
T CompiledExpr::run(std::span<const T> x, Lift lift) const {
  if (x.size() != arity_) fail(ErrorCode::InvalidArgument, "wrong number of coordinates for expression");
  std::vector<T> stack;
  stack.reserve(16);
  for (const Instr& in : program_) {
    switch (in.op) {
      case Op::Const: stack.push_back(lift(in.constant)); break;
      case Op::Coord: stack.push_back(x[in.index]); break;
      case Op::Neg: stack.back() = -stack.back(); break;
      case Op::Call: stack.back() = apply(in.func, stack.back(), mode_); break;
      default: {
        T b = std::move(stack.back());
        stack.pop_back();
        T& a = stack.back();
        switch (in.op) {
          case Op::Add: a = a + b; break;
          case Op::Sub: a = a - b; break;
          case Op::Mul: a = a * b; break;
          case Op::Div: a = divide(a, b); break;
          case Op::IntPow: {
            long long k;
            if (integral(value_of(b), k)) {
              a = int_power(a, k);
            } else {
              a = general_power(a, b, mode_);
            }
            break;
          }
          case Op::Pow: a = general_power(a, b, mode_); break;
          default: break;
        }
      }
    }
  }
  return std::move(stack.back());
}

Scalar CompiledExpr::value(std::span<const Scalar> x) const {
  return run<Scalar>(x, [](Scalar c) { return c; });
}

Jet CompiledExpr::jet(std::span<const Scalar> x, int order) const {
  if (arity_ == 0) fail(ErrorCode::InvalidArgument, "jet of an expression without coordinates");
  const int n = static_cast<int>(arity_);
  std::vector<Jet> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(n, order, i, x[i]));
  return jet(std::span<const Jet>(vars));
}

Jet CompiledExpr::jet(std::span<const Jet> x) const {
  if (x.empty()) fail(ErrorCode::InvalidArgument, "jet composition needs bound coordinates");
  const auto layout = x[0].layout_ptr();
  return run<Jet>(x, [&](Scalar c) { return Jet(layout, c); });
}

Jet evaluate_jet(const Expr& e, const std::vector<std::string>& coordinates,
                 const Parameters& parameters, std::span<const Scalar> point, int order,
                 Mode mode) {
  if (order < 0 || order > kMaxJetOrder)
    fail(ErrorCode::InvalidArgument, "jet order must be in 0.." + std::to_string(kMaxJetOrder));
  return CompiledExpr(e, coordinates, parameters, mode).jet(point, order);
}

Scalar evaluate_value(const Expr& e, const std::vector<std::string>& coordinates,
                      const Parameters& parameters, std::span<const Scalar> point, Mode mode) {
  return CompiledExpr(e, coordinates, parameters, mode).value(point);
}

Scalar evaluate_constant(std::string_view source, Mode mode) {
  static const std::vector<std::string> none;
  static const Parameters no_params;
  return CompiledExpr(Expr::parse(source), none, no_params, mode).value({});
}

}  // namespace confgeo
