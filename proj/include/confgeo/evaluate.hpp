#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "confgeo/expr.hpp"
#include "confgeo/jet.hpp"
#include "confgeo/scalar.hpp"

namespace confgeo {

using Parameters = std::map<std::string, Scalar>;

// An expression with identifiers resolved against a coordinate list and a
// parameter table, flattened to a postfix program. Evaluation is const and
// allocation-light, so one instance can serve many threads.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  // Throws UnknownIdentifier for unresolved names and DomainError for the
  // literal i in real mode.
  CompiledExpr(const Expr& e, const std::vector<std::string>& coordinates,
               const Parameters& parameters, Mode mode);

  std::size_t arity() const { return arity_; }
  Mode mode() const { return mode_; }
  bool depends_on_coordinates() const { return depends_; }

  Scalar value(std::span<const Scalar> x) const;
  // Jet of the expression with every coordinate seeded as an independent variable.
  Jet jet(std::span<const Scalar> x, int order) const;
  // Composition: coordinates bound to arbitrary jets (all over one layout).
  Jet jet(std::span<const Jet> x) const;

  enum class Op : std::uint8_t { Const, Coord, Neg, Add, Sub, Mul, Div, Pow, IntPow, Call };
  struct Instr {
    Op op;
    Func func = Func::Sin;
    int index = 0;
    Scalar constant = 0.0;
  };

 private:
  template <class T, class Lift>
  T run(std::span<const T> x, Lift lift) const;

  std::vector<Instr> program_;
  std::size_t arity_ = 0;
  Mode mode_ = Mode::Real;
  bool depends_ = false;
};

Jet evaluate_jet(const Expr& e, const std::vector<std::string>& coordinates,
                 const Parameters& parameters, std::span<const Scalar> point, int order,
                 Mode mode);

Scalar evaluate_value(const Expr& e, const std::vector<std::string>& coordinates,
                      const Parameters& parameters, std::span<const Scalar> point, Mode mode);

// Evaluates an expression with no coordinates, e.g. a command-line value "pi/4".
Scalar evaluate_constant(std::string_view source, Mode mode);

}  // namespace confgeo
