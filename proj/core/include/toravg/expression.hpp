#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "toravg/scalar_field.hpp"

namespace toravg {

/// AST of the scenario expression grammar:
///
///   expr    := term (('+' | '-') term)*
///   term    := unary (('*' | '/') unary)*
///   unary   := '-' unary | power
///   power   := primary ('^' unary)?        (right-associative)
///   primary := number | 'pi' | 'eps' | 'th<j>' | 'I<j>'
///            | ('sin' | 'cos' | 'exp') '(' expr ')' | '(' expr ')'
///
/// Angles th1..thd are dimensionless on [0,1); unknown identifiers are
/// parse-time errors.
class Expression {
 public:
  using Ptr = std::shared_ptr<const Expression>;
  enum class Kind {
    Number, Pi, Eps, Angle, Action,
    Neg, Add, Sub, Mul, Div, Pow,
    Sin, Cos, Exp
  };

  struct Env {
    std::span<const double> theta;
    std::span<const double> action;
    double eps = 0.0;
  };

  Kind kind() const noexcept { return kind_; }
  double number() const noexcept { return number_; }
  int axis() const noexcept { return axis_; }
  const Ptr& lhs() const noexcept { return lhs_; }
  const Ptr& rhs() const noexcept { return rhs_; }

  double eval(const Env& env) const;

  /// True when `eps` occurs anywhere in the tree.
  bool depends_on_eps() const;

  static Ptr leaf(Kind kind, double number = 0.0, int axis = 0);
  static Ptr unary(Kind kind, Ptr operand);
  static Ptr binary(Kind kind, Ptr lhs, Ptr rhs);

 private:
  Expression() = default;
  Kind kind_ = Kind::Number;
  double number_ = 0.0;
  int axis_ = 0;
  Ptr lhs_, rhs_;
};

/// Parse `text` for a space of dimension `dim`.  Throws ParseError with a
/// 1-based line/column on syntax errors and unknown identifiers.
Expression::Ptr parse_expression(std::string_view text, int dim);

/// An expression sampled on the angle collocation grid and projected onto
/// the modes, with the relative spectral mass the truncation discarded
/// (estimated on a refined grid; 0 for in-band trigonometric polynomials).
struct CompiledField {
  ScalarField field;
  double relative_tail_mass = 0.0;
};

CompiledField compile_field(const Expression& e, const TorusBox& space, double eps = 0.0);

}  // namespace toravg
