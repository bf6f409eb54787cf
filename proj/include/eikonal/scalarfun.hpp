#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eikonal/jet.hpp"

namespace eik {

/// Expression tree node. Children are indices into the owning node vector.
struct ExprNode {
  enum class Kind : std::uint8_t {
    Number,
    Variable,
    Neg,
    Add,
    Sub,
    Mul,
    Div,
    Pow,
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
  };
  Kind kind = Kind::Number;
  double number = 0.0;
  int lhs = -1;
  int rhs = -1;
};

/// A parsed function of the single variable `z`, immutable after parsing.
///
/// Grammar (lowest to highest precedence):
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := ('-' | '+') unary | power
///   power  := atom ('^' unary)?          right-associative
///   atom   := number | 'z' | func '(' expr ')' | '(' expr ')'
///   func   := sin | cos | exp | log | sqrt
/// so `-z^2` is `-(z^2)` and `2^-z` is `2^(-z)`.
class AnalyticFunction {
 public:
  /// Throws SyntaxError or UnknownSymbol.
  static AnalyticFunction parse(std::string_view source);

  const std::string& source() const noexcept { return source_; }

  /// Canonical fully-parenthesised rendering that parses back to the same tree.
  std::string print() const;

  double eval(double z) const { return eval_jet2(z).val; }

  /// (f(z), f'(z), f''(z)). Throws DomainError when any elementary function
  /// is used outside its real domain or a derivative is not finite.
  Jet2 eval_jet2(double z) const;

  std::span<const ExprNode> nodes() const noexcept { return *nodes_; }

 private:
  AnalyticFunction(std::string source, std::shared_ptr<const std::vector<ExprNode>> nodes, int root)
      : source_(std::move(source)), nodes_(std::move(nodes)), root_(root) {}

  std::string source_;
  std::shared_ptr<const std::vector<ExprNode>> nodes_;
  int root_ = 0;
};

inline AnalyticFunction parse_function(std::string_view expr) { return AnalyticFunction::parse(expr); }

inline Jet2 eval_jet2(const AnalyticFunction& f, double z) { return f.eval_jet2(z); }

/// Polynomial c[0] + c[1] z + ... rendered in the expression grammar,
/// with coefficients printed round-trip exact.
std::string polynomial_expression(std::span<const double> coefficients);

/// 17-significant-digit decimal text; parses back to exactly `x`.
std::string format_real(double x);

}  // namespace eik
