#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace accretia {

/// Parse failure with the zero-based column of the offending token.
class ExpressionError : public std::runtime_error {
public:
  ExpressionError(const std::string& what, std::size_t column)
      : std::runtime_error(what + " at column " + std::to_string(column + 1)), column_(column) {}
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
  std::size_t column_;
};

/// A closed arithmetic grammar for user-supplied hypotheses:
///
///   expr   := term (('+' | '-') term)*
///   term   := unary (('*' | '/') unary)*
///   unary  := '-' unary | power
///   power  := atom ('^' unary)?            (right associative)
///   atom   := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
///
/// Functions: exp, log, ceil (1 argument), min, max (2 or more).
/// Constants: pi, e. Every other name must be a declared variable.
class Expression {
public:
  Expression(std::string_view source, std::vector<std::string> variables);

  [[nodiscard]] double evaluate(std::span<const double> values) const;
  [[nodiscard]] double operator()(double x) const;
  [[nodiscard]] double operator()(double x, double y) const;

  [[nodiscard]] const std::string& source() const noexcept { return source_; }
  [[nodiscard]] std::size_t arity() const noexcept { return variables_.size(); }

  struct Node;

private:
  std::string source_;
  std::vector<std::string> variables_;
  std::shared_ptr<const Node> root_;
};

/// Wraps a one-variable expression as a callable.
std::function<double(double)> unary_function(const Expression& e);

}  // namespace accretia
