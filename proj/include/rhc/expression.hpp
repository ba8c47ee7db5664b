#pragma once

#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "rhc/types.hpp"

namespace rhc {

/// Names visible to an expression besides z, i, pi and the built-in functions.
struct ExpressionContext {
  std::map<std::string, Complex> constants;
  std::map<std::string, ScalarFunction> functions;  // unary, e.g. r(z)
};

/// Closed-form scalar function of z parsed from text; see docs/expression-grammar.md.
/// Immutable and safe to evaluate concurrently.
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text, const ExpressionContext& ctx = {});

  // Throws EvalError on division by zero, log(0) or a non-finite result.
  Complex operator()(Complex z) const;
  bool depends_on_z() const;
  const std::string& text() const { return text_; }
  ScalarFunction function() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Square matrix of expressions.
class MatrixExpression {
 public:
  static MatrixExpression parse(const std::vector<std::vector<std::string>>& entries,
                                const ExpressionContext& ctx = {});
  Matrix operator()(Complex z) const;
  Eigen::Index dim() const { return dim_; }
  bool depends_on_z() const;

 private:
  std::vector<Expression> entries_;
  Eigen::Index dim_ = 0;
};

}  // namespace rhc
