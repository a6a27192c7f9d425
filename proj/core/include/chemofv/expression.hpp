#pragma once

#include <memory>
#include <string>

#include "chemofv/mesh.hpp"

namespace chemofv {

/// Arithmetic expression in x, y (and r, theta = atan2(y, x)) parsed once, evaluated many times.
///
/// Grammar: + - * / ^, unary minus, parentheses, numbers, the constant pi and the
/// functions sin cos tan exp log sqrt abs tanh cosh sinh atan j0 j1.
class Expression {
 public:
  explicit Expression(const std::string& text);
  ~Expression();
  Expression(const Expression&);
  Expression& operator=(const Expression&);
  Expression(Expression&&) noexcept;
  Expression& operator=(Expression&&) noexcept;

  double operator()(Point p) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace chemofv
