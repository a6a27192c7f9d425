#include "chemofv/expression.hpp"

#include <cctype>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <fmt/format.h>

#include "chemofv/special.hpp"

namespace chemofv {

struct Expression::Node {
  enum class Op { number, x, y, r, theta, add, sub, mul, div, pow, neg, call };
  Op op = Op::number;
  double value = 0.0;
  double (*fn)(double) = nullptr;
  std::shared_ptr<const Node> a, b;

  double eval(Point p) const {
    switch (op) {
      case Op::number: return value;
      case Op::x: return p.x;
      case Op::y: return p.y;
      case Op::r: return std::hypot(p.x, p.y);
      case Op::theta: return std::atan2(p.y, p.x);
      case Op::add: return a->eval(p) + b->eval(p);
      case Op::sub: return a->eval(p) - b->eval(p);
      case Op::mul: return a->eval(p) * b->eval(p);
      case Op::div: return a->eval(p) / b->eval(p);
      case Op::pow: return std::pow(a->eval(p), b->eval(p));
      case Op::neg: return -a->eval(p);
      case Op::call: return fn(a->eval(p));
    }
    return NAN;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

double j0(double x) { return bessel_j(0, std::abs(x)); }
double j1(double x) { return x < 0 ? -bessel_j(1, -x) : bessel_j(1, x); }

const std::map<std::string, double (*)(double)>& functions() {
  static const std::map<std::string, double (*)(double)> f = {
      {"sin", [](double v) { return std::sin(v); }},   {"cos", [](double v) { return std::cos(v); }},
      {"tan", [](double v) { return std::tan(v); }},   {"exp", [](double v) { return std::exp(v); }},
      {"log", [](double v) { return std::log(v); }},   {"sqrt", [](double v) { return std::sqrt(v); }},
      {"abs", [](double v) { return std::abs(v); }},   {"tanh", [](double v) { return std::tanh(v); }},
      {"cosh", [](double v) { return std::cosh(v); }}, {"sinh", [](double v) { return std::sinh(v); }},
      {"atan", [](double v) { return std::atan(v); }}, {"j0", j0},
      {"j1", j1}};
  return f;
}

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected character");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument(fmt::format("expression '{}': {} at position {}", s_, what, pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr sum() {
    NodePtr n = product();
    for (;;) {
      if (accept('+')) n = make(Op::add, n, product());
      else if (accept('-')) n = make(Op::sub, n, product());
      else return n;
    }
  }
  NodePtr product() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Op::mul, n, unary());
      else if (accept('/')) n = make(Op::div, n, unary());
      else return n;
    }
  }
  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }
  // right associative, binds tighter than unary minus on its left: -x^2 = -(x^2)
  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Op::pow, base, unary());
    return base;
  }
  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    if (accept('(')) {
      NodePtr n = sum();
      if (!accept(')')) fail("missing ')'");
      return n;
    }
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      auto n = std::make_shared<Expression::Node>();
      n->value = v;
      return n;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
        ++pos_;
      const std::string name = s_.substr(start, pos_ - start);
      if (name == "x") return make(Op::x);
      if (name == "y") return make(Op::y);
      if (name == "r") return make(Op::r);
      if (name == "theta") return make(Op::theta);
      if (name == "pi") {
        auto n = std::make_shared<Expression::Node>();
        n->value = std::numbers::pi;
        return n;
      }
      auto it = functions().find(name);
      if (it == functions().end()) {
        pos_ = start;
        fail(fmt::format("unknown name '{}'", name));
      }
      if (!accept('(')) fail("expected '(' after function name");
      auto n = std::make_shared<Expression::Node>();
      n->op = Op::call;
      n->fn = it->second;
      n->a = sum();
      if (!accept(')')) fail("missing ')'");
      return n;
    }
    fail("unexpected character");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text_).parse()) {}
Expression::~Expression() = default;
Expression::Expression(const Expression&) = default;
Expression& Expression::operator=(const Expression&) = default;
Expression::Expression(Expression&&) noexcept = default;
Expression& Expression::operator=(Expression&&) noexcept = default;

double Expression::operator()(Point p) const { return root_->eval(p); }

}  // namespace chemofv
