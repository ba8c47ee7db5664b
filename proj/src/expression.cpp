#include "rhc/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>

#include "rhc/errors.hpp"

namespace rhc {

struct Expression::Node {
  enum class Kind { number, variable, negate, add, subtract, multiply, divide, power, builtin, user };
  Kind kind = Kind::number;
  Complex value{};
  std::string name;
  Complex (*builtin)(Complex) = nullptr;
  ScalarFunction user;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

Complex checked(Complex v, const char* what) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
    throw EvalError(std::string("non-finite result in ") + what);
  return v;
}

Complex fn_conj(Complex z) { return std::conj(z); }
Complex fn_exp(Complex z) { return std::exp(z); }
Complex fn_log(Complex z) {
  if (z == Complex(0.0)) throw EvalError("log(0)");
  return std::log(z);
}
Complex fn_sqrt(Complex z) { return std::sqrt(z); }
Complex fn_abs(Complex z) { return std::abs(z); }
Complex fn_re(Complex z) { return z.real(); }
Complex fn_im(Complex z) { return z.imag(); }
Complex fn_sin(Complex z) { return std::sin(z); }
Complex fn_cos(Complex z) { return std::cos(z); }

struct Builtin {
  const char* name;
  Complex (*fn)(Complex);
};
constexpr Builtin kBuiltins[] = {{"conj", fn_conj}, {"exp", fn_exp}, {"log", fn_log},
                                 {"sqrt", fn_sqrt}, {"abs", fn_abs}, {"re", fn_re},
                                 {"im", fn_im},     {"sin", fn_sin}, {"cos", fn_cos}};

Complex integer_power(Complex base, long k) {
  if (k < 0 && base == Complex(0.0)) throw EvalError("zero raised to a negative power");
  Complex b = k < 0 ? 1.0 / base : base;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  Complex out = 1.0;
  while (e) {
    if (e & 1ul) out *= b;
    b *= b;
    e >>= 1ul;
  }
  return out;
}

Complex eval(const Node& n, Complex z) {
  switch (n.kind) {
    case Node::Kind::number: return n.value;
    case Node::Kind::variable: return z;
    case Node::Kind::negate: return -eval(*n.args[0], z);
    case Node::Kind::add: return eval(*n.args[0], z) + eval(*n.args[1], z);
    case Node::Kind::subtract: return eval(*n.args[0], z) - eval(*n.args[1], z);
    case Node::Kind::multiply: return checked(eval(*n.args[0], z) * eval(*n.args[1], z), "product");
    case Node::Kind::divide: {
      const Complex d = eval(*n.args[1], z);
      if (d == Complex(0.0)) throw EvalError("division by zero");
      return checked(eval(*n.args[0], z) / d, "quotient");
    }
    case Node::Kind::power: {
      const Complex b = eval(*n.args[0], z);
      const Complex e = eval(*n.args[1], z);
      if (e.imag() == 0.0 && std::nearbyint(e.real()) == e.real() && std::abs(e.real()) <= 1e6)
        return checked(integer_power(b, static_cast<long>(e.real())), "power");
      if (b == Complex(0.0)) {
        if (e.real() > 0.0) return 0.0;
        throw EvalError("zero raised to a non-positive power");
      }
      return checked(std::pow(b, e), "power");
    }
    case Node::Kind::builtin: return checked(n.builtin(eval(*n.args[0], z)), n.name.c_str());
    case Node::Kind::user: return checked(n.user(eval(*n.args[0], z)), n.name.c_str());
  }
  return 0.0;
}

bool uses_z(const Node& n) {
  if (n.kind == Node::Kind::variable) return true;
  // A user function may depend on its argument only; the argument decides.
  for (const auto& a : n.args)
    if (uses_z(*a)) return true;
  return false;
}

class Parser {
 public:
  Parser(std::string_view text, const ExpressionContext& ctx) : s_(text), ctx_(ctx) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

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

  static NodePtr binary(Node::Kind k, NodePtr a, NodePtr b) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->args = {std::move(a), std::move(b)};
    return n;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = binary(Node::Kind::add, lhs, term());
      } else if (accept('-')) {
        lhs = binary(Node::Kind::subtract, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = binary(Node::Kind::multiply, lhs, unary());
      } else if (accept('/')) {
        lhs = binary(Node::Kind::divide, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::negate;
      n->args = {unary()};
      return n;
    }
    if (accept('+')) return unary();
    NodePtr base = primary();
    if (accept('^')) return binary(Node::Kind::power, base, unary());
    return base;
  }

  NodePtr number() {
    const char* begin = s_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    auto n = std::make_shared<Node>();
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        !(pos_ + 1 < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '_'))) {
      ++pos_;
      n->value = Complex(0.0, v);
    } else {
      n->value = v;
    }
    return n;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string name(s_.substr(start, pos_ - start));
      return identifier(name, start);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr identifier(const std::string& name, std::size_t start) {
    skip();
    const bool call = pos_ < s_.size() && s_[pos_] == '(';
    if (call) {
      ++pos_;
      NodePtr arg = expr();
      if (!accept(')')) fail("expected ')' after argument of " + name);
      auto n = std::make_shared<Node>();
      n->name = name;
      n->args = {arg};
      for (const auto& b : kBuiltins) {
        if (name == b.name) {
          n->kind = Node::Kind::builtin;
          n->builtin = b.fn;
          return n;
        }
      }
      const auto it = ctx_.functions.find(name);
      if (it == ctx_.functions.end()) throw ParseError("unknown function '" + name + "'", start);
      n->kind = Node::Kind::user;
      n->user = it->second;
      return n;
    }
    auto n = std::make_shared<Node>();
    if (name == "z") {
      n->kind = Node::Kind::variable;
    } else if (name == "i") {
      n->value = Complex(0.0, 1.0);
    } else if (name == "pi") {
      n->value = kPi;
    } else if (const auto it = ctx_.constants.find(name); it != ctx_.constants.end()) {
      n->value = it->second;
    } else {
      throw ParseError("unknown identifier '" + name + "'", start);
    }
    return n;
  }

  std::string_view s_;
  const ExpressionContext& ctx_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression Expression::parse(std::string_view text, const ExpressionContext& ctx) {
  Expression e;
  e.root_ = Parser(text, ctx).parse();
  e.text_ = std::string(text);
  return e;
}

Complex Expression::operator()(Complex z) const { return eval(*root_, z); }

bool Expression::depends_on_z() const { return uses_z(*root_); }

ScalarFunction Expression::function() const {
  return [root = root_](Complex z) { return eval(*root, z); };
}

MatrixExpression MatrixExpression::parse(const std::vector<std::vector<std::string>>& entries,
                                         const ExpressionContext& ctx) {
  MatrixExpression m;
  m.dim_ = static_cast<Eigen::Index>(entries.size());
  if (m.dim_ == 0) throw InvalidArgumentError("matrix expression is empty");
  for (const auto& row : entries) {
    if (static_cast<Eigen::Index>(row.size()) != m.dim_)
      throw InvalidArgumentError("matrix expression must be square");
    for (const auto& text : row) m.entries_.push_back(Expression::parse(text, ctx));
  }
  return m;
}

Matrix MatrixExpression::operator()(Complex z) const {
  Matrix out(dim_, dim_);
  for (Eigen::Index r = 0; r < dim_; ++r)
    for (Eigen::Index c = 0; c < dim_; ++c) out(r, c) = entries_[static_cast<std::size_t>(r * dim_ + c)](z);
  return out;
}

bool MatrixExpression::depends_on_z() const {
  for (const auto& e : entries_)
    if (e.depends_on_z()) return true;
  return false;
}

}  // namespace rhc
