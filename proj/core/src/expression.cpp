#include "accretia/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <numbers>
#include <variant>

#include "accretia/rates.hpp"

namespace accretia {

struct Expression::Node {
  enum class Kind { constant, variable, negate, add, sub, mul, div, pow, call };
  enum class Fn { exp, log, ceil, min, max };

  Kind kind;
  double value = 0.0;
  std::size_t slot = 0;
  Fn fn = Fn::exp;
  std::vector<std::shared_ptr<const Node>> args;

  double eval(std::span<const double> vars) const {
    switch (kind) {
      case Kind::constant:
        return value;
      case Kind::variable:
        return vars[slot];
      case Kind::negate:
        return -args[0]->eval(vars);
      case Kind::add:
        return args[0]->eval(vars) + args[1]->eval(vars);
      case Kind::sub:
        return args[0]->eval(vars) - args[1]->eval(vars);
      case Kind::mul:
        return args[0]->eval(vars) * args[1]->eval(vars);
      case Kind::div:
        return args[0]->eval(vars) / args[1]->eval(vars);
      case Kind::pow:
        return std::pow(args[0]->eval(vars), args[1]->eval(vars));
      case Kind::call:
        return call(vars);
    }
    return 0.0;
  }

  double call(std::span<const double> vars) const {
    switch (fn) {
      case Fn::exp:
        return std::exp(args[0]->eval(vars));
      case Fn::log:
        return std::log(args[0]->eval(vars));
      case Fn::ceil:
        return snapped_ceil(args[0]->eval(vars));
      case Fn::min: {
        double m = args[0]->eval(vars);
        for (std::size_t i = 1; i < args.size(); ++i) m = std::min(m, args[i]->eval(vars));
        return m;
      }
      case Fn::max: {
        double m = args[0]->eval(vars);
        for (std::size_t i = 1; i < args.size(); ++i) m = std::max(m, args[i]->eval(vars));
        return m;
      }
    }
    return 0.0;
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Node = Expression::Node;

NodePtr make(Node::Kind kind, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->args = std::move(args);
  return n;
}

class Parser {
public:
  Parser(std::string_view src, const std::vector<std::string>& vars) : src_(src), vars_(vars) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != src_.size()) throw ExpressionError("unexpected trailing input", pos_);
    return e;
  }

private:
  std::string_view src_;
  const std::vector<std::string>& vars_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) throw ExpressionError(std::string("expected '") + c + "'", pos_);
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+'))
        lhs = make(Node::Kind::add, {lhs, term()});
      else if (accept('-'))
        lhs = make(Node::Kind::sub, {lhs, term()});
      else
        return lhs;
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*'))
        lhs = make(Node::Kind::mul, {lhs, unary()});
      else if (accept('/'))
        lhs = make(Node::Kind::div, {lhs, unary()});
      else
        return lhs;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Node::Kind::negate, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (accept('^')) return make(Node::Kind::pow, {base, unary()});
    return base;
  }

  NodePtr atom() {
    skip_space();
    if (pos_ >= src_.size()) throw ExpressionError("unexpected end of expression", pos_);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    throw ExpressionError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    double v = 0.0;
    const auto res = std::from_chars(src_.data() + pos_, src_.data() + src_.size(), v);
    if (res.ec != std::errc()) throw ExpressionError("malformed number", start);
    pos_ = static_cast<std::size_t>(res.ptr - src_.data());
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    n->value = v;
    return n;
  }

  NodePtr name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string id(src_.substr(start, pos_ - start));

    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '(') return call(id, start);

    if (auto it = std::find(vars_.begin(), vars_.end(), id); it != vars_.end()) {
      auto n = std::make_shared<Node>();
      n->kind = Node::Kind::variable;
      n->slot = static_cast<std::size_t>(it - vars_.begin());
      return n;
    }
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::constant;
    if (id == "pi")
      n->value = std::numbers::pi;
    else if (id == "e")
      n->value = std::numbers::e;
    else
      throw ExpressionError("unknown name '" + id + "'", start);
    return n;
  }

  NodePtr call(const std::string& id, std::size_t start) {
    Node::Fn fn;
    std::size_t min_args = 1;
    std::size_t max_args = 1;
    if (id == "exp")
      fn = Node::Fn::exp;
    else if (id == "log")
      fn = Node::Fn::log;
    else if (id == "ceil")
      fn = Node::Fn::ceil;
    else if (id == "min" || id == "max") {
      fn = id == "min" ? Node::Fn::min : Node::Fn::max;
      min_args = 2;
      max_args = 64;
    } else {
      throw ExpressionError("unknown function '" + id + "'", start);
    }
    expect('(');
    std::vector<NodePtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (args.size() < min_args || args.size() > max_args)
      throw ExpressionError("wrong number of arguments to '" + id + "'", start);
    auto n = std::make_shared<Node>();
    n->kind = Node::Kind::call;
    n->fn = fn;
    n->args = std::move(args);
    return n;
  }
};

}  // namespace

Expression::Expression(std::string_view source, std::vector<std::string> variables)
    : source_(source), variables_(std::move(variables)) {
  root_ = Parser(source_, variables_).parse();
}

double Expression::evaluate(std::span<const double> values) const {
  if (values.size() != variables_.size())
    throw std::invalid_argument("Expression '" + source_ + "': expected " +
                                std::to_string(variables_.size()) + " arguments");
  return root_->eval(values);
}

double Expression::operator()(double x) const {
  const double v[] = {x};
  return evaluate(v);
}

double Expression::operator()(double x, double y) const {
  const double v[] = {x, y};
  return evaluate(v);
}

std::function<double(double)> unary_function(const Expression& e) {
  return [e](double x) { return e(x); };
}

}  // namespace accretia
