#include "rnshelix/expr.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <vector>

#include "rnshelix/error.hpp"

namespace rnshelix {

enum class Func { Sin, Cos, Tan, Sinh, Cosh, Tanh, Exp, Log, Sqrt, Abs };

struct ScalarExpr::Node {
  enum class Type { Number, Variable, Neg, Add, Sub, Mul, Div, Pow, Call };

  Type type = Type::Number;
  double number = 0.0;
  Var var = Var::S;
  Func func = Func::Sin;
  std::shared_ptr<const Node> lhs;
  std::shared_ptr<const Node> rhs;
};

namespace {

using Node = ScalarExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

constexpr std::array<std::pair<std::string_view, Func>, 10> kFunctions{{
    {"sin", Func::Sin}, {"cos", Func::Cos}, {"tan", Func::Tan},
    {"sinh", Func::Sinh}, {"cosh", Func::Cosh}, {"tanh", Func::Tanh},
    {"exp", Func::Exp}, {"log", Func::Log}, {"sqrt", Func::Sqrt},
    {"abs", Func::Abs},
}};

std::string_view func_name(Func f) {
  for (const auto& [name, fn] : kFunctions) {
    if (fn == f) return name;
  }
  return "?";
}

NodePtr make_number(double x) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Number;
  n->number = x;
  return n;
}

NodePtr make_var(Var v) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Variable;
  n->var = v;
  return n;
}

NodePtr make_binary(Node::Type t, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->type = t;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_unary(Node::Type t, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->type = t;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_call(Func f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->type = Node::Type::Call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(ErrorKind::SyntaxError, pos_, msg);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Node::Type::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make_binary(Node::Type::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Node::Type::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Node::Type::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_unary(Node::Type::Neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  // The exponent is a unary so that 2^-1 parses; -x^2 is -(x^2).
  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Node::Type::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
      ++pos_;
    }
    // Exponent part only when followed by digits, so "2*e" style input is
    // never swallowed.
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < text_.size() && (text_[p] == '+' || text_[p] == '-')) ++p;
      if (p < text_.size() && std::isdigit(static_cast<unsigned char>(text_[p]))) {
        pos_ = p;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      }
    }
    const std::string lexeme(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double x = std::strtod(lexeme.c_str(), &end);
    if (end != lexeme.c_str() + lexeme.size() || lexeme == ".") {
      pos_ = start;
      fail("malformed number '" + lexeme + "'");
    }
    return make_number(x);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    for (const auto& [fname, f] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) fail("expected '(' after " + std::string(name));
        NodePtr arg = expression();
        if (!accept(')')) fail("expected ')'");
        return make_call(f, arg);
      }
    }
    if (name == "s") return make_var(Var::S);
    if (name == "u") return make_var(Var::U);
    if (name == "v") return make_var(Var::V);
    if (name == "pi") return make_number(std::numbers::pi);
    if (name == "e") return make_number(std::numbers::e);
    throw ParseError(ErrorKind::UnknownIdentifier, start,
                     "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

[[noreturn]] void domain_error(const std::string& what) {
  throw Error(ErrorKind::EvalError, what);
}

double eval_node(const Node& n, const Vars& at) {
  using T = Node::Type;
  switch (n.type) {
    case T::Number: return n.number;
    case T::Variable:
      switch (n.var) {
        case Var::S: return at.s;
        case Var::U: return at.u;
        case Var::V: return at.v;
      }
      return 0.0;
    case T::Neg: return -eval_node(*n.lhs, at);
    case T::Add: return eval_node(*n.lhs, at) + eval_node(*n.rhs, at);
    case T::Sub: return eval_node(*n.lhs, at) - eval_node(*n.rhs, at);
    case T::Mul: return eval_node(*n.lhs, at) * eval_node(*n.rhs, at);
    case T::Div: {
      const double den = eval_node(*n.rhs, at);
      if (den == 0.0) domain_error("division by zero");
      return eval_node(*n.lhs, at) / den;
    }
    case T::Pow: {
      const double base = eval_node(*n.lhs, at);
      const double ex = eval_node(*n.rhs, at);
      if (base < 0.0 && std::trunc(ex) != ex) domain_error("negative base with fractional exponent");
      if (base == 0.0 && ex < 0.0) domain_error("zero to a negative power");
      return std::pow(base, ex);
    }
    case T::Call: {
      const double x = eval_node(*n.lhs, at);
      switch (n.func) {
        case Func::Sin: return std::sin(x);
        case Func::Cos: return std::cos(x);
        case Func::Tan:
          if (std::cos(x) == 0.0) domain_error("tan pole");
          return std::tan(x);
        case Func::Sinh: return std::sinh(x);
        case Func::Cosh: return std::cosh(x);
        case Func::Tanh: return std::tanh(x);
        case Func::Exp: return std::exp(x);
        case Func::Log:
          if (x <= 0.0) domain_error("log of non-positive value");
          return std::log(x);
        case Func::Sqrt:
          if (x < 0.0) domain_error("sqrt of negative value");
          return std::sqrt(x);
        case Func::Abs: return std::abs(x);
      }
      return 0.0;
    }
  }
  return 0.0;
}

void print_node(const Node& n, std::string& out) {
  using T = Node::Type;
  switch (n.type) {
    case T::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.number);
      out += '(';
      out += buf;
      out += ')';
      return;
    }
    case T::Variable:
      out += n.var == Var::S ? "s" : n.var == Var::U ? "u" : "v";
      return;
    case T::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case T::Call:
      out += func_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    default: break;
  }
  const char op = n.type == T::Add ? '+' : n.type == T::Sub ? '-' : n.type == T::Mul ? '*'
                  : n.type == T::Div ? '/' : '^';
  out += '(';
  print_node(*n.lhs, out);
  out += ' ';
  out += op;
  out += ' ';
  print_node(*n.rhs, out);
  out += ')';
}

bool node_depends(const Node& n, Var v) {
  if (n.type == Node::Type::Variable) return n.var == v;
  if (n.lhs && node_depends(*n.lhs, v)) return true;
  if (n.rhs && node_depends(*n.rhs, v)) return true;
  return false;
}

}  // namespace

ScalarExpr::ScalarExpr() : root_(make_number(0.0)) {}

ScalarExpr::ScalarExpr(double constant) : root_(make_number(constant)) {}

ScalarExpr::ScalarExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

double ScalarExpr::eval(const Vars& at) const {
  const double x = eval_node(*root_, at);
  if (!std::isfinite(x)) domain_error("non-finite result");
  return x;
}

std::string ScalarExpr::to_string() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

bool ScalarExpr::depends_on(Var var) const { return node_depends(*root_, var); }

ScalarExpr parse_expr(std::string_view text) { return ScalarExpr(Parser(text).parse()); }

}  // namespace rnshelix
