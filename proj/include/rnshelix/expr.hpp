#pragma once

#include <memory>
#include <string>
#include <string_view>

namespace rnshelix {

/// Bindings for the three variables an expression may mention.
struct Vars {
  double s = 0.0;
  double u = 0.0;
  double v = 0.0;
};

enum class Var { S, U, V };

/// Immutable parse tree over {s, u, v}, numeric literals, the constants pi
/// and e, + - * / ^, unary minus, and the functions
/// sin cos tan sinh cosh tanh exp log sqrt abs.
///
/// Copies share the tree; evaluation is const and thread-safe.
class ScalarExpr {
 public:
  struct Node;

  ScalarExpr();  // the constant 0
  explicit ScalarExpr(double constant);

  /// Throws EvalError on a domain violation or a non-finite result.
  double eval(const Vars& at) const;
  double eval(double s) const { return eval(Vars{s, 0.0, 0.0}); }

  /// Fully parenthesised text that parses back to an equivalent tree.
  std::string to_string() const;

  bool depends_on(Var var) const;

  explicit ScalarExpr(std::shared_ptr<const Node> root);

 private:
  std::shared_ptr<const Node> root_;
};

/// Precedence: ^ (right-assoc) > unary minus > * / > + - (left-assoc).
/// Throws ParseError(SyntaxError) with a byte offset or
/// ParseError(UnknownIdentifier).
ScalarExpr parse_expr(std::string_view text);

}  // namespace rnshelix
