#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "cmv/jet.hpp"

namespace cmv {

/// A point of the chart, coordinates (x, y, z).
struct Point {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  Vec3 vec() const { return {x, y, z}; }
  static Point from(const Vec3& v) { return {v[0], v[1], v[2]}; }
  bool finite() const {
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
  }
};

using ParamTable = std::map<std::string, double, std::less<>>;
using ParamNames = std::set<std::string, std::less<>>;

enum class NodeKind {
  Constant,
  Coordinate,
  Parameter,
  Negate,
  Add,
  Subtract,
  Multiply,
  Divide,
  Power,
  Function,
};

enum class Func { Exp, Sin, Cos, Sqrt, Log };

struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double constant = 0.0;  // Constant
  int axis = 0;           // Coordinate
  std::string name;       // Parameter
  Func func = Func::Exp;  // Function
  NodePtr lhs;            // unary operand or left operand
  NodePtr rhs;
};

/// Immutable expression tree over the chart coordinates and named
/// parameters. Copies share the tree.
class ScalarFieldExpr {
 public:
  ScalarFieldExpr() = default;
  explicit ScalarFieldExpr(NodePtr root) : root_(std::move(root)) {}

  const ExprNode& root() const { return *root_; }
  bool empty() const { return root_ == nullptr; }

  static ScalarFieldExpr constant(double v);

 private:
  NodePtr root_;
};

/// Recursive-descent parser. Throws SyntaxError (with offset),
/// Error{UnknownIdentifier} or Error{EmptyInput}.
ScalarFieldExpr parse(std::string_view source, const ParamNames& params = {});

/// Fully parenthesized text that parses back to the same tree.
std::string print(const ScalarFieldExpr& f);

bool structurally_equal(const ScalarFieldExpr& a, const ScalarFieldExpr& b);

/// Value, gradient and Hessian at `p`. Throws Error{Domain} for sqrt/log/pow
/// outside their real domain or division by zero, Error{UnboundParameter}
/// when a referenced parameter is missing from `params`.
Jet2 eval_jet2(const ScalarFieldExpr& f, const Point& p,
               const ParamTable& params = {});

double eval_value(const ScalarFieldExpr& f, const Point& p,
                  const ParamTable& params = {});

}  // namespace cmv
