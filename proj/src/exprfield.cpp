#include "cmv/exprfield.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

#include "cmv/errors.hpp"

namespace cmv {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::UnboundParameter: return "UnboundParameter";
    case ErrorKind::Domain: return "DomainError";
    case ErrorKind::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorKind::DegeneratePlane: return "DegeneratePlane";
    case ErrorKind::FrameNotOrthonormal: return "FrameNotOrthonormal";
    case ErrorKind::NotContact: return "NotContact";
    case ErrorKind::NotCompatible: return "NotCompatible";
    case ErrorKind::UmbilicPoint: return "UmbilicPoint";
    case ErrorKind::ZeroK: return "ZeroK";
    case ErrorKind::NonpositiveK: return "NonpositiveK";
    case ErrorKind::InvalidParams: return "InvalidParams";
    case ErrorKind::Schema: return "SchemaError";
  }
  return "Unknown";
}

namespace {

NodePtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->constant = v;
  return n;
}

NodePtr make_unary(NodeKind kind, NodePtr operand) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(operand);
  return n;
}

NodePtr make_binary(NodeKind kind, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

bool lookup_function(std::string_view name, Func& out) {
  if (name == "exp") out = Func::Exp;
  else if (name == "sin") out = Func::Sin;
  else if (name == "cos") out = Func::Cos;
  else if (name == "sqrt") out = Func::Sqrt;
  else if (name == "log") out = Func::Log;
  else return false;
  return true;
}

std::string_view function_name(Func f) {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sqrt: return "sqrt";
    case Func::Log: return "log";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::string_view src, const ParamNames& params)
      : src_(src), params_(params) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw Error(ErrorKind::EmptyInput, "empty expression");
    NodePtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  // expr := term (('+'|'-') term)*
  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      skip_ws();
      if (accept('+')) lhs = make_binary(NodeKind::Add, lhs, term());
      else if (accept('-')) lhs = make_binary(NodeKind::Subtract, lhs, term());
      else return lhs;
    }
  }

  // term := factor (('*'|'/') factor)*
  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      skip_ws();
      if (accept('*')) lhs = make_binary(NodeKind::Multiply, lhs, factor());
      else if (accept('/')) lhs = make_binary(NodeKind::Divide, lhs, factor());
      else return lhs;
    }
  }

  // factor := ('-')? power
  NodePtr factor() {
    skip_ws();
    if (accept('-')) return make_unary(NodeKind::Negate, power());
    return power();
  }

  // power := atom ('^' factor)?
  NodePtr power() {
    NodePtr base = atom();
    skip_ws();
    if (accept('^')) return make_binary(NodeKind::Power, base, factor());
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ == src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (accept('(')) {
      NodePtr inner = expr();
      skip_ws();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t n = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      n += digits();
    }
    if (n == 0) fail_at(start, "malformed number");
    // Exponent only when a digit follows, so "2e" stays a number then a name.
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < src_.size() && (src_[look] == '+' || src_[look] == '-')) ++look;
      if (look < src_.size() && std::isdigit(static_cast<unsigned char>(src_[look]))) {
        pos_ = look;
        digits();
      }
    }
    const std::string text(src_.substr(start, pos_ - start));
    return make_constant(std::strtod(text.c_str(), nullptr));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view name = src_.substr(start, pos_ - start);

    skip_ws();
    Func fn;
    if (pos_ < src_.size() && src_[pos_] == '(' && lookup_function(name, fn)) {
      ++pos_;
      NodePtr arg = expr();
      skip_ws();
      if (!accept(')')) fail("expected ')'");
      auto n = std::make_shared<ExprNode>();
      n->kind = NodeKind::Function;
      n->func = fn;
      n->lhs = std::move(arg);
      return n;
    }
    if (lookup_function(name, fn)) fail("expected '(' after '" + std::string(name) + "'");
    if (name.size() == 1 && (name[0] == 'x' || name[0] == 'y' || name[0] == 'z')) {
      auto n = std::make_shared<ExprNode>();
      n->kind = NodeKind::Coordinate;
      n->axis = name[0] - 'x';
      return n;
    }
    if (params_.contains(name)) {
      auto n = std::make_shared<ExprNode>();
      n->kind = NodeKind::Parameter;
      n->name = std::string(name);
      return n;
    }
    throw Error(ErrorKind::UnknownIdentifier,
                "unknown identifier '" + std::string(name) + "' at offset " +
                    std::to_string(start));
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) { fail_at(pos_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) {
    throw SyntaxError(at, what);
  }

  std::string_view src_;
  const ParamNames& params_;
  std::size_t pos_ = 0;
};

void print_node(const ExprNode& n, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print_node(*n.lhs, out);
    out += op;
    print_node(*n.rhs, out);
    out += ')';
  };
  switch (n.kind) {
    case NodeKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.constant);
      out += buf;
      return;
    }
    case NodeKind::Coordinate: out += static_cast<char>('x' + n.axis); return;
    case NodeKind::Parameter: out += n.name; return;
    case NodeKind::Negate:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case NodeKind::Add: binary(" + "); return;
    case NodeKind::Subtract: binary(" - "); return;
    case NodeKind::Multiply: binary(" * "); return;
    case NodeKind::Divide: binary(" / "); return;
    case NodeKind::Power: binary(" ^ "); return;
    case NodeKind::Function:
      out += function_name(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
  }
}

bool nodes_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant: return a.constant == b.constant;
    case NodeKind::Coordinate: return a.axis == b.axis;
    case NodeKind::Parameter: return a.name == b.name;
    case NodeKind::Negate: return nodes_equal(*a.lhs, *b.lhs);
    case NodeKind::Function: return a.func == b.func && nodes_equal(*a.lhs, *b.lhs);
    default: return nodes_equal(*a.lhs, *b.lhs) && nodes_equal(*a.rhs, *b.rhs);
  }
}

[[noreturn]] void domain_error(const std::string& what) {
  throw Error(ErrorKind::Domain, what);
}

Jet2 reciprocal(const Jet2& a) {
  if (a.value == 0.0) domain_error("division by zero");
  const double r = 1.0 / a.value;
  return compose(a, r, -r * r, 2.0 * r * r * r);
}

Jet2 integer_power(const Jet2& base, long n) {
  if (n < 0) return reciprocal(integer_power(base, -n));
  Jet2 result(1.0);
  Jet2 factor = base;
  while (n > 0) {
    if (n & 1) result = result * factor;
    n >>= 1;
    if (n > 0) factor = factor * factor;
  }
  return result;
}

bool is_constant_jet(const Jet2& j) {
  if (!j.grad.isZero(0.0)) return false;
  for (double c : j.hess.components())
    if (c != 0.0) return false;
  return true;
}

double parameter_value(const ExprNode& n, const ParamTable& params) {
  auto it = params.find(n.name);
  if (it == params.end())
    throw Error(ErrorKind::UnboundParameter, "parameter '" + n.name + "' is not bound");
  return it->second;
}

Jet2 eval_node(const ExprNode& n, const Point& p, const ParamTable& params) {
  switch (n.kind) {
    case NodeKind::Constant: return Jet2(n.constant);
    case NodeKind::Coordinate: {
      const double v = n.axis == 0 ? p.x : n.axis == 1 ? p.y : p.z;
      return Jet2::coordinate(n.axis, v);
    }
    case NodeKind::Parameter: return Jet2(parameter_value(n, params));
    case NodeKind::Negate: return -eval_node(*n.lhs, p, params);
    case NodeKind::Add: return eval_node(*n.lhs, p, params) + eval_node(*n.rhs, p, params);
    case NodeKind::Subtract: return eval_node(*n.lhs, p, params) - eval_node(*n.rhs, p, params);
    case NodeKind::Multiply: return eval_node(*n.lhs, p, params) * eval_node(*n.rhs, p, params);
    case NodeKind::Divide:
      return eval_node(*n.lhs, p, params) * reciprocal(eval_node(*n.rhs, p, params));
    case NodeKind::Power: {
      const Jet2 base = eval_node(*n.lhs, p, params);
      const Jet2 expo = eval_node(*n.rhs, p, params);
      if (is_constant_jet(expo)) {
        const double e = expo.value;
        if (e == std::trunc(e) && std::abs(e) <= 1 << 20)
          return integer_power(base, static_cast<long>(e));
        if (base.value <= 0.0) domain_error("non-integer power of non-positive base");
        const double v = std::pow(base.value, e);
        return compose(base, v, e * v / base.value, e * (e - 1.0) * v / (base.value * base.value));
      }
      if (base.value <= 0.0) domain_error("variable exponent needs a positive base");
      const double lb = std::log(base.value);
      const Jet2 log_base = compose(base, lb, 1.0 / base.value, -1.0 / (base.value * base.value));
      const Jet2 prod = expo * log_base;
      const double v = std::exp(prod.value);
      return compose(prod, v, v, v);
    }
    case NodeKind::Function: {
      const Jet2 a = eval_node(*n.lhs, p, params);
      const double t = a.value;
      switch (n.func) {
        case Func::Exp: {
          const double e = std::exp(t);
          return compose(a, e, e, e);
        }
        case Func::Sin: return compose(a, std::sin(t), std::cos(t), -std::sin(t));
        case Func::Cos: return compose(a, std::cos(t), -std::sin(t), -std::cos(t));
        case Func::Sqrt: {
          if (t <= 0.0) domain_error("sqrt of non-positive argument");
          const double r = std::sqrt(t);
          return compose(a, r, 0.5 / r, -0.25 / (r * t));
        }
        case Func::Log:
          if (t <= 0.0) domain_error("log of non-positive argument");
          return compose(a, std::log(t), 1.0 / t, -1.0 / (t * t));
      }
    }
  }
  domain_error("malformed expression");
}

// Plain double recursion, kept separate from the jet path.
double value_node(const ExprNode& n, const Point& p, const ParamTable& params) {
  switch (n.kind) {
    case NodeKind::Constant: return n.constant;
    case NodeKind::Coordinate: return n.axis == 0 ? p.x : n.axis == 1 ? p.y : p.z;
    case NodeKind::Parameter: return parameter_value(n, params);
    case NodeKind::Negate: return -value_node(*n.lhs, p, params);
    case NodeKind::Add: return value_node(*n.lhs, p, params) + value_node(*n.rhs, p, params);
    case NodeKind::Subtract: return value_node(*n.lhs, p, params) - value_node(*n.rhs, p, params);
    case NodeKind::Multiply: return value_node(*n.lhs, p, params) * value_node(*n.rhs, p, params);
    case NodeKind::Divide: {
      const double d = value_node(*n.rhs, p, params);
      if (d == 0.0) domain_error("division by zero");
      return value_node(*n.lhs, p, params) / d;
    }
    case NodeKind::Power: {
      const double b = value_node(*n.lhs, p, params);
      const double e = value_node(*n.rhs, p, params);
      if (e != std::trunc(e) && b <= 0.0) domain_error("non-integer power of non-positive base");
      if (b == 0.0 && e < 0.0) domain_error("division by zero");
      return std::pow(b, e);
    }
    case NodeKind::Function: {
      const double t = value_node(*n.lhs, p, params);
      switch (n.func) {
        case Func::Exp: return std::exp(t);
        case Func::Sin: return std::sin(t);
        case Func::Cos: return std::cos(t);
        case Func::Sqrt:
          if (t <= 0.0) domain_error("sqrt of non-positive argument");
          return std::sqrt(t);
        case Func::Log:
          if (t <= 0.0) domain_error("log of non-positive argument");
          return std::log(t);
      }
    }
  }
  domain_error("malformed expression");
}

}  // namespace

ScalarFieldExpr ScalarFieldExpr::constant(double v) {
  return ScalarFieldExpr(make_constant(v));
}

ScalarFieldExpr parse(std::string_view source, const ParamNames& params) {
  return ScalarFieldExpr(Parser(source, params).parse_all());
}

std::string print(const ScalarFieldExpr& f) {
  std::string out;
  print_node(f.root(), out);
  return out;
}

bool structurally_equal(const ScalarFieldExpr& a, const ScalarFieldExpr& b) {
  return nodes_equal(a.root(), b.root());
}

Jet2 eval_jet2(const ScalarFieldExpr& f, const Point& p, const ParamTable& params) {
  return eval_node(f.root(), p, params);
}

double eval_value(const ScalarFieldExpr& f, const Point& p, const ParamTable& params) {
  return value_node(f.root(), p, params);
}

}  // namespace cmv
