#include "contact/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "contact/errors.hpp"

namespace contact {

namespace {

struct FuncEntry {
  const char* name;
  Func func;
};

constexpr FuncEntry kFuncs[] = {
    {"sin", Func::Sin},   {"cos", Func::Cos},   {"tan", Func::Tan},   {"asin", Func::Asin},
    {"acos", Func::Acos}, {"atan", Func::Atan}, {"sinh", Func::Sinh}, {"cosh", Func::Cosh},
    {"tanh", Func::Tanh}, {"exp", Func::Exp},   {"log", Func::Log},   {"sqrt", Func::Sqrt},
};

bool lookup_func(const std::string& name, Func& out) {
  for (const auto& f : kFuncs)
    if (name == f.name) {
      out = f.func;
      return true;
    }
  return false;
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

class Parser {
 public:
  Parser(const std::string& text, const std::vector<std::string>& coords)
      : text_(text), coords_(coords) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) error("end of input");
    return e;
  }

 private:
  [[noreturn]] void error(const std::string& expected) {
    throw SyntaxError(pos_, expected, text_);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) error(std::string("'") + c + "'");
    ++pos_;
  }

  NodePtr binary(char op, NodePtr a, NodePtr b) {
    Node n;
    n.kind = NodeKind::Binary;
    n.op = op;
    n.lhs = std::move(a);
    n.rhs = std::move(b);
    return make(std::move(n));
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek('+') || peek('-')) {
      char op = text_[pos_++];
      lhs = binary(op, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (peek('*') || peek('/')) {
      char op = text_[pos_++];
      lhs = binary(op, lhs, factor());
    }
    return lhs;
  }

  NodePtr factor() {
    if (peek('-')) {
      ++pos_;
      Node n;
      n.kind = NodeKind::Negate;
      n.lhs = power();
      return make(std::move(n));
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (peek('^')) {
      ++pos_;
      return binary('^', base, power());
    }
    return base;
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) error("number, identifier or '('");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    error("number, identifier or '('");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t k = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++k;
      }
      return k;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      if (digits() == 0) error("digit after '.'");
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) error("exponent digits");
    }
    double v = 0.0;
    auto res = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (res.ec != std::errc() || !std::isfinite(v)) {
      pos_ = start;
      error("finite number literal");
    }
    Node n;
    n.kind = NodeKind::Constant;
    n.value = v;
    return make(std::move(n));
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name = text_.substr(start, pos_ - start);
    Func f;
    if (peek('(') && lookup_func(name, f)) {
      ++pos_;
      Node n;
      n.kind = NodeKind::Call;
      n.func = f;
      n.lhs = expr();
      expect(')');
      return make(std::move(n));
    }
    for (std::size_t i = 0; i < coords_.size(); ++i)
      if (coords_[i] == name) {
        Node n;
        n.kind = NodeKind::Variable;
        n.var = static_cast<int>(i);
        return make(std::move(n));
      }
    if (name == "pi" || name == "e") {
      Node n;
      n.kind = NodeKind::NamedConstant;
      n.name = name;
      n.value = name == "pi" ? std::numbers::pi : std::numbers::e;
      return make(std::move(n));
    }
    throw Error("UnknownIdentifier", "'" + name + "' at position " + std::to_string(start) +
                                         " in '" + text_ + "'");
  }

  const std::string& text_;
  const std::vector<std::string>& coords_;
  std::size_t pos_ = 0;
};

bool has_variables(const Node& n) {
  switch (n.kind) {
    case NodeKind::Variable:
      return true;
    case NodeKind::Constant:
    case NodeKind::NamedConstant:
      return false;
    case NodeKind::Negate:
    case NodeKind::Call:
      return has_variables(*n.lhs);
    case NodeKind::Binary:
      return has_variables(*n.lhs) || has_variables(*n.rhs);
  }
  return false;
}

struct EvalCtx {
  std::span<const double> point;
  int order;
  int dim;
  const std::vector<std::string>& coords;
};

[[noreturn]] void domain_error(const Node& n, const EvalCtx& ctx, const std::string& what) {
  throw Error("DomainError", what + " in " + print_node(n, ctx.coords));
}

Jet eval_node(const Node& n, const EvalCtx& ctx);

// Applies f with derivatives f0..f3, skipping derivative work for constant
// arguments so that e.g. sqrt(0) is fine when nothing depends on it.
Jet apply(const Node& n, const EvalCtx& ctx, const Jet& u, double f0, double f1, double f2,
          double f3) {
  if (u.is_constant() || ctx.order == 0) {
    if (!std::isfinite(f0)) domain_error(n, ctx, "non-finite value");
    return Jet::constant(f0, ctx.dim, ctx.order);
  }
  const double fs[4] = {f0, f1, f2, f3};
  for (int k = 0; k <= ctx.order; ++k)
    if (!std::isfinite(fs[k])) domain_error(n, ctx, "non-finite derivative");
  return u.compose(f0, ctx.order >= 1 ? f1 : 0.0, ctx.order >= 2 ? f2 : 0.0,
                   ctx.order >= 3 ? f3 : 0.0);
}

Jet reciprocal(const Node& n, const EvalCtx& ctx, const Jet& u) {
  const double x = u.value();
  if (x == 0.0) domain_error(n, ctx, "division by zero");
  const double r = 1.0 / x;
  return apply(n, ctx, u, r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r);
}

// x^c for constant c; coefficients that vanish are not multiplied by a
// possibly infinite power of zero.
Jet constant_power(const Node& n, const EvalCtx& ctx, const Jet& u, double c) {
  const double x = u.value();
  const bool integral = std::floor(c) == c && std::fabs(c) < 1e15;
  if (x < 0.0 && !integral) domain_error(n, ctx, "negative base with non-integer exponent");
  double f[4] = {0, 0, 0, 0};
  double coeff = 1.0;
  for (int k = 0; k <= 3; ++k) {
    if (k > 0) coeff *= (c - (k - 1));
    if (coeff == 0.0) {
      f[k] = 0.0;
      continue;
    }
    if (k > ctx.order && k > 0) break;
    f[k] = coeff * std::pow(x, c - k);
  }
  return apply(n, ctx, u, f[0], f[1], f[2], f[3]);
}

Jet call(const Node& n, const EvalCtx& ctx, const Jet& u) {
  const double x = u.value();
  switch (n.func) {
    case Func::Sin: {
      const double s = std::sin(x), c = std::cos(x);
      return apply(n, ctx, u, s, c, -s, -c);
    }
    case Func::Cos: {
      const double s = std::sin(x), c = std::cos(x);
      return apply(n, ctx, u, c, -s, -c, s);
    }
    case Func::Tan: {
      const double c = std::cos(x);
      if (c == 0.0) domain_error(n, ctx, "tan at a pole");
      const double t = std::tan(x), s2 = 1.0 + t * t;
      return apply(n, ctx, u, t, s2, 2.0 * t * s2, s2 * (2.0 + 6.0 * t * t));
    }
    case Func::Asin:
    case Func::Acos: {
      if (std::fabs(x) > 1.0) domain_error(n, ctx, "argument outside [-1, 1]");
      const double sign = n.func == Func::Asin ? 1.0 : -1.0;
      const double f0 = n.func == Func::Asin ? std::asin(x) : std::acos(x);
      if (u.is_constant() || ctx.order == 0) return apply(n, ctx, u, f0, 0, 0, 0);
      const double q = 1.0 - x * x;
      if (q == 0.0) domain_error(n, ctx, "derivative at |x| = 1");
      const double r = 1.0 / std::sqrt(q);
      return apply(n, ctx, u, f0, sign * r, sign * x * r * r * r,
                   sign * (1.0 + 2.0 * x * x) * r * r * r * r * r);
    }
    case Func::Atan: {
      const double q = 1.0 / (1.0 + x * x);
      return apply(n, ctx, u, std::atan(x), q, -2.0 * x * q * q, (6.0 * x * x - 2.0) * q * q * q);
    }
    case Func::Sinh: {
      const double s = std::sinh(x), c = std::cosh(x);
      return apply(n, ctx, u, s, c, s, c);
    }
    case Func::Cosh: {
      const double s = std::sinh(x), c = std::cosh(x);
      return apply(n, ctx, u, c, s, c, s);
    }
    case Func::Tanh: {
      const double t = std::tanh(x), s2 = 1.0 - t * t;
      return apply(n, ctx, u, t, s2, -2.0 * t * s2, s2 * (6.0 * t * t - 2.0));
    }
    case Func::Exp: {
      const double e = std::exp(x);
      return apply(n, ctx, u, e, e, e, e);
    }
    case Func::Log: {
      if (x <= 0.0) domain_error(n, ctx, "log of non-positive argument");
      const double r = 1.0 / x;
      return apply(n, ctx, u, std::log(x), r, -r * r, 2.0 * r * r * r);
    }
    case Func::Sqrt: {
      if (x < 0.0) domain_error(n, ctx, "sqrt of negative argument");
      const double s = std::sqrt(x);
      if (u.is_constant() || ctx.order == 0) return apply(n, ctx, u, s, 0, 0, 0);
      if (x == 0.0) domain_error(n, ctx, "derivative of sqrt at 0");
      const double r = 1.0 / x;
      return apply(n, ctx, u, s, 0.5 * s * r, -0.25 * s * r * r, 0.375 * s * r * r * r);
    }
  }
  domain_error(n, ctx, "unknown function");
}

Jet eval_node(const Node& n, const EvalCtx& ctx) {
  switch (n.kind) {
    case NodeKind::Constant:
    case NodeKind::NamedConstant:
      return Jet::constant(n.value, ctx.dim, ctx.order);
    case NodeKind::Variable:
      return Jet::variable(ctx.point[n.var], n.var, ctx.dim, ctx.order);
    case NodeKind::Negate:
      return -eval_node(*n.lhs, ctx);
    case NodeKind::Call:
      return call(n, ctx, eval_node(*n.lhs, ctx));
    case NodeKind::Binary: {
      const Jet a = eval_node(*n.lhs, ctx);
      switch (n.op) {
        case '+':
          return a + eval_node(*n.rhs, ctx);
        case '-':
          return a - eval_node(*n.rhs, ctx);
        case '*':
          return a * eval_node(*n.rhs, ctx);
        case '/':
          return a * reciprocal(n, ctx, eval_node(*n.rhs, ctx));
        case '^': {
          if (!has_variables(*n.rhs)) {
            const EvalCtx scalar{ctx.point, 0, ctx.dim, ctx.coords};
            const double c = eval_node(*n.rhs, scalar).value();
            return constant_power(n, ctx, a, c);
          }
          if (a.value() <= 0.0) domain_error(n, ctx, "non-positive base with variable exponent");
          const double x = a.value(), r = 1.0 / x;
          const Jet la = apply(n, ctx, a, std::log(x), r, -r * r, 2.0 * r * r * r);
          const Jet p = la * eval_node(*n.rhs, ctx);
          const double ep = std::exp(p.value());
          return apply(n, ctx, p, ep, ep, ep, ep);
        }
      }
      break;
    }
  }
  domain_error(n, ctx, "malformed node");
}

void print_rec(const Node& n, const std::vector<std::string>& coords, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (n.value < 0.0) {
        out += "(0";
        out += buf;
        out += ")";
      } else {
        out += buf;
      }
      return;
    }
    case NodeKind::NamedConstant:
      out += n.name;
      return;
    case NodeKind::Variable:
      out += coords.at(n.var);
      return;
    case NodeKind::Negate:
      out += "(-";
      print_rec(*n.lhs, coords, out);
      out += ")";
      return;
    case NodeKind::Call:
      out += func_name(n.func);
      out += "(";
      print_rec(*n.lhs, coords, out);
      out += ")";
      return;
    case NodeKind::Binary:
      out += "(";
      print_rec(*n.lhs, coords, out);
      out += n.op;
      print_rec(*n.rhs, coords, out);
      out += ")";
      return;
  }
}

}  // namespace

const char* func_name(Func f) {
  for (const auto& e : kFuncs)
    if (e.func == f) return e.name;
  return "?";
}

Expression::Expression(NodePtr root, std::vector<std::string> coords)
    : root_(std::move(root)), coords_(std::move(coords)) {}

Jet Expression::eval_jet(std::span<const double> point, int order) const {
  if (order < 0 || order > 3) fail("InvalidInputs", "jet order must be 0..3");
  if (static_cast<int>(point.size()) != dim())
    fail("InvalidInputs", "point dimension does not match expression coordinates");
  for (double x : point)
    if (!std::isfinite(x)) fail("InvalidInputs", "non-finite evaluation point");
  const EvalCtx ctx{point, order, dim(), coords_};
  return eval_node(*root_, ctx);
}

double Expression::eval(std::span<const double> point) const { return eval_jet(point, 0).value(); }

std::string Expression::print() const { return print_node(*root_, coords_); }

bool Expression::depends_on_variables() const { return has_variables(*root_); }

Expression parse(const std::string& text, const std::vector<std::string>& coords) {
  for (std::size_t i = 0; i < coords.size(); ++i)
    for (std::size_t j = i + 1; j < coords.size(); ++j)
      if (coords[i] == coords[j]) fail("InvalidInputs", "duplicate coordinate name " + coords[i]);
  if (static_cast<int>(coords.size()) > Jet::kMaxDim)
    fail("InvalidInputs", "at most " + std::to_string(Jet::kMaxDim) + " coordinates supported");
  bool blank = true;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) blank = false;
  if (blank) throw SyntaxError(0, "expression", text);
  Parser p(text, coords);
  return Expression(p.run(), coords);
}

Jet eval_jet(const Expression& e, std::span<const double> point, int order) {
  return e.eval_jet(point, order);
}

std::string print(const Expression& e) { return e.print(); }

std::string print_node(const Node& n, const std::vector<std::string>& coords) {
  std::string out;
  print_rec(n, coords, out);
  return out;
}

bool structurally_equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.value == b.value;
    case NodeKind::NamedConstant:
      return a.name == b.name;
    case NodeKind::Variable:
      return a.var == b.var;
    case NodeKind::Negate:
      return structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Call:
      return a.func == b.func && structurally_equal(*a.lhs, *b.lhs);
    case NodeKind::Binary:
      return a.op == b.op && structurally_equal(*a.lhs, *b.lhs) &&
             structurally_equal(*a.rhs, *b.rhs);
  }
  return false;
}

bool structurally_equal(const Expression& a, const Expression& b) {
  return a.coords() == b.coords() && structurally_equal(a.root(), b.root());
}

}  // namespace contact
