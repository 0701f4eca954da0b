#include "warpstring/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <utility>

namespace warpstring {

namespace {

ExprPtr constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Constant;
  n->value = v;
  return n;
}

ExprPtr variable(std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Variable;
  n->name = std::move(name);
  return n;
}

ExprPtr binary(ExprKind kind, ExprPtr a, ExprPtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

ExprPtr unary(ExprKind kind, ExprPtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = kind;
  n->lhs = std::move(a);
  return n;
}

ExprPtr power(ExprPtr base, int k) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprKind::Pow;
  n->exponent = k;
  n->lhs = std::move(base);
  return n;
}

bool is_const(const ExprPtr& e, double v) {
  return e->kind == ExprKind::Constant && e->value == v;
}

// Constant-folding constructors keep derivative trees small.
ExprPtr add(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return b;
  if (is_const(b, 0.0)) return a;
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return constant(a->value + b->value);
  return binary(ExprKind::Add, std::move(a), std::move(b));
}

ExprPtr sub(ExprPtr a, ExprPtr b) {
  if (is_const(b, 0.0)) return a;
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return constant(a->value - b->value);
  return binary(ExprKind::Sub, std::move(a), std::move(b));
}

ExprPtr mul(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0) || is_const(b, 0.0)) return constant(0.0);
  if (is_const(a, 1.0)) return b;
  if (is_const(b, 1.0)) return a;
  if (a->kind == ExprKind::Constant && b->kind == ExprKind::Constant)
    return constant(a->value * b->value);
  return binary(ExprKind::Mul, std::move(a), std::move(b));
}

ExprPtr divide(ExprPtr a, ExprPtr b) {
  if (is_const(a, 0.0)) return constant(0.0);
  if (is_const(b, 1.0)) return a;
  return binary(ExprKind::Div, std::move(a), std::move(b));
}

ExprPtr pow_node(ExprPtr base, int k) {
  if (k == 0) return constant(1.0);
  if (k == 1) return base;
  if (base->kind == ExprKind::Constant) {
    const double b = base->value;
    if (b != 0.0 || k > 0) return constant(std::pow(b, k));
  }
  return power(std::move(base), k);
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := ('+'|'-')* postfix
//   postfix:= atom ('^' ['-'] digits)?
//   atom   := number | ident | ident '(' expr ')' | '(' expr ')'
// Identifiers: variables x, s; functions exp, cosh, sinh.

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExprPtr run() {
    if (text_.find_first_not_of(" \t\r\n") == std::string_view::npos)
      throw ParseError("empty expression", 0);
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool consume(char c) {
    if (peek(c)) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (consume('+'))
        e = binary(ExprKind::Add, e, term());
      else if (consume('-'))
        e = binary(ExprKind::Sub, e, term());
      else
        return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (consume('*'))
        e = binary(ExprKind::Mul, e, factor());
      else if (consume('/'))
        e = binary(ExprKind::Div, e, factor());
      else
        return e;
    }
  }

  ExprPtr factor() {
    bool negate = false;
    for (;;) {
      if (consume('+')) continue;
      if (consume('-')) {
        negate = !negate;
        continue;
      }
      break;
    }
    ExprPtr e = postfix();
    return negate ? mul(constant(-1.0), e) : e;
  }

  ExprPtr postfix() {
    ExprPtr e = atom();
    if (consume('^')) {
      skip_ws();
      bool neg = false;
      if (pos_ < text_.size() && text_[pos_] == '-') {
        neg = true;
        ++pos_;
      }
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (pos_ == start) throw ParseError("expected integer exponent after '^'", pos_);
      long k = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
      if (k > 64 || k < -64) throw ParseError("exponent magnitude exceeds 64", start);
      e = pow_node(e, static_cast<int>(neg ? -k : k));
    }
    return e;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      skip_ws();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return e;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr number() {
    const char* begin = text_.data() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) throw ParseError("malformed number", pos_);
    pos_ += static_cast<std::size_t>(end - begin);
    return constant(v);
  }

  ExprPtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "x" || name == "s") return variable(name);
    if (name == "exp" || name == "cosh" || name == "sinh") {
      if (!consume('(')) throw ParseError("expected '(' after function name", pos_);
      ExprPtr arg = expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      if (name == "exp") return unary(ExprKind::Exp, arg);
      if (name == "cosh") return unary(ExprKind::Cosh, arg);
      return unary(ExprKind::Sinh, arg);
    }
    throw ParseError("unknown identifier '" + name + "'", start);
  }
};

// ---------------------------------------------------------------------------

double ipow(double base, int k) {
  if (k < 0) {
    if (base == 0.0) throw DomainError("0 raised to a negative power");
    return 1.0 / ipow(base, -k);
  }
  double r = 1.0, b = base;
  for (unsigned e = static_cast<unsigned>(k); e != 0; e >>= 1) {
    if (e & 1u) r *= b;
    b *= b;
  }
  return r;
}

double eval_node(const ExprNode& n, double x, double s) {
  switch (n.kind) {
    case ExprKind::Constant:
      return n.value;
    case ExprKind::Variable:
      return n.name == "x" ? x : s;
    case ExprKind::Add:
      return eval_node(*n.lhs, x, s) + eval_node(*n.rhs, x, s);
    case ExprKind::Sub:
      return eval_node(*n.lhs, x, s) - eval_node(*n.rhs, x, s);
    case ExprKind::Mul:
      return eval_node(*n.lhs, x, s) * eval_node(*n.rhs, x, s);
    case ExprKind::Div: {
      const double den = eval_node(*n.rhs, x, s);
      if (den == 0.0) throw DomainError("division by zero during evaluation");
      return eval_node(*n.lhs, x, s) / den;
    }
    case ExprKind::Pow:
      return ipow(eval_node(*n.lhs, x, s), n.exponent);
    case ExprKind::Exp:
      return std::exp(eval_node(*n.lhs, x, s));
    case ExprKind::Cosh:
      return std::cosh(eval_node(*n.lhs, x, s));
    case ExprKind::Sinh:
      return std::sinh(eval_node(*n.lhs, x, s));
  }
  throw std::logic_error("unreachable expression kind");
}

ExprPtr diff(const ExprPtr& e) {
  switch (e->kind) {
    case ExprKind::Constant:
      return constant(0.0);
    case ExprKind::Variable:
      return constant(e->name == "x" ? 1.0 : 0.0);
    case ExprKind::Add:
      return add(diff(e->lhs), diff(e->rhs));
    case ExprKind::Sub:
      return sub(diff(e->lhs), diff(e->rhs));
    case ExprKind::Mul:
      return add(mul(diff(e->lhs), e->rhs), mul(e->lhs, diff(e->rhs)));
    case ExprKind::Div:
      // (a/b)' = a'/b - a b'/b^2
      return sub(divide(diff(e->lhs), e->rhs),
                 divide(mul(e->lhs, diff(e->rhs)), pow_node(e->rhs, 2)));
    case ExprKind::Pow:
      return mul(mul(constant(static_cast<double>(e->exponent)),
                     pow_node(e->lhs, e->exponent - 1)),
                 diff(e->lhs));
    case ExprKind::Exp:
      return mul(unary(ExprKind::Exp, e->lhs), diff(e->lhs));
    case ExprKind::Cosh:
      return mul(unary(ExprKind::Sinh, e->lhs), diff(e->lhs));
    case ExprKind::Sinh:
      return mul(unary(ExprKind::Cosh, e->lhs), diff(e->lhs));
  }
  throw std::logic_error("unreachable expression kind");
}

ExprPtr substitute(const ExprPtr& e, const std::string& var, double value) {
  switch (e->kind) {
    case ExprKind::Constant:
      return e;
    case ExprKind::Variable:
      return e->name == var ? constant(value) : e;
    case ExprKind::Pow:
      return pow_node(substitute(e->lhs, var, value), e->exponent);
    case ExprKind::Exp:
    case ExprKind::Cosh:
    case ExprKind::Sinh:
      return unary(e->kind, substitute(e->lhs, var, value));
    default:
      return binary(e->kind, substitute(e->lhs, var, value),
                    substitute(e->rhs, var, value));
  }
}

bool node_depends_on(const ExprNode& n, std::string_view var) {
  switch (n.kind) {
    case ExprKind::Constant:
      return false;
    case ExprKind::Variable:
      return n.name == var;
    default:
      if (n.lhs && node_depends_on(*n.lhs, var)) return true;
      return n.rhs && node_depends_on(*n.rhs, var);
  }
}

int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Pow:
      return 3;
    default:
      return 4;
  }
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_node(const ExprNode& n, int parent_prec, std::string& out) {
  const int prec = precedence(n.kind);
  const bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (n.kind) {
    case ExprKind::Constant:
      if (n.value < 0.0) {
        out += '(';
        out += fmt_double(n.value);
        out += ')';
      } else {
        out += fmt_double(n.value);
      }
      break;
    case ExprKind::Variable:
      out += n.name;
      break;
    case ExprKind::Add:
      print_node(*n.lhs, prec, out);
      out += '+';
      print_node(*n.rhs, prec + 1, out);
      break;
    case ExprKind::Sub:
      print_node(*n.lhs, prec, out);
      out += '-';
      print_node(*n.rhs, prec + 1, out);
      break;
    case ExprKind::Mul:
      print_node(*n.lhs, prec, out);
      out += '*';
      print_node(*n.rhs, prec + 1, out);
      break;
    case ExprKind::Div:
      print_node(*n.lhs, prec, out);
      out += '/';
      print_node(*n.rhs, prec + 1, out);
      break;
    case ExprKind::Pow:
      print_node(*n.lhs, prec + 1, out);
      out += '^';
      if (n.exponent < 0) out += '-';
      out += std::to_string(n.exponent < 0 ? -n.exponent : n.exponent);
      break;
    case ExprKind::Exp:
    case ExprKind::Cosh:
    case ExprKind::Sinh:
      out += n.kind == ExprKind::Exp ? "exp" : (n.kind == ExprKind::Cosh ? "cosh" : "sinh");
      out += '(';
      print_node(*n.lhs, 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

void collect_denominators(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (!e) return;
  if (e->kind == ExprKind::Div) out.push_back(e->rhs);
  if (e->kind == ExprKind::Pow && e->exponent < 0) out.push_back(e->lhs);
  collect_denominators(e->lhs, out);
  collect_denominators(e->rhs, out);
}

}  // namespace

ProfileExpr::ProfileExpr(ExprPtr root, std::shared_ptr<const ProfileExpr> d1,
                         std::shared_ptr<const ProfileExpr> d2)
    : root_(std::move(root)),
      uses_parameter_(node_depends_on(*root_, "s")),
      deriv1_(std::move(d1)),
      deriv2_(std::move(d2)) {}

ProfileExpr::ProfileExpr(ExprPtr root)
    : root_(std::move(root)), uses_parameter_(node_depends_on(*root_, "s")) {
  // A finite eager chain: derivative(f, 2) and derivative(derivative(f, 1), 1)
  // are the same object, and nothing is mutated after construction.
  ExprPtr t1 = diff(root_);
  ExprPtr t2 = diff(t1);
  ExprPtr t3 = diff(t2);
  ExprPtr t4 = diff(t3);
  auto p4 = std::shared_ptr<const ProfileExpr>(new ProfileExpr(std::move(t4), nullptr, nullptr));
  auto p3 = std::shared_ptr<const ProfileExpr>(new ProfileExpr(std::move(t3), p4, nullptr));
  auto p2 = std::shared_ptr<const ProfileExpr>(new ProfileExpr(std::move(t2), p3, p4));
  auto p1 = std::shared_ptr<const ProfileExpr>(new ProfileExpr(std::move(t1), p2, p3));
  deriv1_ = std::move(p1);
  deriv2_ = std::move(p2);
}

ProfileExpr ProfileExpr::parse(std::string_view text) {
  return ProfileExpr(Parser(text).run());
}

double ProfileExpr::eval(double x) const {
  if (uses_parameter_)
    throw DomainError("family expression needs its parameter bound before evaluation");
  return eval_node(*root_, x, 0.0);
}

double ProfileExpr::eval(double x, double s) const { return eval_node(*root_, x, s); }

const ProfileExpr& ProfileExpr::derivative(int order) const {
  if (order == 1) {
    if (!deriv1_) throw std::invalid_argument("derivative order exceeds cache depth");
    return *deriv1_;
  }
  if (order == 2) {
    if (deriv2_) return *deriv2_;
    if (deriv1_) return deriv1_->derivative(1);
    throw std::invalid_argument("derivative order exceeds cache depth");
  }
  throw std::invalid_argument("derivative order must be 1 or 2");
}

ProfileExpr ProfileExpr::bind_parameter(double s) const {
  return ProfileExpr(substitute(root_, "s", s));
}

std::string ProfileExpr::to_string() const {
  std::string out;
  print_node(*root_, 0, out);
  return out;
}

bool ProfileExpr::depends_on(std::string_view var) const {
  return node_depends_on(*root_, var);
}

void ProfileExpr::certify_denominators(double lo, double hi, int grid_n,
                                       const std::vector<double>& extra) const {
  std::vector<ExprPtr> dens;
  collect_denominators(root_, dens);
  if (deriv1_) collect_denominators(deriv1_->root_, dens);
  if (deriv2_) collect_denominators(deriv2_->root_, dens);
  if (dens.empty()) return;
  if (grid_n < 2) throw std::invalid_argument("certificate grid needs >= 2 points");

  std::vector<double> points;
  points.reserve(static_cast<std::size_t>(grid_n) + 2 * extra.size());
  for (int i = 0; i < grid_n; ++i)
    points.push_back(lo + (hi - lo) * i / (grid_n - 1));
  for (double p : extra) {
    points.push_back(p);
    points.push_back(-p);
  }

  for (const ExprPtr& den : dens) {
    int sign = 0;
    for (double p : points) {
      const double v = eval_node(*den, p, 0.0);
      if (!(std::abs(v) > 1e-12)) {
        throw DomainError("denominator not certified nonzero near x = " + fmt_double(p));
      }
      const int s = v > 0.0 ? 1 : -1;
      if (sign == 0) sign = s;
      if (s != sign)
        throw DomainError("denominator changes sign on the window near x = " + fmt_double(p));
    }
  }
}

}  // namespace warpstring
