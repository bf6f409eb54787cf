#include "eikonal/scalarfun.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "eikonal/error.hpp"

namespace eik {
namespace {

using Kind = ExprNode::Kind;

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  std::vector<ExprNode> nodes;

  int parse_all() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError(pos_, "empty expression");
    const int root = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError(pos_, "unexpected '" + std::string(1, src_[pos_]) + "'");
    return root;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ == src_.size()) throw SyntaxError(pos_, std::string("expected '") + c + "' before end of input");
      throw SyntaxError(pos_, std::string("expected '") + c + "', found '" + src_[pos_] + "'");
    }
  }

  int push(Kind kind, int lhs = -1, int rhs = -1, double number = 0.0) {
    nodes.push_back(ExprNode{kind, number, lhs, rhs});
    return static_cast<int>(nodes.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (accept('+')) {
        lhs = push(Kind::Add, lhs, parse_term());
      } else if (accept('-')) {
        lhs = push(Kind::Sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = push(Kind::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = push(Kind::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (accept('-')) return push(Kind::Neg, parse_unary());
    if (accept('+')) return parse_unary();
    return parse_power();
  }

  int parse_power() {
    const int base = parse_atom();
    if (accept('^')) return push(Kind::Pow, base, parse_unary());
    return base;
  }

  int parse_atom() {
    skip_ws();
    if (pos_ == src_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      const int inner = parse_expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw SyntaxError(pos_, std::string("unexpected '") + c + "'");
  }

  int parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        ++pos_;
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) throw SyntaxError(start, "malformed number");
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (digits() == 0) throw SyntaxError(pos_, "malformed exponent");
    }
    double value = 0.0;
    const auto [end, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc{} || end != src_.data() + pos_ || !std::isfinite(value)) {
      throw SyntaxError(start, "number out of range");
    }
    return push(Kind::Number, -1, -1, value);
  }

  int parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = src_.substr(start, pos_ - start);
    if (name == "z") return push(Kind::Variable);

    Kind fn;
    if (name == "sin") {
      fn = Kind::Sin;
    } else if (name == "cos") {
      fn = Kind::Cos;
    } else if (name == "exp") {
      fn = Kind::Exp;
    } else if (name == "log") {
      fn = Kind::Log;
    } else if (name == "sqrt") {
      fn = Kind::Sqrt;
    } else {
      throw UnknownSymbol(start, std::string(name));
    }
    expect('(');
    const int arg = parse_expr();
    expect(')');
    return push(fn, arg);
  }
};

[[noreturn]] void domain_error(const char* what, double at) {
  fail(ErrorCode::DomainError, std::string(what) + " at argument " + format_real(at));
}

bool is_integer(double c) { return std::nearbyint(c) == c; }

Jet2 pow_constant_exponent(const Jet2& a, double c) {
  if (c == 0.0) return Jet2::constant(1.0);
  if (c == 1.0) return a;
  if (a.val < 0.0 && !is_integer(c)) domain_error("non-integer power of negative base", a.val);
  if (a.val == 0.0 && c < 0.0) domain_error("negative power of zero", a.val);
  const double f = std::pow(a.val, c);
  const double df = c * std::pow(a.val, c - 1.0);
  const double d2f = (c == 2.0) ? 2.0 : c * (c - 1.0) * std::pow(a.val, c - 2.0);
  return chain(a, f, df, d2f);
}

Jet2 eval_node(const std::vector<ExprNode>& nodes, int index, const Jet2& z) {
  const ExprNode& n = nodes[static_cast<std::size_t>(index)];
  Jet2 out;
  switch (n.kind) {
    case Kind::Number:
      return Jet2::constant(n.number);
    case Kind::Variable:
      return z;
    case Kind::Neg:
      return -eval_node(nodes, n.lhs, z);
    case Kind::Add:
      out = eval_node(nodes, n.lhs, z) + eval_node(nodes, n.rhs, z);
      break;
    case Kind::Sub:
      out = eval_node(nodes, n.lhs, z) - eval_node(nodes, n.rhs, z);
      break;
    case Kind::Mul:
      out = eval_node(nodes, n.lhs, z) * eval_node(nodes, n.rhs, z);
      break;
    case Kind::Div: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      const Jet2 b = eval_node(nodes, n.rhs, z);
      if (b.val == 0.0) domain_error("division by zero", z.val);
      out = a / b;
      break;
    }
    case Kind::Pow: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      const Jet2 b = eval_node(nodes, n.rhs, z);
      if (b.d1 == 0.0 && b.d2 == 0.0) {
        out = pow_constant_exponent(a, b.val);
      } else {
        if (a.val <= 0.0) domain_error("variable exponent of non-positive base", a.val);
        const double la = std::log(a.val);
        const Jet2 log_a = chain(a, la, 1.0 / a.val, -1.0 / (a.val * a.val));
        const Jet2 e = b * log_a;
        const double ex = std::exp(e.val);
        out = chain(e, ex, ex, ex);
      }
      break;
    }
    case Kind::Sin: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      const double s = std::sin(a.val);
      out = chain(a, s, std::cos(a.val), -s);
      break;
    }
    case Kind::Cos: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      const double c = std::cos(a.val);
      out = chain(a, c, -std::sin(a.val), -c);
      break;
    }
    case Kind::Exp: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      const double e = std::exp(a.val);
      out = chain(a, e, e, e);
      break;
    }
    case Kind::Log: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      if (a.val <= 0.0) domain_error("log of non-positive value", a.val);
      out = chain(a, std::log(a.val), 1.0 / a.val, -1.0 / (a.val * a.val));
      break;
    }
    case Kind::Sqrt: {
      const Jet2 a = eval_node(nodes, n.lhs, z);
      if (a.val < 0.0) domain_error("sqrt of negative value", a.val);
      if (a.val == 0.0) {
        if (a.d1 != 0.0 || a.d2 != 0.0) domain_error("sqrt is not differentiable", a.val);
        return Jet2::constant(0.0);
      }
      const double s = std::sqrt(a.val);
      out = chain(a, s, 0.5 / s, -0.25 / (s * a.val));
      break;
    }
  }
  if (!out.finite()) domain_error("non-finite result", z.val);
  return out;
}

void print_node(const std::vector<ExprNode>& nodes, int index, std::string& out) {
  const ExprNode& n = nodes[static_cast<std::size_t>(index)];
  auto binary = [&](char op) {
    out += '(';
    print_node(nodes, n.lhs, out);
    out += ' ';
    out += op;
    out += ' ';
    print_node(nodes, n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    print_node(nodes, n.lhs, out);
    out += ')';
  };
  switch (n.kind) {
    case Kind::Number: out += format_real(n.number); break;
    case Kind::Variable: out += 'z'; break;
    case Kind::Neg:
      out += "(-";
      print_node(nodes, n.lhs, out);
      out += ')';
      break;
    case Kind::Add: binary('+'); break;
    case Kind::Sub: binary('-'); break;
    case Kind::Mul: binary('*'); break;
    case Kind::Div: binary('/'); break;
    case Kind::Pow: binary('^'); break;
    case Kind::Sin: call("sin"); break;
    case Kind::Cos: call("cos"); break;
    case Kind::Exp: call("exp"); break;
    case Kind::Log: call("log"); break;
    case Kind::Sqrt: call("sqrt"); break;
  }
}

}  // namespace

AnalyticFunction AnalyticFunction::parse(std::string_view source) {
  Parser parser(source);
  const int root = parser.parse_all();
  return AnalyticFunction(std::string(source),
                          std::make_shared<const std::vector<ExprNode>>(std::move(parser.nodes)), root);
}

std::string AnalyticFunction::print() const {
  std::string out;
  print_node(*nodes_, root_, out);
  return out;
}

Jet2 AnalyticFunction::eval_jet2(double z) const {
  if (!std::isfinite(z)) domain_error("non-finite argument", z);
  return eval_node(*nodes_, root_, Jet2::variable(z));
}

std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string polynomial_expression(std::span<const double> coefficients) {
  if (coefficients.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    if (i > 0) out += " + ";
    out += '(' + format_real(coefficients[i]) + ')';
    if (i == 1) out += "*z";
    if (i > 1) out += "*z^" + std::to_string(i);
  }
  return out;
}

}  // namespace eik
