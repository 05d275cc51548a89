#include "nsl/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "nsl/errors.hpp"

namespace nsl {
namespace dsl {

const std::array<std::string, 4> kDefaultCoords = {"q", "p", "x", "y"};

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

namespace {

Expr node(Expr::Kind k) {
  Expr e;
  e.kind = k;
  return e;
}

}  // namespace

ExprPtr number(double v) {
  Expr e = node(Expr::Kind::Number);
  e.number = v;
  return make(std::move(e));
}
ExprPtr imaginary() { return make(node(Expr::Kind::Imaginary)); }
ExprPtr coordinate(int slot) {
  Expr e = node(Expr::Kind::Coordinate);
  e.coord = slot;
  return make(std::move(e));
}
ExprPtr parameter(const std::string& n) {
  Expr e = node(Expr::Kind::Parameter);
  e.name = n;
  return make(std::move(e));
}
ExprPtr neg(ExprPtr a) {
  Expr e = node(Expr::Kind::Neg);
  e.a = std::move(a);
  return make(std::move(e));
}
ExprPtr add(ExprPtr a, ExprPtr b) {
  Expr e = node(Expr::Kind::Add);
  e.a = std::move(a); e.b = std::move(b);
  return make(std::move(e));
}
ExprPtr sub(ExprPtr a, ExprPtr b) {
  Expr e = node(Expr::Kind::Sub);
  e.a = std::move(a); e.b = std::move(b);
  return make(std::move(e));
}
ExprPtr mul(ExprPtr a, ExprPtr b) {
  Expr e = node(Expr::Kind::Mul);
  e.a = std::move(a); e.b = std::move(b);
  return make(std::move(e));
}
ExprPtr div(ExprPtr a, ExprPtr b) {
  Expr e = node(Expr::Kind::Div);
  e.a = std::move(a); e.b = std::move(b);
  return make(std::move(e));
}
ExprPtr pow_int(ExprPtr a, int n) {
  Expr e = node(Expr::Kind::Pow);
  e.a = std::move(a); e.exponent = n;
  return make(std::move(e));
}
ExprPtr call(Func f, ExprPtr a) {
  Expr e = node(Expr::Kind::Call);
  e.fn = f; e.a = std::move(a);
  return make(std::move(e));
}

namespace {

struct Parser {
  const std::string& src;
  Mode mode;
  const std::array<std::string, 4>& coords;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg, std::size_t at) {
    throw ParseError(ParseError::Kind::Syntax, msg, at);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) { ++pos; return true; }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  ExprPtr spanned(ExprPtr e, std::size_t b, std::size_t en) {
    Expr copy = *e;
    copy.begin = b;
    copy.end = en;
    return make(std::move(copy));
  }

  ExprPtr parse_expr() {
    skip_ws();
    std::size_t b = pos;
    ExprPtr lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        ExprPtr rhs = parse_term();
        lhs = spanned(add(lhs, rhs), b, pos);
      } else if (eat('-')) {
        ExprPtr rhs = parse_term();
        lhs = spanned(sub(lhs, rhs), b, pos);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_term() {
    skip_ws();
    std::size_t b = pos;
    ExprPtr lhs = parse_factor();
    for (;;) {
      if (eat('*')) {
        ExprPtr rhs = parse_factor();
        lhs = spanned(mul(lhs, rhs), b, pos);
      } else if (eat('/')) {
        ExprPtr rhs = parse_factor();
        lhs = spanned(div(lhs, rhs), b, pos);
      } else {
        return lhs;
      }
    }
  }

  ExprPtr parse_factor() {
    skip_ws();
    std::size_t b = pos;
    if (eat('-')) {
      ExprPtr inner = parse_factor();
      return spanned(neg(inner), b, pos);
    }
    ExprPtr base = parse_base();
    skip_ws();
    if (pos < src.size() && src[pos] == '^') {
      ++pos;
      const int n = parse_int_exponent();
      skip_ws();
      if (pos < src.size() && src[pos] == '^') {
        fail("'^' is non-associative; parenthesize", pos);
      }
      return spanned(pow_int(base, n), b, pos);
    }
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    std::size_t at = pos;
    bool paren = eat('(');
    skip_ws();
    bool negative = false;
    if (eat('-')) negative = true;
    skip_ws();
    std::size_t d0 = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos == d0) fail("expected integer exponent", at);
    // a decimal point or '/' inside the exponent is a non-integer exponent
    if (pos < src.size() && (src[pos] == '.' || (paren && src[pos] == '/'))) {
      throw ParseError(ParseError::Kind::NonIntegerExponent,
                       "exponent must be an integer literal", at);
    }
    int value = 0;
    std::from_chars(src.data() + d0, src.data() + pos, value);
    if (paren) {
      skip_ws();
      if (!eat(')')) {
        if (pos < src.size() && src[pos] == '/') {
          throw ParseError(ParseError::Kind::NonIntegerExponent,
                           "exponent must be an integer literal", at);
        }
        fail("expected ')' after exponent", pos);
      }
    }
    return negative ? -value : value;
  }

  ExprPtr parse_base() {
    skip_ws();
    std::size_t b = pos;
    if (pos >= src.size()) fail("unexpected end of input", pos);
    const char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (c == '(') {
      ++pos;
      ExprPtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'", pos);
      return spanned(inner, b, pos);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t i0 = pos;
      while (pos < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
        ++pos;
      }
      const std::string id = src.substr(i0, pos - i0);
      if (id == "i") {
        if (mode == Mode::Real) fail("'i' is not available in real mode", i0);
        return spanned(imaginary(), b, pos);
      }
      if (peek() == '(') {
        Func f;
        if (id == "exp") f = Func::Exp;
        else if (id == "ln") f = Func::Ln;
        else if (id == "sin") f = Func::Sin;
        else if (id == "cos") f = Func::Cos;
        else throw ParseError(ParseError::Kind::UnknownFunction, "unknown function '" + id + "'", i0);
        eat('(');
        ExprPtr arg = parse_expr();
        if (!eat(')')) fail("expected ')'", pos);
        return spanned(call(f, arg), b, pos);
      }
      for (int k = 0; k < 4; ++k) {
        if (id == coords[k]) return spanned(coordinate(k), b, pos);
      }
      return spanned(parameter(id), b, pos);
    }
    fail(std::string("unexpected character '") + c + "'", pos);
  }

  ExprPtr parse_number() {
    std::size_t b = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      std::size_t save = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
      } else {
        pos = save;  // 'e' was an identifier start, not an exponent
      }
    }
    double v = 0.0;
    const auto res = std::from_chars(src.data() + b, src.data() + pos, v);
    if (res.ec != std::errc() || res.ptr != src.data() + pos) {
      fail("malformed number", b);
    }
    return spanned(number(v), b, pos);
  }
};

}  // namespace

ExprPtr parse(const std::string& source, Mode mode, const std::array<std::string, 4>& coords) {
  Parser p{source, mode, coords};
  ExprPtr e = p.parse_expr();
  p.skip_ws();
  if (p.pos != source.size()) p.fail("trailing input", p.pos);
  return e;
}

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub: return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return 2;
    case Expr::Kind::Neg: return 3;
    case Expr::Kind::Pow: return 4;
    default: return 5;
  }
}

void print(const ExprPtr& e, std::ostringstream& out,
           const std::array<std::string, 4>& coords, int parent_prec, bool rhs) {
  const int prec = precedence(*e);
  const bool need_parens =
      prec < parent_prec ||
      (prec == parent_prec && rhs &&
       (e->kind == Expr::Kind::Add || e->kind == Expr::Kind::Sub ||
        e->kind == Expr::Kind::Mul || e->kind == Expr::Kind::Div));
  if (need_parens) out << '(';
  switch (e->kind) {
    case Expr::Kind::Number: {
      std::ostringstream num;
      num.precision(17);
      num << e->number;
      out << num.str();
      break;
    }
    case Expr::Kind::Imaginary: out << 'i'; break;
    case Expr::Kind::Coordinate: out << coords[e->coord]; break;
    case Expr::Kind::Parameter: out << e->name; break;
    case Expr::Kind::Neg:
      out << '-';
      print(e->a, out, coords, 3, false);
      break;
    case Expr::Kind::Add:
      print(e->a, out, coords, 1, false);
      out << " + ";
      print(e->b, out, coords, 1, true);
      break;
    case Expr::Kind::Sub:
      print(e->a, out, coords, 1, false);
      out << " - ";
      print(e->b, out, coords, 1, true);
      break;
    case Expr::Kind::Mul:
      print(e->a, out, coords, 2, false);
      out << "*";
      print(e->b, out, coords, 2, true);
      break;
    case Expr::Kind::Div:
      print(e->a, out, coords, 2, false);
      out << "/";
      print(e->b, out, coords, 2, true);
      break;
    case Expr::Kind::Pow:
      print(e->a, out, coords, 5, false);
      out << '^';
      if (e->exponent < 0) out << '(' << e->exponent << ')';
      else out << e->exponent;
      break;
    case Expr::Kind::Call:
      switch (e->fn) {
        case Func::Exp: out << "exp("; break;
        case Func::Ln: out << "ln("; break;
        case Func::Sin: out << "sin("; break;
        case Func::Cos: out << "cos("; break;
      }
      print(e->a, out, coords, 0, false);
      out << ')';
      break;
  }
  if (need_parens) out << ')';
}

}  // namespace

std::string pretty_print(const ExprPtr& e, const std::array<std::string, 4>& coords) {
  std::ostringstream out;
  print(e, out, coords, 0, false);
  return out.str();
}

bool equal(const ExprPtr& a, const ExprPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Number: return a->number == b->number;
    case Expr::Kind::Imaginary: return true;
    case Expr::Kind::Coordinate: return a->coord == b->coord;
    case Expr::Kind::Parameter: return a->name == b->name;
    case Expr::Kind::Neg: return equal(a->a, b->a);
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div: return equal(a->a, b->a) && equal(a->b, b->b);
    case Expr::Kind::Pow: return a->exponent == b->exponent && equal(a->a, b->a);
    case Expr::Kind::Call: return a->fn == b->fn && equal(a->a, b->a);
  }
  return false;
}

namespace {

ExprPtr diff_impl(const ExprPtr& e, int slot, const std::string* pname);

}  // namespace

ExprPtr differentiate(const ExprPtr& e, int slot) { return diff_impl(e, slot, nullptr); }

ExprPtr differentiate_param(const ExprPtr& e, const std::string& name) {
  return diff_impl(e, -1, &name);
}

namespace {

ExprPtr diff_impl(const ExprPtr& e, int slot, const std::string* pname) {
  switch (e->kind) {
    case Expr::Kind::Number:
    case Expr::Kind::Imaginary: return number(0.0);
    case Expr::Kind::Parameter: return number(pname && e->name == *pname ? 1.0 : 0.0);
    case Expr::Kind::Coordinate: return number(!pname && e->coord == slot ? 1.0 : 0.0);
    case Expr::Kind::Neg: return neg(diff_impl(e->a, slot, pname));
    case Expr::Kind::Add: return add(diff_impl(e->a, slot, pname), diff_impl(e->b, slot, pname));
    case Expr::Kind::Sub: return sub(diff_impl(e->a, slot, pname), diff_impl(e->b, slot, pname));
    case Expr::Kind::Mul:
      return add(mul(diff_impl(e->a, slot, pname), e->b), mul(e->a, diff_impl(e->b, slot, pname)));
    case Expr::Kind::Div:
      return div(sub(mul(diff_impl(e->a, slot, pname), e->b), mul(e->a, diff_impl(e->b, slot, pname))),
                 pow_int(e->b, 2));
    case Expr::Kind::Pow:
      if (e->exponent == 0) return number(0.0);
      return mul(number(double(e->exponent)),
                 mul(pow_int(e->a, e->exponent - 1), diff_impl(e->a, slot, pname)));
    case Expr::Kind::Call: {
      ExprPtr da = diff_impl(e->a, slot, pname);
      switch (e->fn) {
        case Func::Exp: return mul(call(Func::Exp, e->a), da);
        case Func::Ln: return div(da, e->a);
        case Func::Sin: return mul(call(Func::Cos, e->a), da);
        case Func::Cos: return neg(mul(call(Func::Sin, e->a), da));
      }
    }
  }
  return number(0.0);
}

}  // namespace

std::vector<std::string> parameter_names(const ExprPtr& e) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const ExprPtr& n) -> void {
    if (!n) return;
    if (n->kind == Expr::Kind::Parameter) {
      bool seen = false;
      for (const auto& s : out) seen = seen || s == n->name;
      if (!seen) out.push_back(n->name);
    }
    self(self, n->a);
    self(self, n->b);
  };
  walk(walk, e);
  return out;
}

unsigned coordinate_mask(const ExprPtr& e) {
  unsigned mask = 0;
  auto walk = [&](auto&& self, const ExprPtr& n) -> void {
    if (!n) return;
    if (n->kind == Expr::Kind::Coordinate) mask |= 1u << n->coord;
    self(self, n->a);
    self(self, n->b);
  };
  walk(walk, e);
  return mask;
}

Jet eval_jet_env(const ExprPtr& e, const JetEnv& env, const Params& params, Mode mode,
                 const JetParams* jet_params) {
  switch (e->kind) {
    case Expr::Kind::Number: return Jet::constant(Cplx(e->number, 0), mode);
    case Expr::Kind::Imaginary: return Jet::constant(Cplx(0, 1), Mode::Complex);
    case Expr::Kind::Coordinate: return env[e->coord];
    case Expr::Kind::Parameter: {
      if (jet_params) {
        auto jt = jet_params->find(e->name);
        if (jt != jet_params->end()) return jt->second;
      }
      auto it = params.find(e->name);
      if (it == params.end()) throw UnboundSlot("unbound parameter '" + e->name + "'");
      return Jet::constant(it->second, mode);
    }
    case Expr::Kind::Neg: return jet_neg(eval_jet_env(e->a, env, params, mode, jet_params));
    case Expr::Kind::Add:
      return jet_add(eval_jet_env(e->a, env, params, mode, jet_params),
                     eval_jet_env(e->b, env, params, mode, jet_params));
    case Expr::Kind::Sub:
      return jet_sub(eval_jet_env(e->a, env, params, mode, jet_params),
                     eval_jet_env(e->b, env, params, mode, jet_params));
    case Expr::Kind::Mul:
      return jet_mul(eval_jet_env(e->a, env, params, mode, jet_params),
                     eval_jet_env(e->b, env, params, mode, jet_params));
    case Expr::Kind::Div:
      return jet_div(eval_jet_env(e->a, env, params, mode, jet_params),
                     eval_jet_env(e->b, env, params, mode, jet_params),
                     e->begin, e->end);
    case Expr::Kind::Pow:
      return jet_pow_int(eval_jet_env(e->a, env, params, mode, jet_params), e->exponent,
                         e->begin, e->end);
    case Expr::Kind::Call: {
      Jet a = eval_jet_env(e->a, env, params, mode, jet_params);
      switch (e->fn) {
        case Func::Exp: return jet_exp(a);
        case Func::Ln: return jet_log(a, e->begin, e->end);
        case Func::Sin: return jet_sin(a);
        case Func::Cos: return jet_cos(a);
      }
    }
  }
  throw std::logic_error("eval_jet_env: unreachable");
}

Cplx eval_value(const ExprPtr& e, const Point4& point, const Params& params, Mode mode) {
  switch (e->kind) {
    case Expr::Kind::Number: return Cplx(e->number, 0);
    case Expr::Kind::Imaginary: return Cplx(0, 1);
    case Expr::Kind::Coordinate: return point[e->coord];
    case Expr::Kind::Parameter: {
      auto it = params.find(e->name);
      if (it == params.end()) throw UnboundSlot("unbound parameter '" + e->name + "'");
      return it->second;
    }
    case Expr::Kind::Neg: return -eval_value(e->a, point, params, mode);
    case Expr::Kind::Add:
      return eval_value(e->a, point, params, mode) + eval_value(e->b, point, params, mode);
    case Expr::Kind::Sub:
      return eval_value(e->a, point, params, mode) - eval_value(e->b, point, params, mode);
    case Expr::Kind::Mul:
      return cx_mul(eval_value(e->a, point, params, mode), eval_value(e->b, point, params, mode));
    case Expr::Kind::Div:
      return cx_div(eval_value(e->a, point, params, mode), eval_value(e->b, point, params, mode),
                    e->begin, e->end);
    case Expr::Kind::Pow: {
      Cplx base = eval_value(e->a, point, params, mode);
      int n = e->exponent;
      if (n == 0) return Cplx(1, 0);
      const bool negp = n < 0;
      unsigned m = negp ? unsigned(-(long long)n) : unsigned(n);
      Cplx acc(1, 0), b2 = base;
      while (m > 0) {
        if (m & 1u) acc = cx_mul(acc, b2);
        m >>= 1;
        if (m > 0) b2 = cx_mul(b2, b2);
      }
      return negp ? cx_div(Cplx(1, 0), acc, e->begin, e->end) : acc;
    }
    case Expr::Kind::Call: {
      Cplx a = eval_value(e->a, point, params, mode);
      switch (e->fn) {
        case Func::Exp: return cx_exp(a);
        case Func::Ln: return cx_log(a, mode, e->begin, e->end);
        case Func::Sin: return cx_sin(a);
        case Func::Cos: return cx_cos(a);
      }
    }
  }
  throw std::logic_error("eval_value: unreachable");
}

}  // namespace dsl

ScalarField::ScalarField(const std::string& source, Mode m, dsl::Params p,
                         const std::array<std::string, 4>& names)
    : expr(dsl::parse(source, m, names)), params(std::move(p)), mode(m), coords(names) {
  for (const auto& name : dsl::parameter_names(expr)) {
    if (params.find(name) == params.end()) {
      throw UnboundSlot("parameter '" + name + "' is not bound");
    }
  }
}

Jet ScalarField::eval_jet(const Point4& point) const {
  dsl::JetEnv env = {Jet::seed(point, 0, mode), Jet::seed(point, 1, mode),
                     Jet::seed(point, 2, mode), Jet::seed(point, 3, mode)};
  Jet j = dsl::eval_jet_env(expr, env, params, mode);
  if (!j.all_finite()) {
    throw EvalError(EvalError::Kind::NonFinite, "expression evaluated to a non-finite jet");
  }
  return j;
}

Cplx ScalarField::eval_value(const Point4& point) const {
  Cplx v = dsl::eval_value(expr, point, params, mode);
  if (!is_finite(v)) {
    throw EvalError(EvalError::Kind::NonFinite, "expression evaluated to a non-finite value");
  }
  return v;
}

}  // namespace nsl
