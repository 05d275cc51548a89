#ifndef NSL_DSL_HPP
#define NSL_DSL_HPP

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "nsl/jet.hpp"
#include "nsl/scalar.hpp"

namespace nsl {
namespace dsl {

// Coordinate slot names. Charts other than (q,p,x,y) rename slots at the
// catalog level; the grammar itself is chart-agnostic.
extern const std::array<std::string, 4> kDefaultCoords;

enum class Func { Exp, Ln, Sin, Cos };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Number, Imaginary, Coordinate, Parameter, Neg, Add, Sub, Mul, Div, Pow, Call };

  Kind kind;
  double number = 0.0;
  int coord = -1;            // Coordinate
  std::string name;          // Parameter
  int exponent = 0;          // Pow
  Func fn = Func::Exp;       // Call
  ExprPtr a, b;
  std::size_t begin = 0, end = 0;  // source span [begin, end)
};

ExprPtr number(double v);
ExprPtr imaginary();
ExprPtr coordinate(int slot);
ExprPtr parameter(const std::string& name);
ExprPtr neg(ExprPtr a);
ExprPtr add(ExprPtr a, ExprPtr b);
ExprPtr sub(ExprPtr a, ExprPtr b);
ExprPtr mul(ExprPtr a, ExprPtr b);
ExprPtr div(ExprPtr a, ExprPtr b);
ExprPtr pow_int(ExprPtr a, int n);
ExprPtr call(Func f, ExprPtr a);

// Recursive-descent parser for
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := '-' factor | base ('^' int)?
//   base   := number | 'i' | ident | '(' expr ')' | func '(' expr ')'
// '^' binds tighter than unary minus and is non-associative (a^2^3 rejected);
// exponents are integer literals, optionally signed and parenthesized.
// 'i' is a literal only in complex mode; in real mode it is a syntax error.
ExprPtr parse(const std::string& source, Mode mode,
              const std::array<std::string, 4>& coords = kDefaultCoords);

std::string pretty_print(const ExprPtr& e,
                         const std::array<std::string, 4>& coords = kDefaultCoords);

// Structural equality (spans ignored).
bool equal(const ExprPtr& a, const ExprPtr& b);

// Symbolic d/d(coordinate slot).
ExprPtr differentiate(const ExprPtr& e, int slot);
// Symbolic d/d(parameter name); used for implicit functions, where the
// unknown parses as a parameter of the defining equation.
ExprPtr differentiate_param(const ExprPtr& e, const std::string& name);

// Names of parameters appearing in the tree.
std::vector<std::string> parameter_names(const ExprPtr& e);
// Coordinate slots appearing in the tree (bitmask over 0..3).
unsigned coordinate_mask(const ExprPtr& e);

using Params = std::map<std::string, Cplx>;
using JetEnv = std::array<Jet, 4>;
using JetParams = std::map<std::string, Jet>;

// Evaluate with explicit jets bound to the coordinate slots. Used both for
// plain evaluation (env = seeds) and for composite fields where a slot is
// itself a derived jet. jet_params bind names to jets and shadow params.
Jet eval_jet_env(const ExprPtr& e, const JetEnv& env, const Params& params, Mode mode,
                 const JetParams* jet_params = nullptr);

// Direct value evaluation; shares no code with the jet path, which makes it
// usable as an independent oracle.
Cplx eval_value(const ExprPtr& e, const Point4& point, const Params& params, Mode mode);

}  // namespace dsl

// A parsed expression with its parameter bindings; evaluable to an order-3 jet.
struct ScalarField {
  dsl::ExprPtr expr;
  dsl::Params params;
  Mode mode = Mode::Complex;
  std::array<std::string, 4> coords = dsl::kDefaultCoords;

  ScalarField() = default;
  ScalarField(const std::string& source, Mode m, dsl::Params p = {},
              const std::array<std::string, 4>& names = dsl::kDefaultCoords);

  Jet eval_jet(const Point4& point) const;
  Cplx eval_value(const Point4& point) const;
};

}  // namespace nsl

#endif
