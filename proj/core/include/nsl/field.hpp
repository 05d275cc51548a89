#ifndef NSL_FIELD_HPP
#define NSL_FIELD_HPP

#include <functional>
#include <string>

#include "nsl/dsl.hpp"

namespace nsl {

// A scalar field over a 4-coordinate chart, evaluated as an order-3 jet.
// DSL expressions, closed-form curvature coefficients and implicitly-defined
// functions all fit behind this one signature.
using FieldFn = std::function<Jet(const Point4&)>;

FieldFn field_of(const ScalarField& f);
FieldFn constant_field(Cplx v, Mode mode);
FieldFn coordinate_field(int slot, Mode mode);

// The field z(chart) defined implicitly by lhs(chart) = rhs(chart, z), where
// both sides are DSL expressions over (slot coordinates..., z as `zslot`).
//
// Per point: a damped Newton solve for the value (bisection fallback in real
// mode when a bracket appears), then Newton iteration in jet arithmetic to
// lift the solution to an order-3 jet.
struct ImplicitField {
  dsl::ExprPtr equation;     // F(coords, z) whose root defines z
  dsl::ExprPtr equation_dz;  // dF/dz
  dsl::Params params;
  Mode mode;
  Cplx initial_guess{0.0, 0.0};
  double tol = 1e-13;
  int max_iter = 60;

  Jet eval(const Point4& point) const;
  FieldFn as_field() const;
};

// Convenience: build F = lhs - rhs from sources over a named 4-slot chart in
// which one name (zname) denotes the unknown.
ImplicitField make_implicit(const std::string& lhs_minus_rhs, const std::string& zname,
                            const std::array<std::string, 4>& chart, Mode mode,
                            dsl::Params params = {});

}  // namespace nsl

#endif
