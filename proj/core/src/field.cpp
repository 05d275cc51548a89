#include "nsl/field.hpp"

#include <cmath>

#include "nsl/errors.hpp"

namespace nsl {

FieldFn field_of(const ScalarField& f) {
  return [f](const Point4& p) { return f.eval_jet(p); };
}

FieldFn constant_field(Cplx v, Mode mode) {
  return [v, mode](const Point4&) { return Jet::constant(v, mode); };
}

FieldFn coordinate_field(int slot, Mode mode) {
  return [slot, mode](const Point4& p) { return Jet::seed(p, slot, mode); };
}

Jet ImplicitField::eval(const Point4& point) const {
  // Value-level Newton for F(point, z) = 0.
  dsl::Params env_params = params;
  auto F = [&](Cplx z) {
    env_params["__z"] = z;
    return dsl::eval_value(equation, point, env_params, mode);
  };
  auto Fz = [&](Cplx z) {
    env_params["__z"] = z;
    return dsl::eval_value(equation_dz, point, env_params, mode);
  };

  Cplx z = initial_guess;
  Cplx fz = F(z);
  double best = std::abs(fz);
  bool converged = best <= tol;
  // Bracket endpoints for the real-mode fallback.
  double blo = 0, bhi = 0, flo = 0, fhi = 0;
  bool have_bracket = false;

  for (int it = 0; it < max_iter && !converged; ++it) {
    const Cplx d = Fz(z);
    if (!(abs2(d) > kDivGuard)) break;
    Cplx step = cx_div(fz, d);
    // Damped update: halve until the residual does not grow.
    double lambda = 1.0;
    Cplx znew = z;
    Cplx fnew = fz;
    for (int halving = 0; halving < 20; ++halving) {
      znew = z - lambda * step;
      fnew = F(znew);
      if (std::abs(fnew) < best || halving == 19) break;
      lambda *= 0.5;
    }
    if (mode == Mode::Real) {
      if (fz.real() * fnew.real() < 0) {
        blo = z.real();
        bhi = znew.real();
        flo = fz.real();
        fhi = fnew.real();
        have_bracket = true;
      }
    }
    z = znew;
    fz = fnew;
    best = std::abs(fz);
    converged = best <= tol * (1.0 + std::abs(z));
  }

  if (!converged && mode == Mode::Real && have_bracket) {
    for (int it = 0; it < 200 && !converged; ++it) {
      const double mid = 0.5 * (blo + bhi);
      const double fm = F(Cplx(mid, 0)).real();
      if (fm == 0 || std::abs(fm) <= tol) {
        z = Cplx(mid, 0);
        converged = true;
        break;
      }
      if (flo * fm < 0) { bhi = mid; fhi = fm; } else { blo = mid; flo = fm; }
      (void)fhi;
    }
  }
  if (!converged) {
    throw EvalError(EvalError::Kind::NonFinite, "implicit solve did not converge");
  }

  // Lift to an order-3 jet: Newton in jet arithmetic from the exact value.
  dsl::JetEnv env = {Jet::seed(point, 0, mode), Jet::seed(point, 1, mode),
                     Jet::seed(point, 2, mode), Jet::seed(point, 3, mode)};
  Jet zj = Jet::constant(z, mode);
  for (int it = 0; it < 4; ++it) {
    dsl::JetParams jp{{"__z", zj}};
    const Jet f = dsl::eval_jet_env(equation, env, params, mode, &jp);
    const Jet fd = dsl::eval_jet_env(equation_dz, env, params, mode, &jp);
    zj = jet_sub(zj, jet_div(f, fd));
  }
  if (!zj.all_finite()) {
    throw EvalError(EvalError::Kind::NonFinite, "implicit jet lift produced a non-finite jet");
  }
  return zj;
}

FieldFn ImplicitField::as_field() const {
  ImplicitField copy = *this;
  return [copy](const Point4& p) { return copy.eval(p); };
}

ImplicitField make_implicit(const std::string& lhs_minus_rhs, const std::string& zname,
                            const std::array<std::string, 4>& chart, Mode mode,
                            dsl::Params params) {
  ImplicitField out;
  dsl::ExprPtr raw = dsl::parse(lhs_minus_rhs, mode, chart);
  // Rename the unknown to the internal parameter "__z".
  auto rename = [&](auto&& self, const dsl::ExprPtr& e) -> dsl::ExprPtr {
    using K = dsl::Expr::Kind;
    if (e->kind == K::Parameter && e->name == zname) return dsl::parameter("__z");
    dsl::Expr copy = *e;
    if (copy.a) copy.a = self(self, copy.a);
    if (copy.b) copy.b = self(self, copy.b);
    return std::make_shared<const dsl::Expr>(std::move(copy));
  };
  out.equation = rename(rename, raw);
  out.equation_dz = dsl::differentiate_param(out.equation, "__z");
  out.params = std::move(params);
  out.mode = mode;
  return out;
}

}  // namespace nsl
