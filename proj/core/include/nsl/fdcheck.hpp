#ifndef NSL_FDCHECK_HPP
#define NSL_FDCHECK_HPP

#include <functional>

#include "nsl/dsl.hpp"

namespace nsl {

// Anti-regression oracle for the jet engine: Richardson-extrapolated central
// differences on direct value evaluation.
//
// The reported error is |fd - jet| / (1 + |jet|): mixed partials of random
// expressions routinely vanish, where a pure ratio is meaningless.
struct FdCheckResult {
  Cplx jet_value;
  Cplx fd_value;
  double rel_error;
};

using ValueFn = std::function<Cplx(const Point4&)>;

// Central-difference estimate of d^alpha f at `point` with per-axis step h,
// Richardson-extrapolated between h and h/2.
Cplx fd_partial(const ValueFn& f, const Point4& point, const MultiIndex& alpha, double h);

// Compare against partial() of the field's jet. `h` is the base step for
// first and second derivatives; third derivatives use a coarser step, below
// which double-precision central differences cannot reach 1e-6.
FdCheckResult finite_diff_check(const ScalarField& f, const Point4& point,
                                const MultiIndex& alpha, double h = 1e-4);

}  // namespace nsl

#endif
