#ifndef NSL_JET_HPP
#define NSL_JET_HPP

#include <array>

#include "nsl/multiindex.hpp"
#include "nsl/scalar.hpp"

namespace nsl {

// Truncated Taylor expansion of a scalar function of (q,p,x,y) at a point,
// to total derivative order 3. Coefficients are stored divided by alpha!
// (Taylor convention), so the product rule is a plain truncated polynomial
// product; partial() multiplies the factorial back.
//
// valid_order tracks how many derivative orders of the stored coefficients
// are trustworthy: differentiating a jet in place loses one order.
class Jet {
 public:
  Jet() : mode_(Mode::Complex), valid_(kJetOrder) { c_.fill(Cplx(0, 0)); }

  static Jet constant(Cplx v, Mode mode);
  // Jet of the coordinate function `var` (0..3) at `point`.
  static Jet seed(const Point4& point, int var, Mode mode);

  Mode mode() const { return mode_; }
  int valid_order() const { return valid_; }
  Cplx value() const { return c_[0]; }

  Cplx coeff(int slot) const { return c_[slot]; }

  // Raw partial derivative d^alpha f = alpha! * coeff(alpha).
  Cplx partial(const MultiIndex& alpha) const;

  // d/dx_var as a jet; the result is valid to one order less.
  Jet derivative(int var) const;

  bool all_finite() const;

  friend Jet operator+(const Jet& a, const Jet& b) { return jet_add(a, b); }
  friend Jet operator-(const Jet& a, const Jet& b) { return jet_sub(a, b); }
  friend Jet operator-(const Jet& a) { return jet_neg(a); }
  friend Jet operator*(const Jet& a, const Jet& b) { return jet_mul(a, b); }
  friend Jet operator/(const Jet& a, const Jet& b) { return jet_div(a, b, 0, 0); }
  Jet& operator+=(const Jet& b) { *this = *this + b; return *this; }
  Jet& operator-=(const Jet& b) { *this = *this - b; return *this; }
  Jet& operator*=(const Jet& b) { *this = *this * b; return *this; }

  friend Jet jet_neg(const Jet& a);
  friend Jet jet_add(const Jet& a, const Jet& b);
  friend Jet jet_sub(const Jet& a, const Jet& b);
  friend Jet jet_mul(const Jet& a, const Jet& b);
  friend Jet jet_div(const Jet& a, const Jet& b, std::size_t sb, std::size_t se);
  friend Jet jet_inv(const Jet& a, std::size_t sb, std::size_t se);
  friend Jet jet_pow_int(const Jet& a, int n, std::size_t sb, std::size_t se);
  friend Jet jet_exp(const Jet& a);
  friend Jet jet_log(const Jet& a, std::size_t sb, std::size_t se);
  friend Jet jet_sin(const Jet& a);
  friend Jet jet_cos(const Jet& a);
  friend Jet jet_compose(const Jet& b, const std::array<Cplx, kJetOrder + 1>& derivs,
                         Mode mode);

 private:
  std::array<Cplx, kJetSize> c_;
  Mode mode_;
  int valid_;
};

Jet jet_neg(const Jet& a);
Jet jet_add(const Jet& a, const Jet& b);
Jet jet_sub(const Jet& a, const Jet& b);
Jet jet_mul(const Jet& a, const Jet& b);
Jet jet_div(const Jet& a, const Jet& b, std::size_t sb = 0, std::size_t se = 0);
Jet jet_inv(const Jet& a, std::size_t sb = 0, std::size_t se = 0);
Jet jet_pow_int(const Jet& a, int n, std::size_t sb = 0, std::size_t se = 0);
Jet jet_exp(const Jet& a);
Jet jet_log(const Jet& a, std::size_t sb = 0, std::size_t se = 0);
Jet jet_sin(const Jet& a);
Jet jet_cos(const Jet& a);

// f(b) from the value-point derivatives f(b0), f'(b0), f''(b0), f'''(b0).
Jet jet_compose(const Jet& b, const std::array<Cplx, kJetOrder + 1>& derivs, Mode mode);

inline Jet operator*(const Cplx& s, const Jet& a) {
  return jet_mul(Jet::constant(s, a.mode()), a);
}

}  // namespace nsl

#endif
