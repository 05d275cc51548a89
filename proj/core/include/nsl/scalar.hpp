#ifndef NSL_SCALAR_HPP
#define NSL_SCALAR_HPP

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "nsl/errors.hpp"

namespace nsl {

enum class Mode { Real, Complex };

inline const char* mode_name(Mode m) { return m == Mode::Real ? "real" : "complex"; }

// One scalar of the working field. Complex arithmetic is spelled out as
// explicit (re, im) pairs so that real-mode inputs keep an exactly zero
// imaginary part through every operation.
using Cplx = std::complex<double>;

using Point4 = std::array<Cplx, 4>;

inline bool is_finite(const Cplx& z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

inline double abs2(const Cplx& z) {
  return z.real() * z.real() + z.imag() * z.imag();
}

// Guard below which a divisor counts as a pole.
inline constexpr double kDivGuard = 1e-300;

inline Cplx cx_mul(const Cplx& a, const Cplx& b) {
  return Cplx(a.real() * b.real() - a.imag() * b.imag(),
              a.real() * b.imag() + a.imag() * b.real());
}

inline Cplx cx_div(const Cplx& a, const Cplx& b, std::size_t sb = 0, std::size_t se = 0) {
  const double d = abs2(b);
  if (!(d > kDivGuard)) {
    throw EvalError(EvalError::Kind::DivisionNearZero, "division by near-zero value", sb, se);
  }
  return Cplx((a.real() * b.real() + a.imag() * b.imag()) / d,
              (a.imag() * b.real() - a.real() * b.imag()) / d);
}

inline Cplx cx_exp(const Cplx& z) {
  const double e = std::exp(z.real());
  return Cplx(e * std::cos(z.imag()), e * std::sin(z.imag()));
}

// Principal branch. Real mode requires a positive argument.
inline Cplx cx_log(const Cplx& z, Mode mode, std::size_t sb = 0, std::size_t se = 0) {
  const double m2 = abs2(z);
  if (!(m2 > kDivGuard)) {
    throw EvalError(EvalError::Kind::LogOfZero, "log of zero", sb, se);
  }
  if (mode == Mode::Real && z.real() <= 0.0) {
    throw EvalError(EvalError::Kind::LogOfZero, "log of a non-positive real value", sb, se);
  }
  return Cplx(0.5 * std::log(m2), std::atan2(z.imag(), z.real()));
}

inline Cplx cx_sin(const Cplx& z) {
  return Cplx(std::sin(z.real()) * std::cosh(z.imag()),
              std::cos(z.real()) * std::sinh(z.imag()));
}

inline Cplx cx_cos(const Cplx& z) {
  return Cplx(std::cos(z.real()) * std::cosh(z.imag()),
              -std::sin(z.real()) * std::sinh(z.imag()));
}

inline Cplx cx_sqrt(const Cplx& z) {
  // Principal branch; used only in complex mode (candidate root formula).
  return std::sqrt(z);
}

}  // namespace nsl

#endif
