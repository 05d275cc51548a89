#ifndef NSL_FRAME_HPP
#define NSL_FRAME_HPP

#include <array>
#include <functional>

#include "nsl/field.hpp"

namespace nsl {

// Spinor index conventions. epsilon = [[0,1],[-1,0]] for both positions and
// both index families. Components raise as m^A = m_B eps^{BA}; objects from
// the tangent space raise with the transposed rule, d^A = d_B eps^{AB}.
namespace spinor {

inline constexpr double kSqrt2 = 1.4142135623730951;

inline std::array<Cplx, 2> lower(const std::array<Cplx, 2>& up) {
  // m_A = eps_{AB} m^B
  return {up[1], -up[0]};
}
inline std::array<Cplx, 2> raise(const std::array<Cplx, 2>& lo) {
  // m^A = m_B eps^{BA}
  return {-lo[1], lo[0]};
}
inline std::array<Cplx, 2> raise_tangent(const std::array<Cplx, 2>& lo) {
  // d^A = d_B eps^{AB}
  return {lo[1], -lo[0]};
}
inline Cplx contract_up_down(const std::array<Cplx, 2>& up, const std::array<Cplx, 2>& lo) {
  return cx_mul(up[0], lo[0]) + cx_mul(up[1], lo[1]);
}

}  // namespace spinor

// The symmetric 2x2 of metric functions: Q^{AB} = [[A, Q], [Q, B]].
struct PlebanskiData {
  FieldFn A, Q, B;
  Mode mode = Mode::Complex;
};

using Mat4J = std::array<std::array<Jet, 4>, 4>;
using Mat4C = std::array<std::array<Cplx, 4>, 4>;

// Jet-valued 4x4 inverse (Gaussian elimination, value-magnitude pivoting).
Mat4J invert4(const Mat4J& m, double degeneracy_tol = 1e-12);

// Point data of a null coframe: metric tensor, tetrad legs e^a_mu and frame
// vectors E_a^mu (all jets in the chart coordinates). The metric is always
// eta_ab e^a e^b with eta_12 = eta_34 = 1.
struct FramePoint {
  Mode mode;
  Mat4J g;  // g_{mu nu}
  Mat4J e;  // e[a][mu]
  Mat4J E;  // E[a][mu]
};

// A metric realized through tetrad legs over some 4-coordinate chart.
struct MetricFrame {
  Mode mode = Mode::Complex;
  std::function<FramePoint(const Point4&)> eval;
};

// g_{mu nu} = eta_ab e^a_mu e^b_nu with eta_12 = eta_34 = 1.
Mat4J metric_from_legs(const Mat4J& e);

// Frame vectors dual to the adapted coframe, written out explicitly.
Mat4J frame_vectors_plebanski(const Jet& A, const Jet& Q, const Jet& B, Mode mode);

// The adapted coframe of the A/Q/B metric form:
//   e1 = -dq, e2 = -dy + Q dp - B dq, e3 = dp, e4 = -dx + A dp - Q dq.
MetricFrame plebanski_frame(const PlebanskiData& Q);

// Metric tensor of the full line element (flat part entries 1/-1 and the
// function block doubled relative to the half line element's displayed
// coefficients).
Mat4J plebanski_metric(const PlebanskiData& Q, const Point4& point);

// Tetrad connection coefficients Gamma_{abc} (Gamma_ab = Gamma_abc e^c,
// antisymmetric in (a,b)); tetrad indices 1..4.
struct TetradConnection {
  Cplx g[4][4][4] = {};

  Cplx gamma(int a, int b, int c) const { return g[a - 1][b - 1][c - 1]; }
  void set(int a, int b, int c, Cplx v) {
    g[a - 1][b - 1][c - 1] = v;
    g[b - 1][a - 1][c - 1] = -v;
  }
};

// Spinorial connection coefficients; first index pair symmetric.
// Pair slots: 0 = (11), 1 = (12), 2 = (22) for both families.
struct SpinorConnection {
  Cplx und[3][2][2] = {};  // Gamma_{AB M N.}
  Cplx dot[3][2][2] = {};  // Gamma_{A.B. M N.}

  static int pair_slot(int a, int b) { return a + b; }  // 0-based indices
  Cplx undotted(int A, int B, int M, int Ndot) const { return und[A + B][M][Ndot]; }
  Cplx dotted(int Adot, int Bdot, int M, int Ndot) const { return dot[Adot + Bdot][M][Ndot]; }
};

// Exact linear recombination between Gamma_{abc} and the spinorial blocks.
SpinorConnection gamma_to_spinor(const TetradConnection& tc);
TetradConnection spinor_to_gamma(const SpinorConnection& sc);

// Connection data computed from a FramePoint through coordinate Christoffels.
struct ConnectionPoint {
  TetradConnection tetrad;
  SpinorConnection spinor;
  // Christoffel jets, valid to order >= 1 (for curvature downstream).
  std::array<Mat4J, 4> christoffel;  // [rho][mu][nu]
};

ConnectionPoint connection_at(const FramePoint& fp);

// Closed-form spinorial connection of the A/Q/B metric form; every component
// not produced by the formulas is exactly zero.
SpinorConnection spin_connection_plebanski(const PlebanskiData& Q, const Point4& point);

}  // namespace nsl

#endif
