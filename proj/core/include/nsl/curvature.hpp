#ifndef NSL_CURVATURE_HPP
#define NSL_CURVATURE_HPP

#include "nsl/frame.hpp"

namespace nsl {

// Curvature of a point, split into the two Weyl spinors, the traceless Ricci
// block and the curvature scalar. Weyl spinors are stored as the five
// independent totally symmetric components
//   [0] C_1111, [1] C_1112, [2] C_1122, [3] C_1222, [4] C_2222
// (dotted side in the same order). cup()/asd_cup() expose the conformal
// curvature coefficients C^(1..5) of the expansion in the adapted basis;
// the basis pair is fixed so that C^(i) = 2 C_{component}, i.e.
// C^(1) = 2 C_2222 ... C^(5) = 2 C_1111, which makes the candidate values
// n of the second congruence the roots of C^(1) - 4 C^(2) n + 6 C^(3) n^2.
struct CurvatureData {
  Mode mode = Mode::Complex;
  std::array<Cplx, 5> sd{};   // C_ABCD components
  std::array<Cplx, 5> asd{};  // C_A.B.C.D. components
  Cplx ricci[3][3] = {};      // C_{AB C.D.}; pair slots (11),(12),(22)
  Cplx scalar{};              // curvature scalar R (R = -4 Lambda for Einstein)

  std::array<Cplx, 5> cup() const {
    return {2.0 * sd[4], 2.0 * sd[3], 2.0 * sd[2], 2.0 * sd[1], 2.0 * sd[0]};
  }
  std::array<Cplx, 5> asd_cup() const {
    return {2.0 * asd[4], 2.0 * asd[3], 2.0 * asd[2], 2.0 * asd[1], 2.0 * asd[0]};
  }
  double max_abs() const;
  double max_ricci_abs() const;
};

struct OracleDiagnostics {
  double bianchi_residual = 0;        // max |R_{mu [nu rho sigma]}| / scale
  double decomposition_residual = 0;  // duplicate-component mismatch / scale
  double scale = 0;                   // max |Riemann| component
};

// Coordinate-tensor route: Christoffel -> Riemann -> tetrad 2-forms ->
// projection onto the SD/ASD 2-form bases of the frame.
CurvatureData oracle_curvature(const FramePoint& fp, OracleDiagnostics* diag = nullptr);
CurvatureData oracle_curvature(const MetricFrame& frame, const Point4& point,
                               OracleDiagnostics* diag = nullptr);

// Closed-form route for the A/Q/B metric form; C^(4) = C^(5) = 0 and the
// (11)-row of the Ricci block are structural zeros.
CurvatureData plebanski_curvature(const PlebanskiData& Q, const Point4& point);

struct EinsteinResidual {
  double max_ricci = 0;   // max |C_{AB C.D.}|
  double scalar_gap = 0;  // |R + 4 Lambda|
};

EinsteinResidual einstein_residual(const CurvatureData& c, Cplx lambda);

}  // namespace nsl

#endif
