#ifndef NSL_CONGRUENCE_HPP
#define NSL_CONGRUENCE_HPP

#include <optional>
#include <string>
#include <vector>

#include "nsl/classify.hpp"
#include "nsl/curvature.hpp"
#include "nsl/frame.hpp"

namespace nsl {

// A candidate generating spinor field, with components given as fields over
// the instance chart (jets to order >= 1). Components refer to the instance's
// adapted tetrad.
struct SpinorFieldSpec {
  bool self_dual = true;
  FieldFn comp[2];
  std::string label;

  static SpinorFieldSpec constant(bool sd, Cplx c0, Cplx c1, Mode mode,
                                  const std::string& label = "");
  // m_A. = [z, 1] with z a field           (ASD)
  static SpinorFieldSpec dotted_z(FieldFn z, Mode mode, const std::string& label = "");
  // n_A. = [1, w] with w a field           (ASD)
  static SpinorFieldSpec dotted_w(FieldFn w, Mode mode, const std::string& label = "");
  // n_A = [1, n] with n a field            (SD)
  static SpinorFieldSpec undotted_n(FieldFn n, Mode mode, const std::string& label = "");
};

struct CongruenceReport {
  bool self_dual = true;
  double residual = 0;      // max |null-string equation| / scale
  double scale = 1;
  Cplx sommers[2][2] = {};  // Z_{A C.} (SD) or Z._{A C.} (ASD)
  Cplx expansion[2] = {};   // M_C. (SD) or M_A (ASD)
  bool nonexpanding = false;
  Cplx spinor[2] = {};      // generating spinor value at the point
  double expansion_scale = 1;
};

// Covariant derivative nabla_{M N.} of a 1-index spinor field at a point;
// out[M][Ndot][B] with B the (lower) spinor component index.
void covariant_derivative_spinor(const SpinorFieldSpec& spec, const FramePoint& fp,
                                 const SpinorConnection& conn, const Point4& point,
                                 Cplx out[2][2][2]);

// Null-string residual plus Sommers/expansion split.
CongruenceReport verify_null_string(const SpinorFieldSpec& spec, const FramePoint& fp,
                                    const SpinorConnection& conn, const Point4& point,
                                    double tol = 1e-9);

struct OpticsReport {
  Cplx theta{};
  Cplx rho{};
  OpticsClass cls = OpticsClass::MinusMinus;
};

// theta ~ m_A M^A + m_A. M^A., rho ~ m_A M^A - m_A. M^A.; only the vanishing
// pattern is contractual.
OpticsReport intersection_optics(const CongruenceReport& sd, const CongruenceReport& asd,
                                 double tol = 1e-7);

// The two first-order systems obeyed by ASD generators on an A/Q/B metric,
// and the expansion blocks that go with them.
struct SystemResidual {
  Cplx r1{}, r2{};
  Cplx expansion[2] = {};
  double scale = 1;
};

SystemResidual asd_z_system_residual(const FieldFn& z, const PlebanskiData& Q,
                                     const Point4& point);
SystemResidual asd_w_system_residual(const FieldFn& w, const PlebanskiData& Q,
                                     const Point4& point);
// Second SD generator n on a metric with Q = 0, A = A(q,p,x), B = B(q,p,y).
SystemResidual second_sd_residual(const FieldFn& n, const FieldFn& A, const FieldFn& B,
                                  const Point4& point);

// Candidate values for the second SD generator from the curvature
// coefficients: the quadratic-branch pair (C^(3) != 0) or the linear-branch
// single value (C^(3) = 0, C^(2) != 0). In real mode a negative discriminant
// yields no candidates. Within tolerance of a vanishing discriminant the two
// roots collapse to the same value exactly.
struct CandidateN {
  std::vector<Cplx> values;
  bool collapsed = false;
};
CandidateN candidate_n(const CurvatureData& c, double tol = 1e-8);

// The six compatibility equations for the (N, P, Omega) data of the
// self-dual family with a second SD congruence; all third derivatives come
// from order-3 jets of the inputs.
std::array<Cplx, 6> type3_system_residual(Cplx M0, const FieldFn& N, const FieldFn& P,
                                          const FieldFn& Omega, const Point4& point);

}  // namespace nsl

#endif
