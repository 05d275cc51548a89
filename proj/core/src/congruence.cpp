#include "nsl/congruence.hpp"

#include <cmath>

#include "nsl/errors.hpp"

namespace nsl {

using spinor::kSqrt2;

SpinorFieldSpec SpinorFieldSpec::constant(bool sd, Cplx c0, Cplx c1, Mode mode,
                                          const std::string& label) {
  SpinorFieldSpec s;
  s.self_dual = sd;
  s.comp[0] = constant_field(c0, mode);
  s.comp[1] = constant_field(c1, mode);
  s.label = label;
  return s;
}

SpinorFieldSpec SpinorFieldSpec::dotted_z(FieldFn z, Mode mode, const std::string& label) {
  SpinorFieldSpec s;
  s.self_dual = false;
  s.comp[0] = std::move(z);
  s.comp[1] = constant_field(Cplx(1, 0), mode);
  s.label = label;
  return s;
}

SpinorFieldSpec SpinorFieldSpec::dotted_w(FieldFn w, Mode mode, const std::string& label) {
  SpinorFieldSpec s;
  s.self_dual = false;
  s.comp[0] = constant_field(Cplx(1, 0), mode);
  s.comp[1] = std::move(w);
  s.label = label;
  return s;
}

SpinorFieldSpec SpinorFieldSpec::undotted_n(FieldFn n, Mode mode, const std::string& label) {
  SpinorFieldSpec s;
  s.self_dual = true;
  s.comp[0] = constant_field(Cplx(1, 0), mode);
  s.comp[1] = std::move(n);
  s.label = label;
  return s;
}

void covariant_derivative_spinor(const SpinorFieldSpec& spec, const FramePoint& fp,
                                 const SpinorConnection& conn, const Point4& point,
                                 Cplx out[2][2][2]) {
  const Jet psi0 = spec.comp[0](point);
  const Jet psi1 = spec.comp[1](point);

  // Coordinate gradients of the components.
  Cplx dpsi[2][4];
  for (int mu = 0; mu < 4; ++mu) {
    dpsi[0][mu] = psi0.derivative(mu).value();
    dpsi[1][mu] = psi1.derivative(mu).value();
  }
  // Frame-direction derivatives d_a = E_a^mu d_mu, then the spinor-labelled
  // pattern d_{1 B.} = -sqrt2 [d_4, d_2], d_{2 B.} = -sqrt2 [d_1, -d_3].
  Cplx da[2][4];
  for (int comp = 0; comp < 2; ++comp) {
    for (int a = 0; a < 4; ++a) {
      Cplx acc(0, 0);
      for (int mu = 0; mu < 4; ++mu) acc += cx_mul(fp.E[a][mu].value(), dpsi[comp][mu]);
      da[comp][a] = acc;
    }
  }
  Cplx dMN[2][2][2];  // [M][Ndot][component]
  for (int comp = 0; comp < 2; ++comp) {
    dMN[0][0][comp] = -kSqrt2 * da[comp][3];
    dMN[0][1][comp] = -kSqrt2 * da[comp][1];
    dMN[1][0][comp] = -kSqrt2 * da[comp][0];
    dMN[1][1][comp] = kSqrt2 * da[comp][2];
  }

  const Cplx psi[2] = {psi0.value(), psi1.value()};
  for (int M = 0; M < 2; ++M) {
    for (int N = 0; N < 2; ++N) {
      for (int B = 0; B < 2; ++B) {
        Cplx gamma_term(0, 0);
        for (int S = 0; S < 2; ++S) {
          // Raising follows X^A = X_B eps^{BA}, so Gamma^S_{B M N.} =
          // Gamma_{C B M N.} eps^{CS}: S=0 -> -Gamma_{1B..}, S=1 -> +Gamma_{0B..}
          // (0-based component indices).
          Cplx g;
          if (spec.self_dual) {
            g = (S == 0) ? -conn.und[SpinorConnection::pair_slot(1, B)][M][N]
                         : conn.und[SpinorConnection::pair_slot(0, B)][M][N];
          } else {
            g = (S == 0) ? -conn.dot[SpinorConnection::pair_slot(1, B)][M][N]
                         : conn.dot[SpinorConnection::pair_slot(0, B)][M][N];
          }
          gamma_term += cx_mul(g, psi[S]);
        }
        out[M][N][B] = dMN[M][N][B] - gamma_term;
      }
    }
  }
}

CongruenceReport verify_null_string(const SpinorFieldSpec& spec, const FramePoint& fp,
                                    const SpinorConnection& conn, const Point4& point,
                                    double tol) {
  Cplx grad[2][2][2];
  covariant_derivative_spinor(spec, fp, conn, point, grad);

  const Cplx m0 = spec.comp[0](point).value();
  const Cplx m1 = spec.comp[1](point).value();
  const double mnorm = std::max(std::abs(m0), std::abs(m1));
  if (!(mnorm > 1e-14)) throw ZeroSpinor("generating spinor vanishes at the sample point");

  // raised components m^A = m_B eps^{BA}
  const Cplx up0 = -m1, up1 = m0;

  CongruenceReport rep;
  rep.self_dual = spec.self_dual;
  rep.spinor[0] = m0;
  rep.spinor[1] = m1;

  double gscale = 0;
  for (int M = 0; M < 2; ++M)
    for (int N = 0; N < 2; ++N)
      for (int B = 0; B < 2; ++B) gscale = std::max(gscale, std::abs(grad[M][N][B]));
  rep.scale = 1.0 + gscale;

  // For the SD case the free derivative index pairing with the epsilon term
  // is the first (undotted) one; for the ASD case the dotted one.
  //   SD : nabla_{A C.} m_B = Z_{A C.} m_B + eps_{AB} M_C.
  //   ASD: nabla_{A C.} m_B. = Z._{A C.} m_B. + eps_{C.B.} M_A
  double res = 0;
  if (spec.self_dual) {
    for (int C = 0; C < 2; ++C) {
      // m^A m^B grad_{A C.} m_B
      Cplx inner0 = cx_mul(up0, grad[0][C][0]) + cx_mul(up1, grad[0][C][1]);
      Cplx inner1 = cx_mul(up0, grad[1][C][0]) + cx_mul(up1, grad[1][C][1]);
      Cplx total = cx_mul(up0, inner0) + cx_mul(up1, inner1);
      res = std::max(res, std::abs(total));
    }
    // M_C. = (m^B grad_{A C.} m_B) / m_A for any A with m_A != 0
    const int A = (std::abs(m0) >= std::abs(m1)) ? 0 : 1;
    const Cplx mA = (A == 0) ? m0 : m1;
    for (int C = 0; C < 2; ++C) {
      const Cplx num = cx_mul(up0, grad[A][C][0]) + cx_mul(up1, grad[A][C][1]);
      rep.expansion[C] = cx_div(num, mA);
    }
    // Z_{A C.} from a normalized complement k with k^A m_A = 1:
    //   grad_{A C.} m_B k^B = Z_{A C.} (m_B k^B) + (eps_{AB} k^B) M_C.
    // with m_B k^B = -1 and eps_{AB} k^B = k_A.
    Cplx k_lo[2];  // k_A with k^A m_A = 1
    if (std::abs(m1) >= std::abs(m0)) {
      // k_A = [1/m1^ ... ]: choose k = [c, 0], k^A = [0, c], k^A m_A = c m1
      const Cplx c = cx_div(Cplx(1, 0), m1);
      k_lo[0] = c; k_lo[1] = Cplx(0, 0);
    } else {
      // k = [0, c], k^A = [-c, 0], k^A m_A = -c m0
      const Cplx c = cx_div(Cplx(-1, 0), m0);
      k_lo[0] = Cplx(0, 0); k_lo[1] = c;
    }
    const Cplx kup0 = -k_lo[1], kup1 = k_lo[0];
    for (int A2 = 0; A2 < 2; ++A2) {
      for (int C = 0; C < 2; ++C) {
        // grad k^B = Z (m_B k^B) + eps_{AB} k^B M = Z + k_A M
        const Cplx lhs = cx_mul(kup0, grad[A2][C][0]) + cx_mul(kup1, grad[A2][C][1]);
        rep.sommers[A2][C] = lhs - cx_mul(k_lo[A2], rep.expansion[C]);
      }
    }
  } else {
    for (int A = 0; A < 2; ++A) {
      // m^C. m^B. grad_{A C.} m_B.
      Cplx inner0 = cx_mul(up0, grad[A][0][0]) + cx_mul(up1, grad[A][0][1]);
      Cplx inner1 = cx_mul(up0, grad[A][1][0]) + cx_mul(up1, grad[A][1][1]);
      Cplx total = cx_mul(up0, inner0) + cx_mul(up1, inner1);
      res = std::max(res, std::abs(total));
    }
    const int C = (std::abs(m0) >= std::abs(m1)) ? 0 : 1;
    const Cplx mC = (C == 0) ? m0 : m1;
    for (int A = 0; A < 2; ++A) {
      const Cplx num = cx_mul(up0, grad[A][C][0]) + cx_mul(up1, grad[A][C][1]);
      rep.expansion[A] = cx_div(num, mC);
    }
    Cplx k_lo[2];
    if (std::abs(m1) >= std::abs(m0)) {
      const Cplx c = cx_div(Cplx(1, 0), m1);
      k_lo[0] = c; k_lo[1] = Cplx(0, 0);
    } else {
      const Cplx c = cx_div(Cplx(-1, 0), m0);
      k_lo[0] = Cplx(0, 0); k_lo[1] = c;
    }
    const Cplx kup0 = -k_lo[1], kup1 = k_lo[0];
    for (int A = 0; A < 2; ++A) {
      for (int C2 = 0; C2 < 2; ++C2) {
        const Cplx lhs = cx_mul(kup0, grad[A][C2][0]) + cx_mul(kup1, grad[A][C2][1]);
        rep.sommers[A][C2] = lhs - cx_mul(k_lo[C2], rep.expansion[A]);
      }
    }
  }
  rep.residual = res / rep.scale;

  double escale = 0;
  for (int i = 0; i < 2; ++i) escale = std::max(escale, std::abs(rep.expansion[i]));
  rep.expansion_scale = rep.scale;
  rep.nonexpanding = escale <= tol * rep.scale;
  return rep;
}

OpticsReport intersection_optics(const CongruenceReport& sd, const CongruenceReport& asd,
                                 double tol) {
  OpticsReport rep;
  // m_A M^A with M the expansion of the ASD congruence (undotted components),
  // raised as M^A = M_B eps^{BA}; likewise for the dotted pair.
  const Cplx Mup0 = -asd.expansion[1], Mup1 = asd.expansion[0];
  const Cplx a = cx_mul(sd.spinor[0], Mup0) + cx_mul(sd.spinor[1], Mup1);
  const Cplx Mdup0 = -sd.expansion[1], Mdup1 = sd.expansion[0];
  const Cplx b = cx_mul(asd.spinor[0], Mdup0) + cx_mul(asd.spinor[1], Mdup1);
  rep.theta = a + b;
  rep.rho = a - b;
  const double scale = 1.0 + std::abs(a) + std::abs(b);
  const bool th = std::abs(rep.theta) > tol * scale;
  const bool tw = std::abs(rep.rho) > tol * scale;
  rep.cls = th ? (tw ? OpticsClass::PlusPlus : OpticsClass::PlusMinus)
              : (tw ? OpticsClass::MinusPlus : OpticsClass::MinusMinus);
  return rep;
}

SystemResidual asd_z_system_residual(const FieldFn& z, const PlebanskiData& Qd,
                                     const Point4& point) {
  const Jet zf = z(point);
  const Jet A = Qd.A(point);
  const Jet Q = Qd.Q(point);
  const Jet B = Qd.B(point);
  auto dq = [](const Jet& j) { return j.derivative(0); };
  auto dp = [](const Jet& j) { return j.derivative(1); };
  auto dx = [](const Jet& j) { return j.derivative(2); };
  auto dy = [](const Jet& j) { return j.derivative(3); };

  SystemResidual out;
  // z z_y - z_x
  out.r1 = (jet_mul(zf, dy(zf)) - dx(zf)).value();
  // z_q - z z_p - z_y Y + z dY/dy - dY/dx,  Y = B + 2 z Q + z^2 A
  const Jet Y = B + 2.0 * jet_mul(zf, Q) + jet_mul(jet_mul(zf, zf), A);
  out.r2 = (dq(zf) - jet_mul(zf, dp(zf)) - jet_mul(dy(zf), Y) + jet_mul(zf, dy(Y)) - dx(Y)).value();
  // expansions: M_1/sqrt2 = -z_y, M_2/sqrt2 = -z_p - d_x(Q + zA) + z d_y(Q + zA) - z_y (Q + zA)
  const Jet W = Q + jet_mul(zf, A);
  out.expansion[0] = -kSqrt2 * dy(zf).value();
  out.expansion[1] =
      kSqrt2 * (-dp(zf) - dx(W) + jet_mul(zf, dy(W)) - jet_mul(dy(zf), W)).value();
  out.scale = 1.0 + std::abs(zf.value()) + std::abs(Y.value());
  return out;
}

SystemResidual asd_w_system_residual(const FieldFn& w, const PlebanskiData& Qd,
                                     const Point4& point) {
  const Jet wf = w(point);
  const Jet A = Qd.A(point);
  const Jet Q = Qd.Q(point);
  const Jet B = Qd.B(point);
  auto dq = [](const Jet& j) { return j.derivative(0); };
  auto dp = [](const Jet& j) { return j.derivative(1); };
  auto dx = [](const Jet& j) { return j.derivative(2); };
  auto dy = [](const Jet& j) { return j.derivative(3); };

  SystemResidual out;
  // w_y - w w_x
  out.r1 = (dy(wf) - jet_mul(wf, dx(wf))).value();
  // w_p - w w_q + dZ/dy - w dZ/dx + w_x Z,  Z = A + 2 w Q + w^2 B
  const Jet Z = A + 2.0 * jet_mul(wf, Q) + jet_mul(jet_mul(wf, wf), B);
  out.r2 = (dp(wf) - jet_mul(wf, dq(wf)) + dy(Z) - jet_mul(wf, dx(Z)) + jet_mul(dx(wf), Z)).value();
  // N_1/sqrt2 = w_x, N_2/sqrt2 = w_q + w d_x(Q + wB) - d_y(Q + wB) - w_x (Q + wB)
  const Jet W = Q + jet_mul(wf, B);
  out.expansion[0] = kSqrt2 * dx(wf).value();
  out.expansion[1] =
      kSqrt2 * (dq(wf) + jet_mul(wf, dx(W)) - dy(W) - jet_mul(dx(wf), W)).value();
  out.scale = 1.0 + std::abs(wf.value()) + std::abs(Z.value());
  return out;
}

SystemResidual second_sd_residual(const FieldFn& n, const FieldFn& A, const FieldFn& B,
                                  const Point4& point) {
  const Jet nf = n(point);
  const Jet Af = A(point);
  const Jet Bf = B(point);
  auto dq = [](const Jet& j) { return j.derivative(0); };
  auto dp = [](const Jet& j) { return j.derivative(1); };
  auto dx = [](const Jet& j) { return j.derivative(2); };
  auto dy = [](const Jet& j) { return j.derivative(3); };

  SystemResidual out;
  // n_q - n_y B - B_p + n B_y - n n_x
  out.r1 = (dq(nf) - jet_mul(dy(nf), Bf) - dp(Bf) + jet_mul(nf, dy(Bf)) -
            jet_mul(nf, dx(nf))).value();
  // n_p + n_x A + A_q - n A_x - n n_y
  out.r2 = (dp(nf) + jet_mul(dx(nf), Af) + dq(Af) - jet_mul(nf, dx(Af)) -
            jet_mul(nf, dy(nf))).value();
  // N_M. = sqrt2 (n_x, n_y)
  out.expansion[0] = kSqrt2 * dx(nf).value();
  out.expansion[1] = kSqrt2 * dy(nf).value();
  out.scale = 1.0 + std::abs(nf.value()) + std::abs(Af.value()) + std::abs(Bf.value());
  return out;
}

CandidateN candidate_n(const CurvatureData& c, double tol) {
  const auto cup = c.cup();
  const Cplx c1 = cup[0], c2 = cup[1], c3 = cup[2];
  const double scale = std::abs(c1) + std::abs(c2) + std::abs(c3);
  CandidateN out;
  if (std::abs(c3) > tol * (1.0 + scale)) {
    const Cplx delta = type_delta(cup);
    const double dscale = 2.0 * abs2(c2) + 3.0 * std::abs(c3) * std::abs(c1);
    const Cplx base = cx_div(c2, 3.0 * c3);
    if (std::abs(delta) <= tol * (1.0 + dscale)) {
      out.values = {base, base};
      out.collapsed = true;
      return out;
    }
    if (c.mode == Mode::Real && delta.real() < 0) {
      return out;  // no real candidates
    }
    const Cplx root = cx_sqrt(2.0 * delta);
    out.values = {base + cx_div(root, 6.0 * c3), base - cx_div(root, 6.0 * c3)};
    return out;
  }
  if (std::abs(c2) > tol * (1.0 + scale)) {
    out.values = {cx_div(c1, 4.0 * c2)};
    return out;
  }
  throw BothLeadingZero("C^(3) and C^(2) both vanish; no candidate generator");
}

std::array<Cplx, 6> type3_system_residual(Cplx M0, const FieldFn& N, const FieldFn& P,
                                          const FieldFn& Omega, const Point4& point) {
  const Jet Nf = N(point);
  const Jet Pf = P(point);
  const Jet Of = Omega(point);
  const Jet m0 = Jet::constant(M0, Nf.mode());
  auto dq = [](const Jet& j) { return j.derivative(0); };
  auto dp = [](const Jet& j) { return j.derivative(1); };

  // a = N_p + P_q, b = P N_p - N_pp + 2 M0 Omega_q,
  // c = N P_q + P_qq, f = Omega_qq + N Omega_q
  const Jet a = dp(Nf) + dq(Pf);
  const Jet b = jet_mul(Pf, dp(Nf)) - dp(dp(Nf)) + 2.0 * jet_mul(m0, dq(Of));
  const Jet c = jet_mul(Nf, dq(Pf)) + dq(dq(Pf));
  const Jet f = dq(dq(Of)) + jet_mul(Nf, dq(Of));

  auto J2 = [](const Jet& u, const Jet& v) { return jet_mul(u, v); };

  std::array<Cplx, 6> r;
  // 2(b a_q - a b_q) - 4 a^2 N_p - 2 M0 a f + c b
  r[0] = (2.0 * (J2(b, dq(a)) - J2(a, dq(b))) - 4.0 * J2(J2(a, a), dp(Nf)) -
          2.0 * J2(m0, J2(a, f)) + J2(c, b)).value();
  // 2(a c_q - c a_q) + 2 N a c - c^2
  r[1] = (2.0 * (J2(a, dq(c)) - J2(c, dq(a))) + 2.0 * J2(Nf, J2(a, c)) - J2(c, c)).value();
  // 2(a f_q - f a_q) + 2 N a f - f c
  r[2] = (2.0 * (J2(a, dq(f)) - J2(f, dq(a))) + 2.0 * J2(Nf, J2(a, f)) - J2(f, c)).value();
  // 2(b a_p - a b_p) - 4 M0 a^2 Omega + 2 P b a - b^2
  r[3] = (2.0 * (J2(b, dp(a)) - J2(a, dp(b))) - 4.0 * J2(m0, J2(J2(a, a), Of)) +
          2.0 * J2(Pf, J2(b, a)) - J2(b, b)).value();
  // 2(a c_p - c a_p) + 4 a^2 P_q - 2 M0 a f + c b
  r[4] = (2.0 * (J2(a, dp(c)) - J2(c, dp(a))) + 4.0 * J2(J2(a, a), dq(Pf)) -
          2.0 * J2(m0, J2(a, f)) + J2(c, b)).value();
  // 2(a f_p - f a_p) + 4 a^2 Omega_q + 2 Omega a c - 2 P f a + f b
  r[5] = (2.0 * (J2(a, dp(f)) - J2(f, dp(a))) + 4.0 * J2(J2(a, a), dq(Of)) +
          2.0 * J2(Of, J2(a, c)) - 2.0 * J2(Pf, J2(f, a)) + J2(f, b)).value();
  return r;
}

}  // namespace nsl
