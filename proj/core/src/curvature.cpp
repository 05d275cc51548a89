#include "nsl/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace nsl {

double CurvatureData::max_abs() const {
  double m = std::abs(scalar);
  for (const auto& z : sd) m = std::max(m, std::abs(z));
  for (const auto& z : asd) m = std::max(m, std::abs(z));
  for (const auto& row : ricci) {
    for (const auto& z : row) m = std::max(m, std::abs(z));
  }
  return m;
}

double CurvatureData::max_ricci_abs() const {
  double m = 0;
  for (const auto& row : ricci) {
    for (const auto& z : row) m = std::max(m, std::abs(z));
  }
  return m;
}

namespace {

// Antisymmetric pair slots of a 2-form in tetrad components.
struct TwoForm {
  // components w_{cd}, antisymmetric; stored full for clarity
  Cplx w[4][4] = {};
};

// Decomposition of a 2-form onto the SD basis S^{AB} and ASD basis S^{A.B.}:
//   c11 = w_42/2, c12 = (w_12 + w_34)/2, c22 = w_31/2,
//   d11 = w_41/2, d12 = (w_34 - w_12)/2, d22 = w_32/2.
struct SCoeffs {
  Cplx c[3];  // S^{11}, S^{12}, S^{22}
  Cplx d[3];  // S^{1.1.}, S^{1.2.}, S^{2.2.}
};

SCoeffs decompose(const TwoForm& f) {
  SCoeffs out;
  out.c[0] = 0.5 * f.w[3][1];
  out.c[1] = 0.5 * (f.w[0][1] + f.w[2][3]);
  out.c[2] = 0.5 * f.w[2][0];
  out.d[0] = 0.5 * f.w[3][0];
  out.d[1] = 0.5 * (f.w[2][3] - f.w[0][1]);
  out.d[2] = 0.5 * f.w[2][1];
  return out;
}

}  // namespace

CurvatureData oracle_curvature(const FramePoint& fp, OracleDiagnostics* diag) {
  ConnectionPoint conn = connection_at(fp);

  // Coordinate Riemann R^r_{s mn} from the Christoffel jets.
  Cplx Rm[4][4][4][4];
  for (int r = 0; r < 4; ++r) {
    for (int s = 0; s < 4; ++s) {
      for (int m = 0; m < 4; ++m) {
        for (int n = 0; n < 4; ++n) {
          Cplx v = conn.christoffel[r][n][s].derivative(m).value() -
                   conn.christoffel[r][m][s].derivative(n).value();
          for (int l = 0; l < 4; ++l) {
            v += cx_mul(conn.christoffel[r][m][l].value(), conn.christoffel[l][n][s].value()) -
                 cx_mul(conn.christoffel[r][n][l].value(), conn.christoffel[l][m][s].value());
          }
          Rm[r][s][m][n] = v;
        }
      }
    }
  }

  double scale = 0;
  for (int r = 0; r < 4; ++r)
    for (int s = 0; s < 4; ++s)
      for (int m = 0; m < 4; ++m)
        for (int n = 0; n < 4; ++n) scale = std::max(scale, std::abs(Rm[r][s][m][n]));

  if (diag) {
    // First Bianchi on the fully lowered tensor.
    Cplx Rlow[4][4][4][4];
    for (int r = 0; r < 4; ++r) {
      for (int s = 0; s < 4; ++s) {
        for (int m = 0; m < 4; ++m) {
          for (int n = 0; n < 4; ++n) {
            Cplx v(0, 0);
            for (int l = 0; l < 4; ++l) v += cx_mul(fp.g[r][l].value(), Rm[l][s][m][n]);
            Rlow[r][s][m][n] = v;
          }
        }
      }
    }
    double bianchi = 0;
    for (int r = 0; r < 4; ++r) {
      for (int s = 0; s < 4; ++s) {
        for (int m = 0; m < 4; ++m) {
          for (int n = 0; n < 4; ++n) {
            bianchi = std::max(bianchi,
                               std::abs(Rlow[r][s][m][n] + Rlow[r][m][n][s] + Rlow[r][n][s][m]));
          }
        }
      }
    }
    diag->scale = scale;
    diag->bianchi_residual = bianchi / (scale + 1e-300);
  }

  // Curvature 2-forms in tetrad components:
  //   (R^a_b)_{mn} = e^a_r E_b^s R^r_{s mn}, then (R_ab)_{cd} via eta and E.
  Cplx ev[4][4], Ev[4][4];
  for (int a = 0; a < 4; ++a) {
    for (int mu = 0; mu < 4; ++mu) {
      ev[a][mu] = fp.e[a][mu].value();
      Ev[a][mu] = fp.E[a][mu].value();
    }
  }
  static const int eta_partner[4] = {1, 0, 3, 2};
  TwoForm Rab[4][4];
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        for (int d = 0; d < 4; ++d) {
          Cplx acc(0, 0);
          for (int r = 0; r < 4; ++r) {
            for (int s = 0; s < 4; ++s) {
              Cplx coord(0, 0);
              for (int m = 0; m < 4; ++m) {
                for (int n = 0; n < 4; ++n) {
                  coord += cx_mul(cx_mul(Ev[c][m], Ev[d][n]), Rm[r][s][m][n]);
                }
              }
              acc += cx_mul(cx_mul(ev[eta_partner[a]][r], Ev[b][s]), coord);
            }
          }
          Rab[a][b].w[c][d] = acc;
        }
      }
    }
  }

  // Spinorial curvature 2-forms through the same recombination as the
  // connection forms.
  auto combine = [&](double f, const TwoForm& u) {
    TwoForm out;
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) out.w[c][d] = f * u.w[c][d];
    return out;
  };
  auto plus = [&](const TwoForm& u, const TwoForm& v) {
    TwoForm out;
    for (int c = 0; c < 4; ++c)
      for (int d = 0; d < 4; ++d) out.w[c][d] = u.w[c][d] + v.w[c][d];
    return out;
  };

  TwoForm RAB[3], RdotAB[3];
  RAB[0] = combine(-1.0, Rab[3][1]);                                // R_11 = -R_42
  RAB[1] = combine(-0.5, plus(Rab[0][1], Rab[2][3]));               // R_12
  RAB[2] = combine(-1.0, Rab[2][0]);                                // R_22 = -R_31
  RdotAB[0] = combine(-1.0, Rab[3][0]);                             // R_1.1. = -R_41
  RdotAB[1] = combine(-0.5, plus(combine(-1.0, Rab[0][1]), Rab[2][3]));  // R_1.2.
  RdotAB[2] = combine(-1.0, Rab[2][1]);                             // R_2.2. = -R_32

  SCoeffs u[3], v[3];
  for (int k = 0; k < 3; ++k) {
    u[k] = decompose(RAB[k]);
    v[k] = decompose(RdotAB[k]);
  }

  CurvatureData out;
  out.mode = fp.mode;

  // SD Weyl + scalar from R_AB = -1/2 C_ABCD S^CD + (R/24) S_AB + ...
  // with S_11 = S^22, S_12 = -S^12, S_22 = S^11 and the off-diagonal pair
  // sum carrying multiplicity 2:
  //   u[AB][11] = -1/2 C_AB11 (+R/24 for AB=22)
  //   u[AB][12] = -C_AB12   (-R/24 for AB=12)
  //   u[AB][22] = -1/2 C_AB22 (+R/24 for AB=11)
  out.sd[0] = -2.0 * u[0].c[0];  // C_1111
  out.sd[1] = -u[0].c[1];        // C_1112
  out.sd[4] = -2.0 * u[2].c[2];  // C_2222
  out.sd[3] = -u[2].c[1];        // C_1222
  const Cplx r_sd = 16.0 * u[0].c[2] - 8.0 * u[1].c[1];
  out.sd[2] = Cplx(-2.0 / 3.0, 0) * (u[0].c[2] + u[1].c[1]);  // C_1122

  // ASD Weyl + scalar from R_A.B. with S_1.1. = S^2.2. etc.
  out.asd[0] = -2.0 * v[0].d[0];
  out.asd[1] = -v[0].d[1];
  out.asd[4] = -2.0 * v[2].d[2];
  out.asd[3] = -v[2].d[1];
  const Cplx r_asd = 16.0 * v[0].d[2] - 8.0 * v[1].d[1];
  out.asd[2] = Cplx(-2.0 / 3.0, 0) * (v[0].d[2] + v[1].d[1]);

  out.scalar = 0.5 * (r_sd + r_asd);

  // Traceless Ricci appears twice: C_{AB C.D.} from the ASD part of R_AB and
  // from the SD part of R_A.B.; average and record the mismatch.
  auto mult = [](int pair) { return pair == 1 ? 1.0 : 2.0; };
  double mismatch = std::abs(r_sd - r_asd);
  for (int ab = 0; ab < 3; ++ab) {
    for (int cd = 0; cd < 3; ++cd) {
      const Cplx first = mult(cd) * u[ab].d[cd];
      const Cplx second = mult(ab) * v[cd].c[ab];
      out.ricci[ab][cd] = 0.5 * (first + second);
      mismatch = std::max(mismatch, std::abs(first - second));
    }
  }
  // Duplicate Weyl components.
  mismatch = std::max(mismatch, std::abs(-2.0 * u[1].c[0] - out.sd[1]));
  mismatch = std::max(mismatch, std::abs(-2.0 * u[1].c[2] - out.sd[3]));
  mismatch = std::max(mismatch, 2.0 * std::abs(u[2].c[0] - u[0].c[2]));
  mismatch = std::max(mismatch, std::abs(-2.0 * v[1].d[0] - out.asd[1]));
  mismatch = std::max(mismatch, std::abs(-2.0 * v[1].d[2] - out.asd[3]));
  if (diag) diag->decomposition_residual = mismatch / (scale + 1e-300);

  return out;
}

CurvatureData oracle_curvature(const MetricFrame& frame, const Point4& point,
                               OracleDiagnostics* diag) {
  return oracle_curvature(frame.eval(point), diag);
}

CurvatureData plebanski_curvature(const PlebanskiData& Qd, const Point4& point) {
  const Mode mode = Qd.mode;
  const Jet A = Qd.A(point);
  const Jet Q = Qd.Q(point);
  const Jet B = Qd.B(point);

  const Jet Qlo[2][2] = {{B, jet_neg(Q)}, {jet_neg(Q), A}};
  const Jet Qup[2][2] = {{A, Q}, {Q, B}};

  auto dx = [](const Jet& j) { return j.derivative(2); };
  auto dy = [](const Jet& j) { return j.derivative(3); };
  auto eth1 = [&](const Jet& j) {
    return jet_add(j.derivative(1), jet_add(jet_mul(A, dx(j)), jet_mul(Q, dy(j))));
  };
  auto eth2 = [&](const Jet& j) {
    return jet_add(jet_neg(j.derivative(0)), jet_add(jet_mul(Q, dx(j)), jet_mul(B, dy(j))));
  };
  // Contractions over the raised slot: d^A. X_A. = d_y X_1. - d_x X_2.
  auto d_up = [&](const Jet X[2]) { return jet_sub(dy(X[0]), dx(X[1])); };
  auto eth_up = [&](const Jet X[2]) { return jet_add(eth1(X[0]), eth2(X[1])); };

  CurvatureData out;
  out.mode = mode;

  // h_B. = eth^A. Q_{A. B.}
  Jet h[2] = {jet_add(eth1(Qlo[0][0]), eth2(Qlo[1][0])),
              jet_add(eth1(Qlo[0][1]), eth2(Qlo[1][1]))};

  // C^(3) = R/6 = -(1/3)(A_xx + 2 Q_xy + B_yy)
  const Jet c3 = Cplx(-1.0 / 3.0, 0) *
                 jet_add(dx(dx(Qup[0][0])), jet_add(2.0 * dx(dy(Qup[0][1])), dy(dy(Qup[1][1]))));
  // C^(2) = -d^A. h_A.
  const Jet c2 = jet_neg(d_up(h));
  // C^(1)/2 = -eth^A. h_A. + h_B. (d_C. Q^{B. C.})
  Jet dQ_up[2] = {jet_add(dx(Qup[0][0]), dy(Qup[0][1])),
                  jet_add(dx(Qup[1][0]), dy(Qup[1][1]))};
  const Jet c1 = 2.0 * jet_add(jet_neg(eth_up(h)),
                               jet_add(jet_mul(h[0], dQ_up[0]), jet_mul(h[1], dQ_up[1])));

  const auto cup_to_sd = [&](const Cplx& c1v, const Cplx& c2v, const Cplx& c3v) {
    out.sd[4] = 0.5 * c1v;  // C_2222
    out.sd[3] = 0.5 * c2v;  // C_1222
    out.sd[2] = 0.5 * c3v;  // C_1122
    out.sd[1] = Cplx(0, 0);
    out.sd[0] = Cplx(0, 0);
  };
  cup_to_sd(c1.value(), c2.value(), c3.value());
  out.scalar = 6.0 * c3.value();

  // C_{A.B.C.D.} = -d_(A. d_B. Q_{C.D.}): symmetrize the plain p-derivatives.
  auto dd = [&](int a, int b, int c, int d) {
    // d_a d_b Q_{cd} with derivative slots x(=0 dotted) -> 2, y -> 3
    const Jet& base = Qlo[c][d];
    Jet j1 = (a == 0) ? dx(base) : dy(base);
    return (b == 0) ? dx(j1).value() : dy(j1).value();
  };
  auto sym4 = [&](int a, int b, int c, int d) {
    // average over the 4! permutations of (a,b,c,d); dd is symmetric in its
    // first two and last two slots already, so enumerate distinct splits
    const int idx[4] = {a, b, c, d};
    Cplx acc(0, 0);
    int perm[4] = {0, 1, 2, 3};
    int count = 0;
    std::sort(perm, perm + 4);
    do {
      acc += dd(idx[perm[0]], idx[perm[1]], idx[perm[2]], idx[perm[3]]);
      ++count;
    } while (std::next_permutation(perm, perm + 4));
    return acc / double(count);
  };
  out.asd[0] = -sym4(0, 0, 0, 0);
  out.asd[1] = -sym4(0, 0, 0, 1);
  out.asd[2] = -sym4(0, 0, 1, 1);
  out.asd[3] = -sym4(0, 1, 1, 1);
  out.asd[4] = -sym4(1, 1, 1, 1);

  // Traceless Ricci: C_{11 A.B.} = 0,
  // C_{12 A.B.} = -1/2 d_(A. d^C. Q_B.)C., C_{22 A.B.} = -d_(A. eth^C. Q_B.)C.
  Jet dupQ[2] = {jet_sub(dy(Qlo[0][0]), dx(Qlo[0][1])),
                 jet_sub(dy(Qlo[1][0]), dx(Qlo[1][1]))};  // d^C. Q_{B. C.}
  Jet ethQ[2] = {jet_add(eth1(Qlo[0][0]), eth2(Qlo[0][1])),
                 jet_add(eth1(Qlo[1][0]), eth2(Qlo[1][1]))};  // eth^C. Q_{B. C.}
  auto sym2 = [&](const Jet X[2], int a, int b) {
    const Jet da = (a == 0) ? dx(X[b]) : dy(X[b]);
    const Jet db = (b == 0) ? dx(X[a]) : dy(X[a]);
    return 0.5 * (da.value() + db.value());
  };
  for (int a = 0; a < 2; ++a) {
    for (int b = a; b < 2; ++b) {
      const int cd = a + b;
      out.ricci[0][cd] = Cplx(0, 0);
      out.ricci[1][cd] = -0.5 * sym2(dupQ, a, b);
      out.ricci[2][cd] = -sym2(ethQ, a, b);
    }
  }
  return out;
}

EinsteinResidual einstein_residual(const CurvatureData& c, Cplx lambda) {
  EinsteinResidual r;
  r.max_ricci = c.max_ricci_abs();
  r.scalar_gap = std::abs(c.scalar + 4.0 * lambda);
  return r;
}

}  // namespace nsl
