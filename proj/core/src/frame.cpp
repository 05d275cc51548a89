#include "nsl/frame.hpp"

#include <cmath>

#include "nsl/errors.hpp"

namespace nsl {

using spinor::kSqrt2;

Mat4J invert4(const Mat4J& m, double degeneracy_tol) {
  const Mode mode = m[0][0].mode();
  // Augmented Gaussian elimination on jets; pivots chosen by value magnitude.
  std::array<std::array<Jet, 8>, 4> w;
  double scale = 0.0;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      w[r][c] = m[r][c];
      w[r][4 + c] = Jet::constant(Cplx(r == c ? 1 : 0, 0), mode);
      scale = std::max(scale, std::abs(m[r][c].value()));
    }
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    double best = std::abs(w[col][col].value());
    for (int r = col + 1; r < 4; ++r) {
      const double v = std::abs(w[r][col].value());
      if (v > best) { best = v; piv = r; }
    }
    if (!(best > degeneracy_tol * (scale + 1e-30))) {
      throw DegenerateMetric("matrix inversion pivot below degeneracy threshold");
    }
    std::swap(w[piv], w[col]);
    const Jet inv_p = jet_inv(w[col][col]);
    for (int c = 0; c < 8; ++c) w[col][c] = jet_mul(w[col][c], inv_p);
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const Jet f = w[r][col];
      if (abs2(f.value()) == 0.0) {
        bool zero = true;
        for (int s = 0; s < kJetSize && zero; ++s) zero = abs2(f.coeff(s)) == 0.0;
        if (zero) continue;
      }
      for (int c = 0; c < 8; ++c) w[r][c] = jet_sub(w[r][c], jet_mul(f, w[col][c]));
    }
  }
  Mat4J out;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) out[r][c] = w[r][4 + c];
  }
  return out;
}

Mat4J metric_from_legs(const Mat4J& e) {
  Mat4J g;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      // eta pairs (1,2) and (3,4)
      g[mu][nu] = jet_add(
          jet_add(jet_mul(e[0][mu], e[1][nu]), jet_mul(e[1][mu], e[0][nu])),
          jet_add(jet_mul(e[2][mu], e[3][nu]), jet_mul(e[3][mu], e[2][nu])));
    }
  }
  return g;
}

MetricFrame plebanski_frame(const PlebanskiData& Q) {
  const Mode mode = Q.mode;
  auto eval = [Q, mode](const Point4& pt) {
    const Jet A = Q.A(pt);
    const Jet Qf = Q.Q(pt);
    const Jet B = Q.B(pt);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    FramePoint fp;
    fp.mode = mode;
    for (auto& row : fp.e) row.fill(zero);
    // e1 = -dq
    fp.e[0][0] = jet_neg(one);
    // e2 = -dy + Q dp - B dq
    fp.e[1][0] = jet_neg(B);
    fp.e[1][1] = Qf;
    fp.e[1][3] = jet_neg(one);
    // e3 = dp
    fp.e[2][1] = one;
    // e4 = -dx + A dp - Q dq
    fp.e[3][0] = jet_neg(Qf);
    fp.e[3][1] = A;
    fp.e[3][2] = jet_neg(one);
    fp.g = metric_from_legs(fp.e);
    fp.E = frame_vectors_plebanski(A, Qf, B, mode);
    return fp;
  };
  return MetricFrame{mode, eval};
}

// Frame vectors dual to the adapted coframe, written out explicitly:
//   D1 = -d/dq + Q d/dx + B d/dy,  D2 = -d/dy,
//   D3 =  d/dp + A d/dx + Q d/dy,  D4 = -d/dx.
Mat4J frame_vectors_plebanski(const Jet& A, const Jet& Q, const Jet& B, Mode mode) {
  const Jet zero = Jet::constant(Cplx(0, 0), mode);
  const Jet one = Jet::constant(Cplx(1, 0), mode);
  Mat4J E;
  for (auto& row : E) row.fill(zero);
  E[0][0] = jet_neg(one);
  E[0][2] = Q;
  E[0][3] = B;
  E[1][3] = jet_neg(one);
  E[2][1] = one;
  E[2][2] = A;
  E[2][3] = Q;
  E[3][2] = jet_neg(one);
  return E;
}

Mat4J plebanski_metric(const PlebanskiData& Q, const Point4& point) {
  return plebanski_frame(Q).eval(point).g;
}

SpinorConnection gamma_to_spinor(const TetradConnection& tc) {
  SpinorConnection sc;
  auto G = [&](int a, int b, int c) { return tc.gamma(a, b, c); };
  const double s2 = kSqrt2;
  const double is2 = 1.0 / kSqrt2;

  // Gamma_{11 A B.}
  sc.und[0][0][0] = s2 * G(4, 2, 4);
  sc.und[0][0][1] = s2 * G(4, 2, 2);
  sc.und[0][1][0] = s2 * G(4, 2, 1);
  sc.und[0][1][1] = -s2 * G(4, 2, 3);
  // Gamma_{22 A B.}
  sc.und[2][0][0] = s2 * G(3, 1, 4);
  sc.und[2][0][1] = s2 * G(3, 1, 2);
  sc.und[2][1][0] = s2 * G(3, 1, 1);
  sc.und[2][1][1] = -s2 * G(3, 1, 3);
  // Gamma_{12 A B.}
  sc.und[1][0][0] = is2 * (G(1, 2, 4) + G(3, 4, 4));
  sc.und[1][0][1] = is2 * (G(1, 2, 2) + G(3, 4, 2));
  sc.und[1][1][0] = is2 * (G(1, 2, 1) + G(3, 4, 1));
  sc.und[1][1][1] = -is2 * (G(1, 2, 3) + G(3, 4, 3));
  // Gamma_{1.1. A B.}
  sc.dot[0][0][0] = s2 * G(4, 1, 4);
  sc.dot[0][0][1] = s2 * G(4, 1, 2);
  sc.dot[0][1][0] = s2 * G(4, 1, 1);
  sc.dot[0][1][1] = -s2 * G(4, 1, 3);
  // Gamma_{2.2. A B.}
  sc.dot[2][0][0] = s2 * G(3, 2, 4);
  sc.dot[2][0][1] = s2 * G(3, 2, 2);
  sc.dot[2][1][0] = s2 * G(3, 2, 1);
  sc.dot[2][1][1] = -s2 * G(3, 2, 3);
  // Gamma_{1.2. A B.}
  sc.dot[1][0][0] = is2 * (-G(1, 2, 4) + G(3, 4, 4));
  sc.dot[1][0][1] = is2 * (-G(1, 2, 2) + G(3, 4, 2));
  sc.dot[1][1][0] = is2 * (-G(1, 2, 1) + G(3, 4, 1));
  sc.dot[1][1][1] = is2 * (G(1, 2, 3) - G(3, 4, 3));
  return sc;
}

namespace {

// Components of minus the spinorial connection form, i.e. of
// (sqrt2/2) [P_{1 1.} e4 + P_{1 2.} e2 + P_{2 1.} e1 - P_{2 2.} e3].
std::array<Cplx, 4> form_components(const Cplx P[2][2]) {
  const double h = kSqrt2 / 2.0;
  return {h * P[1][0], h * P[0][1], -h * P[1][1], h * P[0][0]};  // c = 1..4
}

}  // namespace

TetradConnection spinor_to_gamma(const SpinorConnection& sc) {
  TetradConnection tc;
  const auto g42 = form_components(sc.und[0]);
  const auto g31 = form_components(sc.und[2]);
  const auto g41 = form_components(sc.dot[0]);
  const auto g32 = form_components(sc.dot[2]);
  const auto u12 = form_components(sc.und[1]);
  const auto d12 = form_components(sc.dot[1]);
  for (int c = 1; c <= 4; ++c) {
    tc.set(4, 2, c, g42[c - 1]);
    tc.set(3, 1, c, g31[c - 1]);
    tc.set(4, 1, c, g41[c - 1]);
    tc.set(3, 2, c, g32[c - 1]);
    tc.set(1, 2, c, u12[c - 1] - d12[c - 1]);
    tc.set(3, 4, c, u12[c - 1] + d12[c - 1]);
  }
  return tc;
}

ConnectionPoint connection_at(const FramePoint& fp) {
  ConnectionPoint out;

  // Coordinate Christoffels from the metric jets.
  const Mat4J ginv = invert4(fp.g);
  std::array<Mat4J, 4> dg;  // dg[s][m][n] = d_s g_{mn}
  for (int s = 0; s < 4; ++s) {
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) dg[s][m][n] = fp.g[m][n].derivative(s);
    }
  }
  const Mode mode = fp.mode;
  const Jet zero = Jet::constant(Cplx(0, 0), mode);
  for (int r = 0; r < 4; ++r) {
    for (int m = 0; m < 4; ++m) {
      for (int n = 0; n < 4; ++n) out.christoffel[r][m][n] = zero;
    }
  }
  const Cplx half(0.5, 0);
  for (int r = 0; r < 4; ++r) {
    for (int m = 0; m < 4; ++m) {
      for (int n = m; n < 4; ++n) {
        Jet acc = zero;
        for (int s = 0; s < 4; ++s) {
          Jet t = jet_add(dg[m][s][n], jet_sub(dg[n][s][m], dg[s][m][n]));
          acc = jet_add(acc, jet_mul(ginv[r][s], t));
        }
        acc = half * acc;
        out.christoffel[r][m][n] = acc;
        out.christoffel[r][n][m] = acc;
      }
    }
  }

  // Tetrad connection Gamma^a_{bc} = e^a_nu E_c^mu d_mu E_b^nu
  //                                 + e^a_nu Gamma^nu_{mu sigma} E_c^mu E_b^sigma
  // then lowered with eta (pairs 12 and 34).
  Cplx Gup[4][4][4];
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        Cplx acc(0, 0);
        for (int nu = 0; nu < 4; ++nu) {
          Cplx dEb(0, 0);
          for (int mu = 0; mu < 4; ++mu) {
            dEb += cx_mul(fp.E[c][mu].value(), fp.E[b][nu].derivative(mu).value());
          }
          Cplx chris(0, 0);
          for (int mu = 0; mu < 4; ++mu) {
            for (int sg = 0; sg < 4; ++sg) {
              chris += cx_mul(out.christoffel[nu][mu][sg].value(),
                              cx_mul(fp.E[c][mu].value(), fp.E[b][sg].value()));
            }
          }
          acc += cx_mul(fp.e[a][nu].value(), dEb + chris);
        }
        Gup[a][b][c] = acc;
      }
    }
  }
  static const int eta_partner[4] = {1, 0, 3, 2};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) {
        out.tetrad.g[a][b][c] = Gup[eta_partner[a]][b][c];
      }
    }
  }
  out.spinor = gamma_to_spinor(out.tetrad);
  return out;
}

SpinorConnection spin_connection_plebanski(const PlebanskiData& Qd, const Point4& point) {
  (void)Qd.mode;
  const Jet A = Qd.A(point);
  const Jet Q = Qd.Q(point);
  const Jet B = Qd.B(point);

  // Q_{A.B.} = [[B, -Q], [-Q, A]]; derivative slots: x = 2, y = 3.
  const Jet Qlo[2][2] = {{B, jet_neg(Q)}, {jet_neg(Q), A}};

  auto dx = [](const Jet& j) { return j.derivative(2); };
  auto dy = [](const Jet& j) { return j.derivative(3); };
  // eth^1. = d_p + A d_x + Q d_y ; eth^2. = -d_q + Q d_x + B d_y
  auto eth1 = [&](const Jet& j) {
    return jet_add(j.derivative(1), jet_add(jet_mul(A, dx(j)), jet_mul(Q, dy(j))));
  };
  auto eth2 = [&](const Jet& j) {
    return jet_add(jet_neg(j.derivative(0)), jet_add(jet_mul(Q, dx(j)), jet_mul(B, dy(j))));
  };

  SpinorConnection sc;
  const double s2 = kSqrt2;
  const double is2 = 1.0 / kSqrt2;

  for (int D = 0; D < 2; ++D) {
    // d^A. Q_{A. D.} with d^A. = (d_y, -d_x)
    const Cplx h1 = dy(Qlo[0][D]).value() - dx(Qlo[1][D]).value();
    // eth^A. Q_{A. D.}
    const Cplx h2 = eth1(Qlo[0][D]).value() + eth2(Qlo[1][D]).value();
    sc.und[1][1][D] = -is2 * h1;  // Gamma_{12 2 D.}
    sc.und[2][1][D] = -s2 * h2;   // Gamma_{22 2 D.}
    // Gamma_{A.B. 2 D.} = sqrt2 d_(A. Q_B.) D.
    const Cplx dxQ0 = dx(Qlo[0][D]).value();
    const Cplx dxQ1 = dx(Qlo[1][D]).value();
    const Cplx dyQ0 = dy(Qlo[0][D]).value();
    const Cplx dyQ1 = dy(Qlo[1][D]).value();
    sc.dot[0][1][D] = s2 * dxQ0;
    sc.dot[1][1][D] = s2 * 0.5 * (dxQ1 + dyQ0);
    sc.dot[2][1][D] = s2 * dyQ1;
  }
  return sc;
}

}  // namespace nsl
