#include "nsl/catalog.hpp"

#include <cmath>

#include "nsl/errors.hpp"

namespace nsl {

namespace {

constexpr unsigned Mq = 1, Mp = 2, Mx = 4, My = 8;
constexpr unsigned Mall = Mq | Mp | Mx | My;

ScalarField bind_slot(const MetricFamily& fam, const Bindings& b, const std::string& name) {
  const FunctionSlot* slot = nullptr;
  for (const auto& s : fam.functions) {
    if (s.name == name) { slot = &s; break; }
  }
  if (!slot) throw UnboundSlot("family '" + fam.id + "' has no slot '" + name + "'");
  auto it = b.functions.find(name);
  const std::string src = (it != b.functions.end()) ? it->second : slot->default_expr;
  dsl::Params params;
  for (const auto& p : fam.parameters) params[p.name] = p.default_value;
  for (const auto& [k, v] : b.params) params[k] = v;
  ScalarField f(src, b.mode, params, fam.chart);
  const unsigned used = dsl::coordinate_mask(f.expr);
  if ((used & ~slot->allowed_coords) != 0) {
    throw ArityViolation("slot '" + name + "' of family '" + fam.id +
                         "' uses a coordinate outside its arity contract: " + src);
  }
  return f;
}

Cplx bind_param(const MetricFamily& fam, const Bindings& b, const std::string& name) {
  auto it = b.params.find(name);
  if (it != b.params.end()) return it->second;
  for (const auto& p : fam.parameters) {
    if (p.name == name) return p.default_value;
  }
  throw UnboundSlot("parameter '" + name + "' of family '" + fam.id + "' is not bound");
}

dsl::Params merged_params(const MetricFamily& fam, const Bindings& b) {
  dsl::Params params;
  for (const auto& p : fam.parameters) params[p.name] = p.default_value;
  for (const auto& [k, v] : b.params) params[k] = v;
  return params;
}

SpinorFieldSpec sd_m(Mode mode) {
  return SpinorFieldSpec::constant(true, Cplx(0, 0), Cplx(1, 0), mode, "m_A = [0,1]");
}
SpinorFieldSpec sd_n_const(Mode mode) {
  return SpinorFieldSpec::constant(true, Cplx(1, 0), Cplx(0, 0), mode, "n_A = [1,0]");
}
SpinorFieldSpec asd_m(Mode mode) {
  return SpinorFieldSpec::constant(false, Cplx(0, 0), Cplx(1, 0), mode, "m_A. = [0,1]");
}
SpinorFieldSpec asd_n(Mode mode) {
  return SpinorFieldSpec::constant(false, Cplx(1, 0), Cplx(0, 0), mode, "n_A. = [1,0]");
}

// Derivative of a bound expression as a field over the same chart.
ScalarField derived(const ScalarField& f, int slot) {
  ScalarField g = f;
  g.expr = dsl::differentiate(f.expr, slot);
  return g;
}

MetricInstance plebanski_instance(const MetricFamily& fam, const Bindings& b,
                                  FieldFn A, FieldFn Q, FieldFn B) {
  MetricInstance inst;
  inst.family_id = fam.id;
  inst.mode = b.mode;
  inst.chart = fam.chart;
  inst.plebanski = PlebanskiData{std::move(A), std::move(Q), std::move(B), b.mode};
  inst.frame = plebanski_frame(*inst.plebanski);
  inst.params = merged_params(fam, b);
  inst.default_seed = fam.seed;
  inst.claimed_type = fam.claimed_type;
  return inst;
}

MetricInstance legs_instance(const MetricFamily& fam, const Bindings& b,
                             std::function<Mat4J(const Point4&)> legs) {
  MetricInstance inst;
  inst.family_id = fam.id;
  inst.mode = b.mode;
  inst.chart = fam.chart;
  MetricFrame frame;
  frame.mode = b.mode;
  frame.eval = [legs, mode = b.mode](const Point4& pt) {
    FramePoint fp;
    fp.mode = mode;
    fp.e = legs(pt);
    fp.g = metric_from_legs(fp.e);
    // frame vectors: E_a^mu is the transposed inverse of the leg matrix
    const Mat4J W = invert4(fp.e);
    for (int a = 0; a < 4; ++a) {
      for (int mu = 0; mu < 4; ++mu) fp.E[a][mu] = W[mu][a];
    }
    return fp;
  };
  inst.frame = frame;
  inst.params = merged_params(fam, b);
  inst.default_seed = fam.seed;
  inst.claimed_type = fam.claimed_type;
  return inst;
}

// Inequality guard reading a conformal curvature coefficient of the fast path.
std::function<Cplx(const Point4&)> cup_guard(const MetricInstance& inst, int index) {
  const PlebanskiData pd = *inst.plebanski;
  return [pd, index](const Point4& pt) { return plebanski_curvature(pd, pt).cup()[index]; };
}

std::function<Cplx(const Point4&)> delta_guard(const MetricInstance& inst) {
  const PlebanskiData pd = *inst.plebanski;
  return [pd](const Point4& pt) { return type_delta(plebanski_curvature(pd, pt).cup()); };
}

// ---------------------------------------------------------------------------
// family builders
// ---------------------------------------------------------------------------

MetricInstance build_weak_hh(const MetricFamily& fam, const Bindings& b) {
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField Q = bind_slot(fam, b, "Q");
  ScalarField B = bind_slot(fam, b, "B");
  MetricInstance inst = plebanski_instance(fam, b, field_of(A), field_of(Q), field_of(B));
  inst.fields = {{"A", A}, {"Q", Q}, {"B", B}};
  inst.congruences.push_back({sd_m(b.mode), true});
  return inst;
}

MetricInstance build_sesqui_pp(const MetricFamily& fam, const Bindings& b) {
  // chart (q, p, x, z); the generator value z is the fourth coordinate
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField Q = bind_slot(fam, b, "Q");
  ScalarField Sg = bind_slot(fam, b, "Sigma");
  ScalarField Om = bind_slot(fam, b, "Omega");
  ScalarField Sz = derived(Sg, 3), Sq = derived(Sg, 0), Sp = derived(Sg, 1);
  const Mode mode = b.mode;
  auto legs = [=](const Point4& pt) {
    const Jet a = A.eval_jet(pt), q = Q.eval_jet(pt);
    const Jet sz = Sz.eval_jet(pt), sq = Sq.eval_jet(pt), sp = Sp.eval_jet(pt);
    const Jet om = Om.eval_jet(pt);
    const Jet x = Jet::seed(pt, 2, mode), z = Jet::seed(pt, 3, mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    const Jet xmsz = x - sz;
    // B = (x - Sigma_z) Omega + z Sigma_p - Sigma_q - 2 z Q - z^2 A
    const Jet Bv = jet_mul(xmsz, om) + jet_mul(z, sp) - sq -
                   2.0 * jet_mul(z, q) - jet_mul(jet_mul(z, z), a);
    Mat4J e;
    for (auto& row : e) row.fill(zero);
    e[0][0] = jet_neg(one);
    e[2][1] = one;
    e[3][0] = jet_neg(q); e[3][1] = a; e[3][2] = jet_neg(one);
    // e2 = z dx + (x - Sigma_z) dz - (Sigma_q + B) dq + (Q - Sigma_p) dp
    e[1][0] = jet_neg(sq + Bv);
    e[1][1] = q - sp;
    e[1][2] = z;
    e[1][3] = xmsz;
    return e;
  };
  MetricInstance inst = legs_instance(fam, b, legs);
  inst.fields = {{"A", A}, {"Q", Q}, {"Sigma", Sg}, {"Omega", Om}};
  inst.congruences.push_back({sd_m(mode), true});
  inst.congruences.push_back(
      {SpinorFieldSpec::dotted_z(coordinate_field(3, mode), mode, "m_A. = [z,1]"), false});
  // metric degenerates where Sigma_z - x -> 0
  inst.singular_guards.push_back([=](const Point4& pt) {
    return jet_sub(Sz.eval_jet(pt), Jet::seed(pt, 2, mode));
  });
  return inst;
}

MetricInstance build_sesqui_mm(const MetricFamily& fam, const Bindings& b) {
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField Q = bind_slot(fam, b, "Q");
  ScalarField B = bind_slot(fam, b, "B");
  ScalarField Qx = derived(Q, 2);
  MetricInstance inst = plebanski_instance(fam, b, field_of(A), field_of(Q), field_of(B));
  inst.fields = {{"A", A}, {"Q", Q}, {"B", B}};
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.congruences.push_back({asd_m(b.mode), false});  // expands, M_2 = -sqrt2 Q_x
  inst.inequality_guards.push_back(
      [Qx](const Point4& pt) { return Qx.eval_value(pt); });
  return inst;
}

MetricInstance build_walker_2sided(const MetricFamily& fam, const Bindings& b) {
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField Q = bind_slot(fam, b, "Q");
  ScalarField B = bind_slot(fam, b, "B");
  MetricInstance inst = plebanski_instance(fam, b, field_of(A), field_of(Q), field_of(B));
  inst.fields = {{"A", A}, {"Q", Q}, {"B", B}};
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.congruences.push_back({asd_m(b.mode), true});
  return inst;
}

MetricInstance build_walker_ne_pp(const MetricFamily& fam, const Bindings& b) {
  // chart (q, p, w, y); the generator value w is the third coordinate
  ScalarField Q = bind_slot(fam, b, "Q");
  ScalarField B = bind_slot(fam, b, "B");
  ScalarField Sg = bind_slot(fam, b, "Sigma");
  ScalarField Om = bind_slot(fam, b, "Omega");
  ScalarField Sw = derived(Sg, 2), Sq = derived(Sg, 0);
  const Mode mode = b.mode;
  auto legs = [=](const Point4& pt) {
    const Jet q = Q.eval_jet(pt), bb = B.eval_jet(pt);
    const Jet sw = Sw.eval_jet(pt), sq = Sq.eval_jet(pt);
    const Jet om = Om.eval_jet(pt);
    const Jet w = Jet::seed(pt, 2, mode), y = Jet::seed(pt, 3, mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    const Jet ymsw = y - sw;
    Mat4J e;
    for (auto& row : e) row.fill(zero);
    e[0][0] = jet_neg(one);
    e[2][1] = one;
    // e2 = -dy + Q dp - B dq
    e[1][0] = jet_neg(bb); e[1][1] = q; e[1][3] = jet_neg(one);
    // e4 = w dy + (y - Sigma_w) dw - (Sigma_q + Q) dq
    //      + ((y - Sigma_w) Omega - w Sigma_q - 2 w Q - w^2 B) dp
    e[3][0] = jet_neg(sq + q);
    e[3][1] = jet_mul(ymsw, om) - jet_mul(w, sq) - 2.0 * jet_mul(w, q) -
              jet_mul(jet_mul(w, w), bb);
    e[3][2] = ymsw;
    e[3][3] = w;
    return e;
  };
  MetricInstance inst = legs_instance(fam, b, legs);
  inst.fields = {{"Q", Q}, {"B", B}, {"Sigma", Sg}, {"Omega", Om}};
  inst.congruences.push_back({sd_m(mode), true});
  inst.congruences.push_back({asd_m(mode), true});
  inst.congruences.push_back(
      {SpinorFieldSpec::dotted_w(coordinate_field(2, mode), mode, "n_A. = [1,w]"), false});
  inst.singular_guards.push_back([=](const Point4& pt) {
    return jet_sub(Sw.eval_jet(pt), Jet::seed(pt, 3, mode));
  });
  return inst;
}

MetricInstance build_walker_ne_mm(const MetricFamily& fam, const Bindings& b) {
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField Q = bind_slot(fam, b, "Q");
  ScalarField B = bind_slot(fam, b, "B");
  ScalarField Qy = derived(Q, 3);
  MetricInstance inst = plebanski_instance(fam, b, field_of(A), field_of(Q), field_of(B));
  inst.fields = {{"A", A}, {"Q", Q}, {"B", B}};
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.congruences.push_back({asd_m(b.mode), true});
  inst.congruences.push_back({asd_n(b.mode), false});  // expands, N_2 = -sqrt2 Q_y
  inst.inequality_guards.push_back([Qy](const Point4& pt) { return Qy.eval_value(pt); });
  return inst;
}

MetricInstance build_walker_pk(const MetricFamily& fam, const Bindings& b) {
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField B = bind_slot(fam, b, "B");
  MetricInstance inst = plebanski_instance(fam, b, field_of(A),
                                           constant_field(Cplx(0, 0), b.mode), field_of(B));
  inst.fields = {{"A", A}, {"B", B}};
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.congruences.push_back({asd_m(b.mode), true});
  inst.congruences.push_back({asd_n(b.mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 2));  // C^(3) != 0
  inst.inequality_guards.push_back(delta_guard(inst));   // not type D
  return inst;
}

MetricInstance build_typeII_ne(const MetricFamily& fam, const Bindings& b) {
  // chart (q, p, x, n)
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField B = bind_slot(fam, b, "B");
  const Mode mode = b.mode;
  auto legs = [=](const Point4& pt) {
    const Jet a = A.eval_jet(pt), bb = B.eval_jet(pt);
    const Jet p = Jet::seed(pt, 1, mode), n = Jet::seed(pt, 3, mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    const Jet pmb = p - bb;
    Mat4J e;
    for (auto& row : e) row.fill(zero);
    e[0][0] = jet_neg(one);
    e[2][1] = one;
    e[3][2] = jet_neg(one);  // e4 = -dx
    // e2 = n dp + (p - B) dn - A (p - B) dq
    e[1][0] = jet_neg(jet_mul(a, pmb));
    e[1][1] = n;
    e[1][3] = pmb;
    return e;
  };
  MetricInstance inst = legs_instance(fam, b, legs);
  inst.fields = {{"A", A}, {"B", B}};
  inst.congruences.push_back({sd_m(mode), true});
  inst.congruences.push_back(
      {SpinorFieldSpec::undotted_n(coordinate_field(3, mode), mode, "n_A = [1,n]"), false});
  inst.congruences.push_back({asd_m(mode), true});
  inst.congruences.push_back({asd_n(mode), true});
  inst.singular_guards.push_back([=](const Point4& pt) {
    return jet_sub(B.eval_jet(pt), Jet::seed(pt, 1, mode));
  });
  // delta != 0: A B_n + B_q != 0
  ScalarField Bn = derived(B, 3), Bq = derived(B, 0);
  inst.inequality_guards.push_back([=](const Point4& pt) {
    return A.eval_value(pt) * Bn.eval_value(pt) + Bq.eval_value(pt);
  });
  // C^(3) numerator: A_nn (B-p)^2 + (B-p) d_n(A B_n + B_q) - B_n (A B_n + B_q)
  ScalarField Ann = derived(derived(A, 3), 3);
  ScalarField An = derived(A, 3), Bnn = derived(Bn, 3), Bqn = derived(Bq, 3);
  inst.inequality_guards.push_back([=](const Point4& pt) {
    const Cplx bmp = B.eval_value(pt) - pt[1];
    const Cplx s = A.eval_value(pt) * Bn.eval_value(pt) + Bq.eval_value(pt);
    const Cplx ds = An.eval_value(pt) * Bn.eval_value(pt) +
                    A.eval_value(pt) * Bnn.eval_value(pt) + Bqn.eval_value(pt);
    return Ann.eval_value(pt) * bmp * bmp + bmp * ds - Bn.eval_value(pt) * s;
  });
  return inst;
}

MetricInstance build_typeD_ne(const MetricFamily& fam, const Bindings& b) {
  // chart (q, p, x, z)
  ScalarField F = bind_slot(fam, b, "F");
  ScalarField Fz = derived(F, 3);
  const Mode mode = b.mode;
  auto legs = [=](const Point4& pt) {
    const Jet f = F.eval_jet(pt), fz = Fz.eval_jet(pt);
    const Jet p = Jet::seed(pt, 1, mode), z = Jet::seed(pt, 3, mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    Mat4J e;
    for (auto& row : e) row.fill(zero);
    e[0][0] = jet_neg(one);
    e[2][1] = one;
    e[3][2] = jet_neg(one);
    // e2 = F dp + (p - z) F_z dz
    e[1][1] = f;
    e[1][3] = jet_mul(p - z, fz);
    return e;
  };
  MetricInstance inst = legs_instance(fam, b, legs);
  inst.fields = {{"F", F}};
  inst.congruences.push_back({sd_m(mode), true});
  inst.congruences.push_back(
      {SpinorFieldSpec::undotted_n(field_of(F), mode, "n_A = [1,F]"), false});
  inst.congruences.push_back({asd_m(mode), true});
  inst.congruences.push_back({asd_n(mode), true});
  inst.singular_guards.push_back([=](const Point4& pt) {
    return Jet::seed(pt, 3, mode) - Jet::seed(pt, 1, mode);  // z - p
  });
  inst.singular_guards.push_back([=](const Point4& pt) { return Fz.eval_jet(pt); });
  // type-D condition: d_z d_q ln F_z != 0  <=>  (F_zq F_z - F_z... ) / F_z^2;
  // use the numerator F_zzq F_z - F_zz F_zq
  ScalarField Fzz = derived(Fz, 3), Fzq = derived(Fz, 0), Fzzq = derived(derived(Fz, 3), 0);
  inst.inequality_guards.push_back([=](const Point4& pt) {
    return Fzzq.eval_value(pt) * Fz.eval_value(pt) -
           Fzz.eval_value(pt) * Fzq.eval_value(pt);
  });
  return inst;
}

MetricInstance build_typeD_2n(const MetricFamily& fam, const Bindings& b) {
  ScalarField A = bind_slot(fam, b, "A");
  ScalarField B = bind_slot(fam, b, "B");
  MetricInstance inst = plebanski_instance(fam, b, field_of(A),
                                           constant_field(Cplx(0, 0), b.mode), field_of(B));
  inst.fields = {{"A", A}, {"B", B}};
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.congruences.push_back({sd_n_const(b.mode), true});
  inst.congruences.push_back({asd_m(b.mode), true});
  inst.congruences.push_back({asd_n(b.mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 2));  // A_xx + B_yy != 0
  return inst;
}

FieldFn sd_family_A(Cplx M0, ScalarField P, ScalarField Om, Mode mode) {
  return [=](const Point4& pt) {
    const Jet x = Jet::seed(pt, 2, mode);
    return M0 * jet_mul(x, x) + jet_mul(P.eval_jet(pt), x) + Om.eval_jet(pt);
  };
}
FieldFn sd_family_B(Cplx M0, ScalarField N, Mode mode) {
  return [=](const Point4& pt) {
    const Jet y = Jet::seed(pt, 3, mode);
    return Cplx(-1, 0) * M0 * jet_mul(y, y) + jet_mul(N.eval_jet(pt), y);
  };
}

MetricInstance build_sd_III(const MetricFamily& fam, const Bindings& b) {
  const Cplx M0 = bind_param(fam, b, "M0");
  ScalarField N = bind_slot(fam, b, "N");
  ScalarField P = bind_slot(fam, b, "P");
  ScalarField Om = bind_slot(fam, b, "Omega");
  MetricInstance inst = plebanski_instance(fam, b, sd_family_A(M0, P, Om, b.mode),
                                           constant_field(Cplx(0, 0), b.mode),
                                           sd_family_B(M0, N, b.mode));
  inst.fields = {{"N", N}, {"P", P}, {"Omega", Om}};
  inst.params["M0"] = M0;
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 1));  // C^(2) != 0
  return inst;
}

MetricInstance build_sd_N(const MetricFamily& fam, const Bindings& b) {
  const Cplx M0 = bind_param(fam, b, "M0");
  ScalarField Sg = bind_slot(fam, b, "Sigma");
  ScalarField Om = bind_slot(fam, b, "Omega");
  ScalarField P = derived(Sg, 1);                 // P = Sigma_p
  ScalarField Nn = derived(Sg, 0);
  Nn.expr = dsl::neg(Nn.expr);                    // N = -Sigma_q
  MetricInstance inst = plebanski_instance(fam, b, sd_family_A(M0, P, Om, b.mode),
                                           constant_field(Cplx(0, 0), b.mode),
                                           sd_family_B(M0, Nn, b.mode));
  inst.fields = {{"Sigma", Sg}, {"Omega", Om}, {"N", Nn}, {"P", P}};
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 0));  // C^(1) != 0
  return inst;
}

MetricInstance build_pkE_II(const MetricFamily& fam, const Bindings& b,
                            bool force_zero_sigma_omega) {
  const Cplx lambda = bind_param(fam, b, "Lambda");
  ScalarField Sg = bind_slot(fam, b, "Sigma");
  ScalarField Om = bind_slot(fam, b, "Omega");
  const Mode mode = b.mode;
  const Cplx hl = 0.5 * lambda;
  FieldFn A = [=](const Point4& pt) {
    const Jet x = Jet::seed(pt, 2, mode);
    return hl * jet_mul(x, x) + Om.eval_jet(pt);
  };
  FieldFn B = [=](const Point4& pt) {
    const Jet y = Jet::seed(pt, 3, mode);
    return hl * jet_mul(y, y) + Sg.eval_jet(pt);
  };
  MetricInstance inst = plebanski_instance(fam, b, A, constant_field(Cplx(0, 0), mode), B);
  inst.fields = {{"Sigma", Sg}, {"Omega", Om}};
  inst.lambda = lambda;
  inst.einstein = true;
  inst.congruences.push_back({sd_m(mode), true});
  if (force_zero_sigma_omega) inst.congruences.push_back({sd_n_const(mode), true});
  inst.congruences.push_back({asd_m(mode), true});
  inst.congruences.push_back({asd_n(mode), true});
  if (!force_zero_sigma_omega) {
    inst.inequality_guards.push_back(delta_guard(inst));  // stays type II
  }
  return inst;
}

MetricInstance build_dxd_einstein(const MetricFamily& fam, const Bindings& b) {
  const Cplx lambda = bind_param(fam, b, "Lambda");
  const Mode mode = b.mode;
  auto legs = [=](const Point4& pt) {
    const Jet q = Jet::seed(pt, 0, mode), p = Jet::seed(pt, 1, mode);
    const Jet x = Jet::seed(pt, 2, mode), y = Jet::seed(pt, 3, mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    const Cplx hl = 0.5 * lambda;
    const Jet f1 = one + hl * jet_mul(x, p);
    const Jet f2 = one + hl * jet_mul(y, q);
    Mat4J e;
    for (auto& row : e) row.fill(zero);
    e[0][0] = jet_inv(f2);              // e1 = dq / F2
    e[1][3] = jet_inv(f2);              // e2 = dy / F2
    e[2][1] = jet_inv(f1);              // e3 = dp / F1
    e[3][2] = jet_inv(f1);              // e4 = dx / F1
    return e;
  };
  MetricInstance inst = legs_instance(fam, b, legs);
  inst.lambda = lambda;
  inst.einstein = true;
  inst.congruences.push_back({sd_m(mode), true});
  inst.congruences.push_back({sd_n_const(mode), true});
  inst.congruences.push_back({asd_m(mode), true});
  inst.congruences.push_back({asd_n(mode), true});
  const Cplx hl = 0.5 * lambda;
  inst.singular_guards.push_back([=](const Point4& pt) {
    return Jet::constant(Cplx(1, 0) + hl * cx_mul(pt[2], pt[1]), mode);
  });
  inst.singular_guards.push_back([=](const Point4& pt) {
    return Jet::constant(Cplx(1, 0) + hl * cx_mul(pt[3], pt[0]), mode);
  });
  return inst;
}

MetricInstance build_pkE_III(const MetricFamily& fam, const Bindings& b) {
  ScalarField Phi = bind_slot(fam, b, "Phi");
  ScalarField Om = bind_slot(fam, b, "Omega");
  ScalarField Pp = derived(Phi, 1), Pq = derived(Phi, 0);
  const Mode mode = b.mode;
  FieldFn A = [=](const Point4& pt) {
    const Jet x = Jet::seed(pt, 2, mode);
    return jet_mul(Pp.eval_jet(pt), x) + Om.eval_jet(pt);
  };
  FieldFn B = [=](const Point4& pt) {
    const Jet y = Jet::seed(pt, 3, mode);
    return jet_mul(Pq.eval_jet(pt), y);
  };
  MetricInstance inst = plebanski_instance(fam, b, A, constant_field(Cplx(0, 0), mode), B);
  inst.fields = {{"Phi", Phi}, {"Omega", Om}};
  inst.einstein = true;
  inst.congruences.push_back({sd_m(mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 1));  // Phi_pq != 0
  return inst;
}

MetricInstance build_pkE_N(const MetricFamily& fam, const Bindings& b) {
  ScalarField Om = bind_slot(fam, b, "Omega");
  MetricInstance inst = plebanski_instance(fam, b, field_of(Om),
                                           constant_field(Cplx(0, 0), b.mode),
                                           constant_field(Cplx(0, 0), b.mode));
  inst.fields = {{"Omega", Om}};
  inst.einstein = true;
  inst.congruences.push_back({sd_m(b.mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 0));  // Omega_qq != 0
  // the three null Killing vectors admitted for any Omega
  inst.killing.push_back({"K1", {"0", "0", "1", "0"}, Cplx(0, 0)});
  inst.killing.push_back({"K2", {"0", "0", "0", "1"}, Cplx(0, 0)});
  inst.killing.push_back({"K3", {"0", "0", "q", "p"}, Cplx(0, 0)});
  return inst;
}

MetricInstance build_nullK_III(const MetricFamily& fam, const Bindings& b) {
  ScalarField H = bind_slot(fam, b, "H");
  ScalarField Om = bind_slot(fam, b, "Omega");
  const Mode mode = b.mode;
  auto legs = [=](const Point4& pt) {
    const Jet h = H.eval_jet(pt), om = Om.eval_jet(pt);
    const Jet p = Jet::seed(pt, 1, mode), x = Jet::seed(pt, 2, mode);
    const Jet one = Jet::constant(Cplx(1, 0), mode);
    const Jet zero = Jet::constant(Cplx(0, 0), mode);
    const Jet tph = 2.0 * p + h;
    Mat4J e;
    for (auto& row : e) row.fill(zero);
    e[0][0] = jet_neg(one);
    e[1][3] = jet_neg(tph);                          // e2 = -(2p+H) dy
    e[2][1] = one;
    e[3][1] = om - jet_div(x, tph);                  // e4 = -dx + (Om - x/(2p+H)) dp
    e[3][2] = jet_neg(one);
    return e;
  };
  MetricInstance inst = legs_instance(fam, b, legs);
  inst.fields = {{"H", H}, {"Omega", Om}};
  inst.einstein = true;  // Lambda = 0
  inst.congruences.push_back({sd_m(mode), true});
  inst.singular_guards.push_back([=](const Point4& pt) {
    return 2.0 * Jet::seed(pt, 1, mode) + H.eval_jet(pt);
  });
  ScalarField Hq = derived(H, 0);
  inst.inequality_guards.push_back([Hq](const Point4& pt) { return Hq.eval_value(pt); });
  inst.killing.push_back({"K", {"0", "0", "0", "1"}, Cplx(0, 0)});
  return inst;
}

MetricInstance build_homothety_III(const MetricFamily& fam, const Bindings& b) {
  ScalarField Phi = bind_slot(fam, b, "Phi");
  ScalarField Pp = derived(Phi, 1), Pq = derived(Phi, 0);
  const Cplx chi0 = bind_param(fam, b, "chi0");
  const Mode mode = b.mode;
  FieldFn A = [=](const Point4& pt) {
    return jet_mul(Pp.eval_jet(pt), Jet::seed(pt, 2, mode));
  };
  FieldFn B = [=](const Point4& pt) {
    return jet_mul(Pq.eval_jet(pt), Jet::seed(pt, 3, mode));
  };
  MetricInstance inst = plebanski_instance(fam, b, A, constant_field(Cplx(0, 0), mode), B);
  inst.fields = {{"Phi", Phi}};
  inst.einstein = true;
  inst.congruences.push_back({sd_m(mode), true});
  inst.inequality_guards.push_back(cup_guard(inst, 1));
  KillingVectorSpec K{"K", {"0", "0", "2*chi0*x", "2*chi0*y"}, chi0};
  inst.killing.push_back(K);
  return inst;
}

MetricInstance build_type3_special(const MetricFamily& fam, const Bindings& b) {
  MetricInstance inst = build_sd_III(fam, b);
  // second SD congruence generated by the closed-form candidate value
  const Cplx M0 = bind_param(fam, b, "M0");
  FieldFn nf = candidate_n_field(M0, inst.fields.at("N"), inst.fields.at("P"),
                                 inst.fields.at("Omega"));
  inst.congruences.push_back(
      {SpinorFieldSpec::undotted_n(nf, b.mode, "n_A = [1,n]"), false});
  return inst;
}

// ---------------------------------------------------------------------------
// registry
// ---------------------------------------------------------------------------

std::vector<MetricFamily> make_registry() {
  std::vector<MetricFamily> fams;

  auto add = [&](MetricFamily f) { fams.push_back(std::move(f)); };

  add(MetricFamily{
      "weak-hh",
      "single nonexpanding SD congruence; three free functions of all four coordinates",
      "[deg]^{n} (x) [any]", "[II]^{n} (x) [I]",
      {"q", "p", "x", "y"},
      {{"A", Mall, "x^2 - y^2 + q*y"},
       {"Q", Mall, "q*x + p*y"},
       {"B", Mall, "(y^2 - x^2)/4"}},
      {}, true, 101,
      [](const MetricFamily& f, const Bindings& b) { return build_weak_hh(f, b); }});

  add(MetricFamily{
      "sesqui-pp",
      "nonexpanding SD plus expanding ASD congruence with twisting intersection",
      "{[deg]^{n} (x) [any]^{e}, [++]}", "{[II]^{n} (x) [I]^{e}, [++]}",
      {"q", "p", "x", "z"},
      {{"A", Mall, "z + x/2"},
       {"Q", Mall, "x/2 + z^2/4"},
       {"Sigma", Mq | Mp | My, "z^2/2 + q*z"},
       {"Omega", Mq | Mp | My, "q + z/2"}},
      {}, true, 102,
      [](const MetricFamily& f, const Bindings& b) { return build_sesqui_pp(f, b); }});

  add(MetricFamily{
      "sesqui-mm",
      "nonexpanding SD plus expanding ASD congruence, nontwisting intersection",
      "{[deg]^{n} (x) [any]^{e}, [--]}", "{[II]^{n} (x) [I]^{e}, [--]}",
      {"q", "p", "x", "y"},
      {{"A", Mall, "x^2 - y^2 + q*y"},
       {"Q", Mall, "x^2/2 + x*y"},
       {"B", Mq | Mp | My, "p*y^2/4 + y^3/12"}},
      {}, true, 103,
      [](const MetricFamily& f, const Bindings& b) { return build_sesqui_mm(f, b); }});

  add(MetricFamily{
      "walker-2sided",
      "two-sided Walker space: nonexpanding SD and ASD congruences",
      "[deg]^{n} (x) [deg]^{n}", "[II]^{n} (x) [II]^{n}",
      {"q", "p", "x", "y"},
      {{"A", Mall, "x^2 - y^2 + q*y"},
       {"Q", Mq | Mp | My, "y^2/2 + p*y"},
       {"B", Mq | Mp | My, "y^2/4 + q*y"}},
      {}, true, 104,
      [](const MetricFamily& f, const Bindings& b) { return build_walker_2sided(f, b); }});

  add(MetricFamily{
      "walker-ne-pp",
      "two-sided Walker plus second expanding ASD congruence, twisting intersection",
      "{[deg]^{n} (x) [deg]^{ne}, [--,++]}", "{[II]^{n} (x) [II]^{ne}, [--,++]}",
      {"q", "p", "w", "y"},
      {{"Q", Mq | Mp | My, "y^2/2 + p*y"},
       {"B", Mq | Mp | My, "y^2/4 + q*y"},
       {"Sigma", Mq | Mp | Mx, "w^2/2 + q*w"},
       {"Omega", Mq | Mp | Mx, "q + w/2"}},
      {}, true, 105,
      [](const MetricFamily& f, const Bindings& b) { return build_walker_ne_pp(f, b); }});

  add(MetricFamily{
      "walker-ne-mm",
      "two-sided Walker plus second expanding ASD congruence, nontwisting intersection",
      "{[deg]^{n} (x) [deg]^{ne}, [--,--]}", "{[II]^{n} (x) [II]^{ne}, [--,--]}",
      {"q", "p", "x", "y"},
      {{"A", Mq | Mp | Mx, "x^2 + q*x"},
       {"Q", Mq | Mp | My, "y^2/2"},
       {"B", Mq | Mp | My, "p*y^2/4"}},
      {}, true, 106,
      [](const MetricFamily& f, const Bindings& b) { return build_walker_ne_mm(f, b); }});

  add(MetricFamily{
      "walker-pk",
      "para-Kahler with one nonexpanding SD congruence; A(q,p,x), B(q,p,y)",
      "[deg]^{n} (x) [D]^{nn}", "[II]^{n} (x) [D]^{nn}",
      {"q", "p", "x", "y"},
      {{"A", Mq | Mp | Mx, "x^3"},
       {"B", Mq | Mp | My, "p*y^2"}},
      {}, true, 107,
      [](const MetricFamily& f, const Bindings& b) { return build_walker_pk(f, b); }});

  add(MetricFamily{
      "typeII-ne",
      "para-Kahler with second expanding SD congruence, generic type",
      "{[II]^{ne} (x) [D]^{nn}, [--,--,--,++]}", "{[II]^{ne} (x) [D]^{nn}, [--,--,--,++]}",
      {"q", "p", "x", "n"},
      {{"A", Mq | My, "n^2"},
       {"B", Mq | My, "q"}},
      {}, true, 108,
      [](const MetricFamily& f, const Bindings& b) { return build_typeII_ne(f, b); }});

  add(MetricFamily{
      "typeD-ne",
      "para-Kahler type D with second expanding SD congruence; one function of two variables",
      "{[D]^{ne} (x) [D]^{nn}, [--,--,--,++]}", "{[D]^{ne} (x) [D]^{nn}, [--,--,--,++]}",
      {"q", "p", "x", "z"},
      {{"F", Mq | My, "exp(q*z)"}},
      {}, true, 109,
      [](const MetricFamily& f, const Bindings& b) { return build_typeD_ne(f, b); }});

  add(MetricFamily{
      "typeD-2n",
      "double-Walker para-Kahler: A(p,x), B(q,y)",
      "[D]^{nn} (x) [D]^{nn}", "[D]^{nn} (x) [D]^{nn}",
      {"q", "p", "x", "y"},
      {{"A", Mp | Mx, "x^3"},
       {"B", Mq | My, "y^3"}},
      {}, true, 110,
      [](const MetricFamily& f, const Bindings& b) { return build_typeD_2n(f, b); }});

  add(MetricFamily{
      "sd-III",
      "self-dual type III: A = M x^2 + P x + Omega, B = -M y^2 + N y",
      "[III]^{n} (x) [O]^{n}", "[III]^{n} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"N", Mq | Mp, "p"},
       {"P", Mq | Mp, "q"},
       {"Omega", Mq | Mp, "q^2"}},
      {{"M0", Cplx(1, 0)}}, true, 111,
      [](const MetricFamily& f, const Bindings& b) { return build_sd_III(f, b); }});

  add(MetricFamily{
      "sd-N",
      "self-dual type N: constant M, N and P from a potential",
      "[N]^{n} (x) [O]^{n}", "[N]^{n} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"Sigma", Mq | Mp, "0"},
       {"Omega", Mq | Mp, "q^2"}},
      {{"M0", Cplx(1, 0)}}, true, 112,
      [](const MetricFamily& f, const Bindings& b) { return build_sd_N(f, b); }});

  add(MetricFamily{
      "pkE-II",
      "para-Kahler-Einstein, generic degenerate type",
      "[II]^{n} (x) [D]^{nn}", "[II]^{n} (x) [D]^{nn}",
      {"q", "p", "x", "y"},
      {{"Sigma", Mq | Mp, "exp(p)"},
       {"Omega", Mq | Mp, "q^2"}},
      {{"Lambda", Cplx(1, 0)}}, true, 113,
      [](const MetricFamily& f, const Bindings& b) { return build_pkE_II(f, b, false); }});

  add(MetricFamily{
      "dxd-einstein",
      "para-Kahler-Einstein product form; one constant",
      "[D]^{nn} (x) [D]^{nn}", "[D]^{nn} (x) [D]^{nn}",
      {"q", "p", "x", "y"},
      {},
      {{"Lambda", Cplx(1, 0)}}, true, 114,
      [](const MetricFamily& f, const Bindings& b) { return build_dxd_einstein(f, b); }});

  add(MetricFamily{
      "pkE-III",
      "Einstein with Lambda = 0, self-dual type III",
      "[III]^{n} (x) [O]^{n}", "[III]^{n} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"Phi", Mq | Mp, "q*p"},
       {"Omega", Mq | Mp, "exp(q)"}},
      {}, true, 115,
      [](const MetricFamily& f, const Bindings& b) { return build_pkE_III(f, b); }});

  add(MetricFamily{
      "pkE-N",
      "Einstein with Lambda = 0, self-dual type N; admits three null Killing vectors",
      "[N]^{n} (x) [O]^{n}", "[N]^{n} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"Omega", Mq | Mp, "exp(q)"}},
      {}, true, 116,
      [](const MetricFamily& f, const Bindings& b) { return build_pkE_N(f, b); }});

  // --- auxiliary entries (not summary rows) ---

  add(MetricFamily{
      "custom",
      "raw A/Q/B data in the adapted chart; claims the two-sided Walker pair",
      "[deg]^{n} (x) [any]", "",
      {"q", "p", "x", "y"},
      {{"A", Mall, "0"},
       {"Q", Mall, "0"},
       {"B", Mall, "0"}},
      {}, false, 119,
      [](const MetricFamily& f, const Bindings& b) {
        MetricInstance inst = build_weak_hh(f, b);
        inst.congruences.push_back({asd_m(b.mode), true});
        return inst;
      }});

  add(MetricFamily{
      "pkE-D",
      "para-Kahler-Einstein type D with the six-vector symmetry algebra",
      "[D]^{nn} (x) [D]^{nn}", "[D]^{nn} (x) [D]^{nn}",
      {"q", "p", "x", "y"},
      {{"Sigma", Mq | Mp, "0"},
       {"Omega", Mq | Mp, "0"}},
      {{"Lambda", Cplx(1, 0)}}, false, 120,
      [](const MetricFamily& f, const Bindings& b) {
        MetricInstance inst = build_pkE_II(f, b, true);
        const Cplx il = cx_div(Cplx(1, 0), inst.lambda);
        dsl::Params extra = inst.params;
        extra["invLambda"] = il;
        inst.params = extra;
        inst.killing.push_back({"K1", {"0", "1", "0", "0"}, Cplx(0, 0)});
        inst.killing.push_back({"K2", {"1", "0", "0", "0"}, Cplx(0, 0)});
        inst.killing.push_back({"K3", {"q", "0", "0", "-y"}, Cplx(0, 0)});
        inst.killing.push_back({"K4", {"0", "p", "-x", "0"}, Cplx(0, 0)});
        inst.killing.push_back({"K5", {"q^2", "0", "0", "-2*(q*y - invLambda)"}, Cplx(0, 0)});
        inst.killing.push_back({"K6", {"0", "p^2", "-2*(p*x + invLambda)", "0"}, Cplx(0, 0)});
        return inst;
      }});

  auto add_pkE_II_killing = [&](const std::string& id, const std::string& sigma,
                                const std::string& omega,
                                std::vector<KillingVectorSpec> vectors,
                                std::vector<std::string> guards, uint64_t seed) {
    add(MetricFamily{
        id, "para-Kahler-Einstein type II with symmetry",
        "[II]^{n} (x) [D]^{nn}", "[II]^{n} (x) [D]^{nn}",
        {"q", "p", "x", "y"},
        {{"Sigma", Mq | Mp, sigma}, {"Omega", Mq | Mp, omega}},
        {{"Lambda", Cplx(1, 0)}}, false, seed,
        [vectors, guards](const MetricFamily& f, const Bindings& b) {
          MetricInstance inst = build_pkE_II(f, b, false);
          dsl::Params extra = inst.params;
          extra["invLambda"] = cx_div(Cplx(1, 0), inst.lambda);
          inst.params = extra;
          for (const auto& k : vectors) inst.killing.push_back(k);
          for (const auto& g : guards) {
            ScalarField gf(g, b.mode, inst.params, f.chart);
            inst.singular_guards.push_back(field_of(gf));
          }
          return inst;
        }});
  };

  add_pkE_II_killing("pkE-II-k1", "exp(p)", "0",
                     {{"K1", {"1", "0", "0", "0"}, Cplx(0, 0)}}, {}, 121);
  add_pkE_II_killing(
      "pkE-II-k2a", "exp(2/p)", "0",
      {{"K1", {"1", "0", "0", "0"}, Cplx(0, 0)},
       {"K2", {"q", "p^2", "-2*(p*x + invLambda)", "-y"}, Cplx(0, 0)}},
      {"p"}, 122);
  add_pkE_II_killing(
      "pkE-II-k2b", "p^(-1)", "0",
      {{"K1", {"1", "0", "0", "0"}, Cplx(0, 0)},
       {"K2", {"q", "2*p", "-2*x", "-y"}, Cplx(0, 0)}},
      {"p"}, 123);
  add_pkE_II_killing(
      "pkE-II-k2c", "exp(-2*p)", "0",
      {{"K1", {"1", "0", "0", "0"}, Cplx(0, 0)},
       {"K2", {"q", "1", "0", "-y"}, Cplx(0, 0)}},
      {}, 124);
  add_pkE_II_killing("pkE-II-k3", "exp(q-p)", "(q-p)^2",
                     {{"K1", {"1", "1", "0", "0"}, Cplx(0, 0)}}, {}, 125);
  add_pkE_II_killing(
      "pkE-II-k4", "(q-p)^(-2)", "2*(q-p)^(-2)",
      {{"K1", {"1", "1", "0", "0"}, Cplx(0, 0)},
       {"K2", {"q", "p", "-x", "-y"}, Cplx(0, 0)}},
      {"q-p"}, 126);
  // the Omega factor carries the mirrored argument p-q; the q-p form fails
  // the second reduced symmetry equation (and the direct residual check)
  add_pkE_II_killing(
      "pkE-II-k5", "(1-exp(q-p))^(-2) - 1/2", "2*(1-exp(p-q))^(-2) - 1/2",
      {{"K1", {"1", "1", "0", "0"}, Cplx(0, 0)},
       {"K2",
        {"exp(q)", "exp(p)", "-exp(p)*(x + invLambda)", "exp(q)*(-y + invLambda)"},
        Cplx(0, 0)}},
      {"1-exp(q-p)", "1-exp(p-q)"}, 127);
  add_pkE_II_killing(
      "pkE-II-k6", "exp(-2*(q-p)) - 1/2", "1",
      {{"K1", {"1", "1", "0", "0"}, Cplx(0, 0)},
       {"K2", {"exp(q)", "0", "0", "exp(q)*(-y + invLambda)"}, Cplx(0, 0)}},
      {}, 128);

  add(MetricFamily{
      "homothety-III",
      "Einstein Lambda = 0 type III with a null proper homothety",
      "[III]^{n} (x) [O]^{n}", "[III]^{n} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"Phi", Mq | Mp, "q*p"}},
      {{"chi0", Cplx(1, 0)}}, false, 130,
      [](const MetricFamily& f, const Bindings& b) { return build_homothety_III(f, b); }});

  add(MetricFamily{
      "nullK-III",
      "Einstein Lambda = 0 type III with a null Killing vector",
      "[III]^{n} (x) [O]^{n}", "[III]^{n} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"H", Mq, "q"},
       {"Omega", Mq | Mp, "q^3"}},
      {}, false, 131,
      [](const MetricFamily& f, const Bindings& b) { return build_nullK_III(f, b); }});

  add(MetricFamily{
      "type3-i",
      "special solution (i) of the second-SD-congruence system",
      "[III]^{ne} (x) [O]^{n}", "[III]^{ne} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"N", Mq | Mp, "0"},
       {"P", Mq | Mp, "4/(4*p-q)"},
       {"Omega", Mq | Mp, "4*p/(4*p-q) - 1 - M0*p^2"}},
      {{"M0", Cplx(1, 0)}}, false, 132,
      [](const MetricFamily& f, const Bindings& b) {
        MetricInstance inst = build_type3_special(f, b);
        ScalarField g("(4*p-q)/500", b.mode, {}, f.chart);
        inst.singular_guards.push_back(field_of(g));
        return inst;
      }});

  add(MetricFamily{
      "type3-ii",
      "special solution (ii) of the second-SD-congruence system",
      "[III]^{ne} (x) [O]^{n}", "[III]^{ne} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"N", Mq | Mp, "0"},
       {"P", Mq | Mp, "4/(4*p-q) + p"},
       {"Omega", Mq | Mp, "0"}},
      {{"M0", Cplx(0, 0)}}, false, 133,
      [](const MetricFamily& f, const Bindings& b) {
        MetricInstance inst = build_type3_special(f, b);
        ScalarField g("(4*p-q)/500", b.mode, {}, f.chart);
        inst.singular_guards.push_back(field_of(g));
        return inst;
      }});

  add(MetricFamily{
      "type3-iii",
      "special solution (iii) of the second-SD-congruence system",
      "[III]^{ne} (x) [O]^{n}", "[III]^{ne} (x) [O]^{n}",
      {"q", "p", "x", "y"},
      {{"N", Mq | Mp, "1/(p-q)"},
       {"P", Mq | Mp, "0"},
       {"Omega", Mq | Mp, "0"}},
      {{"M0", Cplx(1, 0)}}, false, 134,
      [](const MetricFamily& f, const Bindings& b) {
        MetricInstance inst = build_type3_special(f, b);
        ScalarField g("(p-q)/300", b.mode, {}, f.chart);
        inst.singular_guards.push_back(field_of(g));
        return inst;
      }});

  return fams;
}

}  // namespace

const std::vector<MetricFamily>& all_families() {
  static const std::vector<MetricFamily> reg = make_registry();
  return reg;
}

std::vector<const MetricFamily*> list_families() {
  std::vector<const MetricFamily*> out;
  for (const auto& f : all_families()) {
    if (f.in_table) out.push_back(&f);
  }
  return out;
}

const MetricFamily* find_family(const std::string& id) {
  for (const auto& f : all_families()) {
    if (f.id == id) return &f;
  }
  return nullptr;
}

MetricInstance instantiate(const std::string& id, const Bindings& bindings) {
  const MetricFamily* fam = find_family(id);
  if (!fam) throw UnboundSlot("unknown metric family '" + id + "'");
  return fam->build(*fam, bindings);
}

Point4 MetricInstance::sample(std::mt19937_64& rng, int max_tries) const {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int attempt = 0; attempt < max_tries; ++attempt) {
    Point4 pt;
    for (int k = 0; k < 4; ++k) {
      const double re = uni(rng);
      const double im = (mode == Mode::Complex) ? uni(rng) : 0.0;
      pt[k] = Cplx(re, im);
    }
    bool ok = true;
    try {
      for (const auto& g : singular_guards) {
        if (std::abs(g(pt).value()) < 1e-3) { ok = false; break; }
      }
      if (ok) {
        for (const auto& g : inequality_guards) {
          if (std::abs(g(pt)) <= 1e-3) { ok = false; break; }
        }
      }
      if (ok) {
        // the metric must be evaluable and nondegenerate here
        frame.eval(pt);
      }
    } catch (const EvalError&) {
      ok = false;
    } catch (const DegenerateMetric&) {
      ok = false;
    }
    if (ok) return pt;
  }
  throw SamplingFailure("no nonsingular sample point found for family '" + family_id + "'");
}

CurvatureData MetricInstance::curvature(const Point4& point) const {
  if (plebanski) return plebanski_curvature(*plebanski, point);
  return oracle_curvature(frame, point);
}

double killing_residual(const MetricInstance& inst, const KillingVectorSpec& K,
                        const Point4& point) {
  const Mode mode = inst.mode;
  Jet Kup[4];
  for (int mu = 0; mu < 4; ++mu) {
    ScalarField f(K.components[mu], mode, inst.params, inst.chart);
    Kup[mu] = f.eval_jet(point);
  }
  const FramePoint fp = inst.frame.eval(point);
  const ConnectionPoint conn = connection_at(fp);

  // K_nu = g_{nu mu} K^mu as jets, then nabla_mu K_nu = d_mu K_nu - Gamma^r_{mu nu} K_r.
  Jet Klo[4];
  for (int nu = 0; nu < 4; ++nu) {
    Jet acc = Jet::constant(Cplx(0, 0), mode);
    for (int mu = 0; mu < 4; ++mu) acc = acc + jet_mul(fp.g[nu][mu], Kup[mu]);
    Klo[nu] = acc;
  }
  double gscale = 0;
  for (int m = 0; m < 4; ++m)
    for (int n = 0; n < 4; ++n) gscale = std::max(gscale, std::abs(fp.g[m][n].value()));

  double worst = 0;
  for (int m = 0; m < 4; ++m) {
    for (int n = m; n < 4; ++n) {
      Cplx dm = Klo[n].derivative(m).value();
      Cplx dn = Klo[m].derivative(n).value();
      Cplx gamma_term(0, 0);
      for (int r = 0; r < 4; ++r) {
        gamma_term += cx_mul(conn.christoffel[r][m][n].value(), Klo[r].value());
      }
      const Cplx sym = 0.5 * (dm + dn) - gamma_term;
      const Cplx target = K.chi0 * fp.g[m][n].value();
      worst = std::max(worst, std::abs(sym - target));
    }
  }
  return worst / (1.0 + gscale);
}

std::array<Cplx, 2> master_lambda_residuals(const ScalarField& delta1,
                                            const ScalarField& delta2,
                                            const ScalarField& Sigma, const ScalarField& Omega,
                                            Cplx lambda, const Point4& point) {
  const Jet d1 = delta1.eval_jet(point);
  const Jet d2 = delta2.eval_jet(point);
  const Jet S = Sigma.eval_jet(point);
  const Jet O = Omega.eval_jet(point);
  const Cplx il = cx_div(Cplx(1, 0), lambda);
  const Cplx d1q = d1.derivative(0).value();
  const Cplx d1qqq = d1.partial(MultiIndex{{3, 0, 0, 0}});
  const Cplx d2p = d2.derivative(1).value();
  const Cplx d2ppp = d2.partial(MultiIndex{{0, 3, 0, 0}});
  std::array<Cplx, 2> r;
  r[0] = cx_mul(d1.value(), S.derivative(0).value()) +
         cx_mul(d2.value(), S.derivative(1).value()) +
         2.0 * cx_mul(S.value(), d1q) + cx_mul(il, d1qqq);
  r[1] = cx_mul(d1.value(), O.derivative(0).value()) +
         cx_mul(d2.value(), O.derivative(1).value()) +
         2.0 * cx_mul(O.value(), d2p) + cx_mul(il, d2ppp);
  return r;
}

std::array<Cplx, 2> master_null_residuals(const ScalarField& eps, Cplx chi0,
                                          const ScalarField& Phi, const ScalarField& Omega,
                                          const Point4& point) {
  const Jet e = eps.eval_jet(point);
  const Jet Ph = Phi.eval_jet(point);
  const Jet O = Omega.eval_jet(point);
  std::array<Cplx, 2> r;
  // eps_q Phi_q = -eps_qq ; -2 chi0 Omega + eps_p Phi_p = eps_pp
  r[0] = cx_mul(e.derivative(0).value(), Ph.derivative(0).value()) +
         e.partial(MultiIndex{{2, 0, 0, 0}});
  r[1] = -2.0 * cx_mul(chi0, O.value()) +
         cx_mul(e.derivative(1).value(), Ph.derivative(1).value()) -
         e.partial(MultiIndex{{0, 2, 0, 0}});
  return r;
}

std::array<Cplx, 7> master_heavenly_residuals(const ScalarField& delta1,
                                              const ScalarField& delta2,
                                              const ScalarField& eps1, const ScalarField& eps2,
                                              Cplx a0, Cplx b0, Cplx chi0,
                                              const ScalarField& Phi, const ScalarField& Omega,
                                              const Point4& point) {
  const Jet d1 = delta1.eval_jet(point);
  const Jet d2 = delta2.eval_jet(point);
  const Jet e1 = eps1.eval_jet(point);
  const Jet e2 = eps2.eval_jet(point);
  const Jet Ph = Phi.eval_jet(point);
  const Jet O = Omega.eval_jet(point);

  std::array<Cplx, 7> r;
  r[0] = d1.derivative(1).value() - cx_mul(a0, jet_exp(Ph).value());
  r[1] = d2.derivative(0).value() - cx_mul(b0, jet_exp(jet_neg(Ph)).value());
  // delta1 Phi_q + delta2 Phi_p + delta2_p - delta1_q = const
  const Jet lhs = jet_mul(d1, Ph.derivative(0)) + jet_mul(d2, Ph.derivative(1)) +
                  d2.derivative(1) - d1.derivative(0);
  r[2] = lhs.derivative(0).value();
  r[3] = lhs.derivative(1).value();
  // eps2 Phi_q = -eps2_q
  r[4] = cx_mul(e2.value(), Ph.derivative(0).value()) + e2.derivative(0).value();
  // delta1 Om_q + delta2 Om_p - 2 Om (chi0 - delta2_p) + eps1 Phi_p = eps1_p
  r[5] = cx_mul(d1.value(), O.derivative(0).value()) +
         cx_mul(d2.value(), O.derivative(1).value()) -
         2.0 * cx_mul(O.value(), chi0 - d2.derivative(1).value()) +
         cx_mul(e1.value(), Ph.derivative(1).value()) - e1.derivative(1).value();
  // 2 Om delta2_q = eps1_q - eps2_p
  r[6] = 2.0 * cx_mul(O.value(), d2.derivative(0).value()) - e1.derivative(0).value() +
         e2.derivative(1).value();
  return r;
}

SdKillingReport sd_killing_catalog_check(const MetricInstance& inst, const Point4& point) {
  SdKillingReport rep;
  const FramePoint fp = inst.frame.eval(point);
  const ConnectionPoint conn = connection_at(fp);
  for (const auto& K : inst.killing) {
    SdKillingReport::Entry e;
    e.name = K.name;
    e.residual = killing_residual(inst, K, point);
    e.has_congruence = false;
    e.congruence_expanding = false;
    e.congruence_residual = 0;
    if (inst.family_id == "pkE-N") {
      // ASD congruence attached to the null direction of each vector
      SpinorFieldSpec spec = asd_m(inst.mode);
      if (K.name == "K2") {
        spec = asd_n(inst.mode);
      } else if (K.name == "K3") {
        ScalarField z("-p/q", inst.mode, {}, inst.chart);
        spec = SpinorFieldSpec::dotted_z(field_of(z), inst.mode, "k_A. = [-p/q, 1]");
      }
      CongruenceReport cr = verify_null_string(spec, fp, conn.spinor, point);
      e.has_congruence = true;
      e.congruence_expanding = !cr.nonexpanding;
      e.congruence_residual = cr.residual;
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

FieldFn candidate_n_field(Cplx M0, ScalarField N, ScalarField P, ScalarField Omega) {
  return [=](const Point4& pt) {
    const Jet n = N.eval_jet(pt);
    const Jet p = P.eval_jet(pt);
    const Jet om = Omega.eval_jet(pt);
    const Mode mode = n.mode();
    const Jet x = Jet::seed(pt, 2, mode);
    const Jet y = Jet::seed(pt, 3, mode);
    auto dq = [](const Jet& j) { return j.derivative(0); };
    auto dp = [](const Jet& j) { return j.derivative(1); };
    const Jet a = dp(n) + dq(p);  // N_p + P_q
    // C2 = -(N_p + P_q) for constant M; C1/2 as in the closed family formulas
    const Jet c2 = jet_neg(a);
    const Jet c1_half = M0 * (2.0 * jet_mul(jet_mul(x, y), a)) +
                        jet_mul(y, jet_neg(dp(dp(n))) + jet_mul(p, dp(n)) + M0 * (2.0 * dq(om))) -
                        jet_mul(x, dq(dq(p)) + jet_mul(n, dq(p))) -
                        jet_mul(n, dq(om)) - dq(dq(om));
    return jet_div(2.0 * c1_half, 4.0 * c2);
  };
}

}  // namespace nsl
