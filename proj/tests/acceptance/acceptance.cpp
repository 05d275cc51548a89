// Acceptance suite: one criterion per section, one pass/fail line each.
// Every tolerance is pinned in code; the process exits nonzero if any
// criterion fails.

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

#include "nsl/fdcheck.hpp"
#include "nsl/report.hpp"
#include "support/random_expr.hpp"

using namespace nsl;

namespace {

int g_failures = 0;

void report(int number, const std::string& what, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s  (%s)\n", pass ? "PASS" : "FAIL", number, what.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

PlebanskiData random_pleb(std::mt19937_64& rng, Mode mode) {
  return PlebanskiData{field_of(ScalarField(nsl::testing::random_metric_expr(rng), mode)),
                       field_of(ScalarField(nsl::testing::random_metric_expr(rng), mode)),
                       field_of(ScalarField(nsl::testing::random_metric_expr(rng), mode)),
                       mode};
}

// --- 1: summary-table reproduction --------------------------------------

void criterion_1() {
  bool pass = true;
  std::string detail;
  for (const auto* fam : list_families()) {
    MetricInstance inst = instantiate(fam->id, {});
    ClassificationRun run = run_classification(inst, 20, fam->seed);
    const bool ok = run.aggregate_symbol == fam->claimed_type && run.confidence >= 0.95;
    if (!ok) {
      pass = false;
      detail += fam->id + " -> " + run.aggregate_symbol + "; ";
    }
  }
  if (pass) detail = "16 families, confidence >= 0.95 each";
  report(1, "summary-table types reproduced at 20 points per family", pass, detail);
}

// --- 2: closed-form curvature vs coordinate oracle ----------------------

void criterion_2() {
  std::mt19937_64 rng(20250810);
  double worst = 0;
  int done = 0;
  while (done < 300) {
    const Mode mode = (done % 3 == 0) ? Mode::Complex : Mode::Real;
    PlebanskiData pd = random_pleb(rng, mode);
    MetricFrame fr = plebanski_frame(pd);
    Point4 pt = nsl::testing::random_point(rng, mode);
    try {
      CurvatureData fast = plebanski_curvature(pd, pt);
      if (fast.max_abs() < 1e-10) continue;  // flat draw: nothing to compare
      CurvatureData orc = oracle_curvature(fr, pt);
      double diff = std::abs(fast.scalar - orc.scalar);
      for (int i = 0; i < 5; ++i) {
        diff = std::max(diff, std::abs(fast.sd[i] - orc.sd[i]));
        diff = std::max(diff, std::abs(fast.asd[i] - orc.asd[i]));
      }
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          diff = std::max(diff, std::abs(fast.ricci[i][j] - orc.ricci[i][j]));
        }
      }
      const double scale = fast.max_abs() + 1e-30;
      worst = std::max(worst, diff / scale);
      ++done;
    } catch (const EvalError&) {
    } catch (const DegenerateMetric&) {
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max rel diff %.2e over 300 instances", worst);
  report(2, "closed-form curvature matches the coordinate oracle (1e-9)", worst < 1e-9, buf);
}

// --- 3: Einstein rows ----------------------------------------------------

void criterion_3() {
  std::mt19937_64 rng(33);
  double worst = 0;
  const char* sigmas[] = {"exp(p)", "q*p + p^2", "sin(q)+2*p", "q^2*p"};
  const char* omegas[] = {"q^2", "exp(q)-p", "cos(p)*q", "p^3 + q"};
  int idx = 0;
  for (double lv : {1.0, -1.0, 2.0, -2.0}) {
    Bindings b;
    b.mode = Mode::Complex;
    b.params["Lambda"] = Cplx(lv, 0);
    b.functions["Sigma"] = sigmas[idx % 4];
    b.functions["Omega"] = omegas[idx % 4];
    ++idx;
    MetricInstance inst = instantiate("pkE-II", b);
    for (int k = 0; k < 10; ++k) {
      Point4 pt = inst.sample(rng);
      CurvatureData c = inst.curvature(pt);
      const double scale = 1.0 + c.max_abs();
      EinsteinResidual er = einstein_residual(c, inst.lambda);
      worst = std::max(worst, std::max(er.max_ricci, er.scalar_gap) / scale);
      // cross-check through the coordinate oracle as well
      CurvatureData orc = oracle_curvature(inst.frame, pt);
      EinsteinResidual eo = einstein_residual(orc, inst.lambda);
      worst = std::max(worst, std::max(eo.max_ricci, eo.scalar_gap) / scale);
    }
  }
  for (double lv : {1.0, -2.0}) {
    Bindings b;
    b.mode = Mode::Complex;
    b.params["Lambda"] = Cplx(lv, 0);
    MetricInstance inst = instantiate("dxd-einstein", b);
    for (int k = 0; k < 10; ++k) {
      Point4 pt = inst.sample(rng);
      CurvatureData c = inst.curvature(pt);
      const double scale = 1.0 + c.max_abs();
      EinsteinResidual er = einstein_residual(c, inst.lambda);
      worst = std::max(worst, std::max(er.max_ricci, er.scalar_gap) / scale);
    }
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "max residual %.2e", worst);
  report(3, "Einstein rows satisfy Ricci = 0 and R = -4 Lambda (1e-10)", worst < 1e-10, buf);
}

// --- 4: self-duality rows ------------------------------------------------

void criterion_4() {
  std::mt19937_64 rng(44);
  bool pass = true;
  std::string detail;
  struct Row {
    const char* id;
    bool want_c2;  // C^(2) != 0, else C^(1) != 0 with C^(2) = 0
  };
  for (const Row row : {Row{"sd-III", true}, Row{"sd-N", false}, Row{"pkE-III", true}}) {
    Bindings b;
    b.mode = Mode::Complex;
    MetricInstance inst = instantiate(row.id, b);
    double worst_asd = 0;
    bool conds = true;
    for (int k = 0; k < 50; ++k) {
      Point4 pt = inst.sample(rng);
      CurvatureData orc = oracle_curvature(inst.frame, pt);
      const double scale = 1.0 + orc.max_abs();
      for (int i = 0; i < 5; ++i) worst_asd = std::max(worst_asd, std::abs(orc.asd[i]) / scale);
      const auto cup = orc.cup();
      if (row.want_c2) {
        conds = conds && std::abs(cup[1]) > 1e-6 * scale;
      } else {
        conds = conds && std::abs(cup[0]) > 1e-6 * scale && std::abs(cup[1]) < 1e-8 * scale;
      }
    }
    if (worst_asd >= 1e-10 || !conds) {
      pass = false;
      detail += std::string(row.id) + " asd " + std::to_string(worst_asd) + "; ";
    }
  }
  if (pass) detail = "ASD Weyl < 1e-10 scale; coefficient conditions hold";
  report(4, "self-dual rows have vanishing ASD Weyl with the cited coefficients", pass, detail);
}

// --- 5: discriminant dichotomy -------------------------------------------

void criterion_5() {
  std::mt19937_64 rng(55);
  Bindings b;
  b.mode = Mode::Complex;
  bool pass = true;
  std::string detail;

  MetricInstance d = instantiate("typeD-ne", b);
  double worst_delta = 0;
  bool collapse = true;
  for (int k = 0; k < 20; ++k) {
    Point4 pt = d.sample(rng);
    CurvatureData c = d.curvature(pt);
    const auto cup = c.cup();
    const double scale =
        2.0 * abs2(cup[1]) + 3.0 * std::abs(cup[2]) * std::abs(cup[0]) + 1e-30;
    worst_delta = std::max(worst_delta, std::abs(type_delta(cup)) / scale);
    CandidateN cand = candidate_n(c);
    collapse = collapse && cand.values.size() == 2 && cand.values[0] == cand.values[1];
  }
  if (worst_delta >= 1e-10 || !collapse) {
    pass = false;
    detail += "type-D delta " + std::to_string(worst_delta) + "; ";
  }

  MetricInstance ii = instantiate("typeII-ne", b);
  double min_delta = 1e300;
  for (int k = 0; k < 20; ++k) {
    Point4 pt = ii.sample(rng);
    const auto cup = ii.curvature(pt).cup();
    const double scale =
        2.0 * abs2(cup[1]) + 3.0 * std::abs(cup[2]) * std::abs(cup[0]) + 1e-30;
    min_delta = std::min(min_delta, std::abs(type_delta(cup)) / scale);
  }
  if (min_delta <= 1e-6) {
    pass = false;
    detail += "type-II delta " + std::to_string(min_delta);
  }
  if (pass) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "delta_D < %.1e, delta_II > %.1e, roots collapse",
                  worst_delta, min_delta);
    detail = buf;
  }
  report(5, "discriminant vanishes for the D family and not for the II family", pass, detail);
}

// --- 6: special solutions of the six-equation system ---------------------

void criterion_6() {
  std::mt19937_64 rng(66);
  bool pass = true;
  std::string detail;
  for (const char* id : {"type3-i", "type3-ii", "type3-iii"}) {
    Bindings b;
    b.mode = Mode::Complex;
    MetricInstance inst = instantiate(id, b);
    const Cplx M0 = inst.params.at("M0");
    double worst = 0;
    for (int k = 0; k < 20; ++k) {
      Point4 pt = inst.sample(rng);
      auto r = type3_system_residual(M0, field_of(inst.fields.at("N")),
                                     field_of(inst.fields.at("P")),
                                     field_of(inst.fields.at("Omega")), pt);
      for (const auto& v : r) worst = std::max(worst, std::abs(v));
    }
    ClassificationRun run = run_classification(inst, 20, 660);
    const bool ok = worst < 1e-10 && run.aggregate_symbol == "[III]^{ne} (x) [O]^{n}" &&
                    run.confidence >= 0.95;
    if (!ok) {
      pass = false;
      detail += std::string(id) + " residual " + std::to_string(worst) + " symbol " +
                run.aggregate_symbol + "; ";
    }
  }
  if (pass) detail = "all six residuals < 1e-10; classified [III]^{ne} (x) [O]^{n}";
  report(6, "three special solutions satisfy the six-equation system", pass, detail);
}

// --- 7: symmetry suite ----------------------------------------------------

void criterion_7() {
  std::mt19937_64 rng(77);
  double worst = 0;
  std::string detail;
  bool pass = true;
  const char* families[] = {"pkE-D",      "pkE-II-k1", "pkE-II-k2a", "pkE-II-k2b",
                            "pkE-II-k2c", "pkE-II-k3", "pkE-II-k4",  "pkE-II-k5",
                            "pkE-II-k6",  "homothety-III", "nullK-III"};
  for (const char* id : families) {
    Bindings b;
    b.mode = Mode::Complex;
    MetricInstance inst = instantiate(id, b);
    for (int k = 0; k < 8; ++k) {
      Point4 pt = inst.sample(rng);
      for (const auto& K : inst.killing) {
        const double r = killing_residual(inst, K, pt);
        if (r > worst) worst = r;
        if (r >= 1e-10) {
          pass = false;
          detail += std::string(id) + "/" + K.name + "; ";
        }
      }
    }
  }
  // the triple of null vectors, with the per-vector congruence flags
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance pn = instantiate("pkE-N", b);
  bool flags_ok = true;
  for (int k = 0; k < 8; ++k) {
    Point4 pt = pn.sample(rng);
    SdKillingReport rep = sd_killing_catalog_check(pn, pt);
    for (const auto& e : rep.entries) worst = std::max(worst, e.residual);
    flags_ok = flags_ok && rep.entries.size() == 3 && !rep.entries[0].congruence_expanding &&
               !rep.entries[1].congruence_expanding && rep.entries[2].congruence_expanding;
  }
  if (!flags_ok) {
    pass = false;
    detail += "triple congruence flags; ";
  }
  if (worst >= 1e-10) pass = false;
  if (pass) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "max residual %.2e; triple flags n,n,e", worst);
    detail = buf;
  }
  report(7, "symmetry vectors satisfy their defining equation (1e-10)", pass, detail);
}

// --- 8: congruence and optics suite ---------------------------------------

void criterion_8() {
  bool pass = true;
  std::string detail;
  double worst = 0;
  for (const auto* fam : list_families()) {
    Bindings b;
    b.mode = Mode::Complex;
    MetricInstance inst = instantiate(fam->id, b);
    if (inst.congruences.empty()) continue;
    VerificationRun run = run_verification(inst, CheckKind::Congruences, 20, fam->seed + 1);
    worst = std::max(worst, run.residuals["null_string_residual"]);
    if (!run.passed) {
      pass = false;
      detail += fam->id + "; ";
    }
  }
  // the nontwisting pair of the B(q,p,y) family and the twisting fourth
  // pair of the generic-type family
  Bindings b;
  b.mode = Mode::Complex;
  {
    MetricInstance inst = instantiate("sesqui-mm", b);
    std::mt19937_64 rng(88);
    Point4 pt = inst.sample(rng);
    FramePoint fp = inst.frame.eval(pt);
    ConnectionPoint conn = connection_at(fp);
    CongruenceReport sd = verify_null_string(inst.congruences[0].spec, fp, conn.spinor, pt);
    CongruenceReport asd = verify_null_string(inst.congruences[1].spec, fp, conn.spinor, pt);
    if (asd.nonexpanding ||
        intersection_optics(sd, asd).cls != OpticsClass::MinusMinus) {
      pass = false;
      detail += "nontwisting pair; ";
    }
  }
  {
    MetricInstance inst = instantiate("typeII-ne", b);
    std::mt19937_64 rng(89);
    Point4 pt = inst.sample(rng);
    FramePoint fp = inst.frame.eval(pt);
    ConnectionPoint conn = connection_at(fp);
    CongruenceReport sdn = verify_null_string(inst.congruences[1].spec, fp, conn.spinor, pt);
    CongruenceReport asdn = verify_null_string(inst.congruences[3].spec, fp, conn.spinor, pt);
    if (intersection_optics(sdn, asdn).cls != OpticsClass::PlusPlus) {
      pass = false;
      detail += "twisting fourth pair; ";
    }
  }
  if (pass) {
    char buf[96];
    std::snprintf(buf, sizeof(buf),
                  "max residual %.2e; flags and optics classes as claimed", worst);
    detail = buf;
  }
  report(8, "declared congruences verify with matching expansion and optics", pass, detail);
}

// --- 9: differentiation soundness ------------------------------------------

void criterion_9() {
  std::mt19937_64 rng(99);
  double worst = 0;
  int done = 0;
  long checked = 0;
  while (done < 1000) {
    const std::string src = nsl::testing::random_expr(rng);
    Point4 pt = nsl::testing::random_point(rng, Mode::Real);
    try {
      ScalarField f(src, Mode::Real);
      Jet j = f.eval_jet(pt);
      double scale = 0;
      for (int s = 0; s < kJetSize; ++s) scale = std::max(scale, std::abs(j.coeff(s)));
      if (scale > 1e3) continue;  // keep the finite-difference oracle in range
      double local = 0;
      for (const MultiIndex& alpha : jet_tables::indices()) {
        if (alpha.degree() == 0) continue;
        FdCheckResult r = finite_diff_check(f, pt, alpha, 1e-4);
        local = std::max(local, r.rel_error);
        ++checked;
      }
      worst = std::max(worst, local);
      ++done;
    } catch (const EvalError&) {
    }
  }
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%ld partials over 1000 expressions, max rel err %.2e",
                checked, worst);
  report(9, "order-3 jets match Richardson central differences (1e-6)", worst < 1e-6, buf);
}

// --- 10: classifier soundness ----------------------------------------------

void criterion_10() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> uni(-1, 1);
  bool pass = true;
  std::string detail;
  int agreement_checked = 0;
  for (int k = 0; k < 50000 && agreement_checked < 10000; ++k) {
    std::array<Cplx, 5> cup{Cplx(uni(rng), uni(rng)), Cplx(uni(rng), uni(rng)),
                            Cplx(uni(rng), uni(rng)), Cplx(0, 0), Cplx(0, 0)};
    if (k % 3 == 0) {
      if (std::abs(cup[2]) < 0.1) continue;
      cup[0] = cx_div(2.0 * cx_mul(cup[1], cup[1]), 3.0 * cup[2]);
    }
    double scale = 0;
    for (const auto& c : cup) scale = std::max(scale, std::abs(c));
    if (scale < 0.1) continue;
    const Cplx delta = type_delta(cup);
    const bool exact_d = k % 3 == 0;
    if (!exact_d && std::abs(delta) < 1e-4 * scale * scale) continue;
    if (!exact_d && std::abs(cup[2]) < 1e-3 * scale) continue;
    if (std::abs(cup[1]) < 1e-3 * scale && std::abs(cup[2]) < 1e-3 * scale) continue;
    PetrovLabel cond;
    std::vector<RootCluster> roots;
    try {
      cond = petrov_complex(cup).label;
      roots = quartic_root_structure(
          {cup[4], -4.0 * cup[3], 6.0 * cup[2], -4.0 * cup[1], cup[0]});
    } catch (const IllConditioned&) {
      continue;
    }
    std::vector<int> mult;
    for (const auto& c : roots) mult.push_back(c.multiplicity);
    std::sort(mult.rbegin(), mult.rend());
    PetrovLabel root_label = PetrovLabel::I;
    if (mult == std::vector<int>{4}) root_label = PetrovLabel::N;
    else if (mult == std::vector<int>{3, 1}) root_label = PetrovLabel::III;
    else if (mult == std::vector<int>{2, 2}) root_label = PetrovLabel::D;
    else if (mult == std::vector<int>{2, 1, 1}) root_label = PetrovLabel::II;
    if (cond != root_label) {
      pass = false;
      detail = "condition/root disagreement";
      break;
    }
    ++agreement_checked;
  }
  if (agreement_checked < 10000) {
    pass = false;
    detail += " too few usable samples";
  }

  int scaling_checked = 0;
  const double lambdas[] = {1e-6, 1e-4, 1e-2, 1.0, 1e2, 1e4, 1e6};
  for (int k = 0; k < 10000; ++k) {
    std::array<Cplx, 5> cup;
    for (int i = 0; i < 5; ++i) cup[i] = Cplx(uni(rng), uni(rng));
    if (k % 2 == 0) cup[3] = cup[4] = Cplx(0, 0);
    PetrovLabel base;
    try {
      base = petrov_complex(cup).label;
    } catch (const IllConditioned&) {
      continue;
    }
    for (double l : lambdas) {
      auto scaled = cup;
      for (auto& c : scaled) c *= l;
      try {
        if (petrov_complex(scaled).label != base) {
          pass = false;
          detail += " scaling variance";
          k = 10000;
          break;
        }
      } catch (const IllConditioned&) {
      }
    }
    ++scaling_checked;
  }
  if (pass) {
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d agreement sets, %d scaling sets", agreement_checked,
                  scaling_checked);
    detail = buf;
  }
  report(10, "condition-based and root-pattern classification agree; labels scale-invariant",
         pass, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (g_failures) {
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
