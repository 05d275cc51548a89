#include "nsl/catalog.hpp"

#include <gtest/gtest.h>

#include "nsl/report.hpp"

using namespace nsl;

TEST(Catalog, SixteenSummaryRows) {
  auto rows = list_families();
  EXPECT_EQ(rows.size(), 16u);
  std::vector<std::string> want{"weak-hh",   "sesqui-pp",  "sesqui-mm", "walker-2sided",
                                "walker-ne-pp", "walker-ne-mm", "walker-pk", "typeII-ne",
                                "typeD-ne",  "typeD-2n",   "sd-III",    "sd-N",
                                "pkE-II",    "dxd-einstein", "pkE-III",  "pkE-N"};
  for (const auto& id : want) {
    bool found = false;
    for (const auto* f : rows) found = found || f->id == id;
    EXPECT_TRUE(found) << id;
  }
}

TEST(Catalog, InstantiateEinsteinBinding) {
  Bindings b;
  b.mode = Mode::Complex;
  b.params["Lambda"] = Cplx(2, 0);
  b.functions["Sigma"] = "exp(p)";
  b.functions["Omega"] = "q^2";
  MetricInstance inst = instantiate("pkE-II", b);
  ClassificationRun run = run_classification(inst, 10, 3);
  EXPECT_EQ(run.aggregate_symbol, "[II]^{n} (x) [D]^{nn}");
  VerificationRun ver = run_verification(inst, CheckKind::Einstein, 10, 3);
  EXPECT_TRUE(ver.passed);
}

TEST(Catalog, TypeDInstanceHasZeroDelta) {
  Bindings b;
  b.mode = Mode::Complex;
  b.functions["F"] = "exp(q*z)";
  MetricInstance inst = instantiate("typeD-ne", b);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 10; ++k) {
    Point4 pt = inst.sample(rng);
    CurvatureData c = inst.curvature(pt);
    const auto cup = c.cup();
    const double scale = 2.0 * abs2(cup[1]) + 3.0 * std::abs(cup[2]) * std::abs(cup[0]);
    EXPECT_LT(std::abs(type_delta(cup)), 1e-10 * (1 + scale));
  }
}

TEST(Catalog, ArityContractEnforced) {
  Bindings b;
  b.functions["B"] = "x";  // B may depend on (q,p,y) only
  EXPECT_THROW(instantiate("walker-pk", b), ArityViolation);
  EXPECT_THROW(instantiate("no-such-family", {}), UnboundSlot);
}

TEST(Catalog, SamplerRespectsGuards) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance inst = instantiate("type3-i", b);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    Point4 pt = inst.sample(rng);
    EXPECT_GE(std::abs(4.0 * pt[1] - pt[0]), 1e-3);
  }
}

TEST(Killing, SixVectorAlgebra) {
  Bindings b;
  b.mode = Mode::Complex;
  b.params["Lambda"] = Cplx(1, 0);
  MetricInstance inst = instantiate("pkE-D", b);
  ASSERT_EQ(inst.killing.size(), 6u);
  std::mt19937_64 rng(8);
  for (int k = 0; k < 5; ++k) {
    Point4 pt = inst.sample(rng);
    for (const auto& K : inst.killing) {
      EXPECT_LT(killing_residual(inst, K, pt), 1e-12) << K.name;
    }
  }
}

TEST(Killing, TranslationOnSigmaOfP) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance inst = instantiate("pkE-II-k1", b);
  std::mt19937_64 rng(9);
  Point4 pt = inst.sample(rng);
  EXPECT_LT(killing_residual(inst, inst.killing[0], pt), 1e-12);
  // d/dx is not a symmetry: A depends on x
  KillingVectorSpec bad{"bad", {"0", "0", "1", "0"}, Cplx(0, 0)};
  EXPECT_GT(killing_residual(inst, bad, pt), 1e-3);
}

TEST(Killing, HomothetyAndNullVector) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance h = instantiate("homothety-III", b);
  std::mt19937_64 rng(10);
  Point4 pt = h.sample(rng);
  EXPECT_LT(killing_residual(h, h.killing[0], pt), 1e-12);

  MetricInstance nk = instantiate("nullK-III", b);
  Point4 pt2 = nk.sample(rng);
  EXPECT_LT(killing_residual(nk, nk.killing[0], pt2), 1e-12);
}

TEST(Killing, TripleNullVectorsWithCongruenceFlags) {
  Bindings b;
  b.mode = Mode::Complex;
  b.functions["Omega"] = "q^4";
  MetricInstance inst = instantiate("pkE-N", b);
  std::mt19937_64 rng(11);
  Point4 pt = inst.sample(rng);
  SdKillingReport rep = sd_killing_catalog_check(inst, pt);
  ASSERT_EQ(rep.entries.size(), 3u);
  for (const auto& e : rep.entries) {
    EXPECT_LT(e.residual, 1e-12) << e.name;
    EXPECT_TRUE(e.has_congruence);
    EXPECT_LT(e.congruence_residual, 1e-9) << e.name;
  }
  EXPECT_FALSE(rep.entries[0].congruence_expanding);  // K1
  EXPECT_FALSE(rep.entries[1].congruence_expanding);  // K2
  EXPECT_TRUE(rep.entries[2].congruence_expanding);   // K3

  KillingVectorSpec bad{"bad", {"1", "0", "0", "0"}, Cplx(0, 0)};
  EXPECT_GT(killing_residual(inst, bad, pt), 1e-3);
}

TEST(Master, LambdaPairOnSigmaOfP) {
  // delta1 = 1, delta2 = 0 with Sigma = Sigma(p), Omega = 0: both vanish
  Mode mode = Mode::Complex;
  ScalarField d1("1", mode), d2("0", mode), Sg("exp(p)", mode), Om("0", mode);
  Point4 pt{{Cplx(0.3, 0.1), Cplx(0.5, -0.2), Cplx(), Cplx()}};
  auto r = master_lambda_residuals(d1, d2, Sg, Om, Cplx(1, 0), pt);
  EXPECT_LT(std::abs(r[0]), 1e-13);
  EXPECT_LT(std::abs(r[1]), 1e-13);

  // generic data violates
  ScalarField d1g("q^2", mode), d2g("p", mode), Sgg("q*p", mode), Omg("q", mode);
  auto rg = master_lambda_residuals(d1g, d2g, Sgg, Omg, Cplx(1, 0), pt);
  EXPECT_GT(std::abs(rg[0]) + std::abs(rg[1]), 1e-3);
}

TEST(Master, ScaledTranslationPair) {
  // K2 of a two-vector algebra: delta1 = q, delta2 = p^2 with
  // Sigma = exp(2/p), Omega = 0 and Lambda = 1
  Mode mode = Mode::Complex;
  ScalarField d1("q", mode), d2("p^2", mode), Sg("exp(2/p)", mode), Om("0", mode);
  Point4 pt{{Cplx(0.4, 0), Cplx(0.8, 0), Cplx(), Cplx()}};
  auto r = master_lambda_residuals(d1, d2, Sg, Om, Cplx(1, 0), pt);
  EXPECT_LT(std::abs(r[0]), 1e-12);
  EXPECT_LT(std::abs(r[1]), 1e-13);
}

TEST(Master, NullCasePair) {
  Mode mode = Mode::Complex;
  ScalarField eps("0", mode), Phi("q*p", mode), Om("0", mode);
  Point4 pt{{Cplx(0.2, 0), Cplx(0.7, 0), Cplx(), Cplx()}};
  auto r = master_null_residuals(eps, Cplx(3, 0), Phi, Om, pt);
  EXPECT_EQ(r[0], Cplx(0, 0));
  EXPECT_EQ(r[1], Cplx(0, 0));

  // eps = q p on Phi = 0 (the third null vector of the triple)
  ScalarField eps2("q*p", mode), Phi0("0", mode), Om2("q^4", mode);
  auto r2 = master_null_residuals(eps2, Cplx(0, 0), Phi0, Om2, pt);
  EXPECT_LT(std::abs(r2[0]) + std::abs(r2[1]), 1e-13);
}

TEST(Master, HeavenlySystemOnHomothety) {
  // Phi = 0 and the pure-scaling vector: delta = eps = 0, a0 = b0 = 0,
  // Omega = 0 satisfies every equation for any chi0
  Mode mode = Mode::Complex;
  ScalarField zero("0", mode);
  Point4 pt{{Cplx(0.4, 0), Cplx(-0.2, 0), Cplx(), Cplx()}};
  auto r = master_heavenly_residuals(zero, zero, zero, zero, Cplx(0, 0), Cplx(0, 0),
                                     Cplx(1, 0), zero, zero, pt);
  for (const auto& v : r) EXPECT_LT(std::abs(v), 1e-14);
}

TEST(Catalog, VerifyPipelines) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance pk = instantiate("walker-pk", b);
  VerificationRun cong = run_verification(pk, CheckKind::Congruences, 10, 2);
  EXPECT_TRUE(cong.passed);
  // walker-pk defaults are not Einstein
  VerificationRun ein = run_verification(pk, CheckKind::Einstein, 10, 2);
  EXPECT_FALSE(ein.passed);

  MetricInstance t3 = instantiate("type3-ii", b);
  VerificationRun v3 = run_verification(t3, CheckKind::Type3, 10, 2);
  EXPECT_TRUE(v3.passed);

  MetricInstance k4 = instantiate("pkE-II-k4", b);
  VerificationRun mk = run_verification(k4, CheckKind::Master, 6, 2);
  EXPECT_TRUE(mk.passed);
  VerificationRun kk = run_verification(k4, CheckKind::Killing, 6, 2);
  EXPECT_TRUE(kk.passed);
}

TEST(Catalog, RealModeClassification) {
  struct Row {
    const char* id;
    const char* want;
  };
  const Row rows[] = {
      {"pkE-D", "[D_r]^{nn} (x) [D_r]^{nn}"},
      {"typeD-ne", "{[D_r]^{ne} (x) [D_r]^{nn}, [--,--,--,++]}"},
      {"typeII-ne", "{[II_r]^{ne} (x) [D_r]^{nn}, [--,--,--,++]}"},
      {"sd-N", "[N_r]^{n} (x) [O_r]^{n}"},
      {"dxd-einstein", "[D_r]^{nn} (x) [D_r]^{nn}"},
  };
  for (const auto& row : rows) {
    Bindings b;
    b.mode = Mode::Real;
    MetricInstance inst = instantiate(row.id, b);
    ClassificationRun run = run_classification(inst, 12, 31);
    EXPECT_EQ(run.aggregate_symbol, row.want) << row.id;
    EXPECT_GE(run.confidence, 0.95) << row.id;
  }
}

TEST(Catalog, RealModeMixedLabelsAreFlagged) {
  // the generic family's real type genuinely changes across the box (the
  // discriminant changes sign); minority points must be flagged, not dropped
  Bindings b;
  b.mode = Mode::Real;
  MetricInstance inst = instantiate("walker-pk", b);
  ClassificationRun run = run_classification(inst, 20, 31);
  EXPECT_EQ(run.points.size(), 20u);
  int minority = 0;
  for (const auto& r : run.points) {
    if (r.symbol != run.aggregate_symbol) ++minority;
  }
  EXPECT_EQ(run.flagged_points, minority);
  EXPECT_NEAR(run.confidence, 1.0 - minority / 20.0, 1e-12);
}

TEST(Catalog, ClassificationChecksCarryResiduals) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance inst = instantiate("pkE-D", b);
  ClassificationRun run = run_classification(inst, 6, 5);
  ASSERT_TRUE(run.checks.count("einstein_residual"));
  ASSERT_TRUE(run.checks.count("killing_residual"));
  EXPECT_LT(run.checks["einstein_residual"], 1e-10);
  EXPECT_LT(run.checks["killing_residual"], 1e-10);
}
