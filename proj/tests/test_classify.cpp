#include "nsl/classify.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nsl;

namespace {

std::array<Cplx, 5> cup_of(double c1, double c2, double c3, double c4 = 0, double c5 = 0) {
  return {Cplx(c1, 0), Cplx(c2, 0), Cplx(c3, 0), Cplx(c4, 0), Cplx(c5, 0)};
}

std::vector<std::pair<int, bool>> pattern_of(const std::vector<RootCluster>& cl) {
  std::vector<std::pair<int, bool>> out;
  for (const auto& c : cl) out.emplace_back(c.multiplicity, c.real);
  std::sort(out.rbegin(), out.rend());
  return out;
}

}  // namespace

TEST(Quartic, DoubleRootPattern) {
  // (z-1)^2 (z-2)(z-3) = z^4 - 7z^3 + 17z^2 - 17z + 6
  auto cl = quartic_root_structure({Cplx(1, 0), Cplx(-7, 0), Cplx(17, 0), Cplx(-17, 0), Cplx(6, 0)});
  ASSERT_EQ(cl.size(), 3u);
  EXPECT_EQ(cl[0].multiplicity, 2);
  EXPECT_LT(std::abs(cl[0].value - Cplx(1, 0)), 1e-5);
  std::vector<double> simple{std::abs(cl[1].value), std::abs(cl[2].value)};
  std::sort(simple.begin(), simple.end());
  EXPECT_NEAR(simple[0], 2.0, 1e-8);
  EXPECT_NEAR(simple[1], 3.0, 1e-8);
}

TEST(Quartic, QuadrupleRootAtZero) {
  auto cl = quartic_root_structure({Cplx(1, 0), {}, {}, {}, {}});
  ASSERT_EQ(cl.size(), 1u);
  EXPECT_EQ(cl[0].multiplicity, 4);
  EXPECT_LT(std::abs(cl[0].value), 1e-4);
}

TEST(Quartic, ConjugateDoublePair) {
  // (z^2+1)^2 = z^4 + 2z^2 + 1: double conjugate pair, feeds D_c in real mode
  auto cl = quartic_root_structure({Cplx(1, 0), {}, Cplx(2, 0), {}, Cplx(1, 0)});
  ASSERT_EQ(cl.size(), 2u);
  EXPECT_EQ(cl[0].multiplicity, 2);
  EXPECT_EQ(cl[1].multiplicity, 2);
  EXPECT_FALSE(cl[0].real);
  EXPECT_FALSE(cl[1].real);
}

TEST(Quartic, DegreeDeficiencyAtInfinity) {
  // leading coefficients below tolerance contribute an infinity cluster
  auto cl = quartic_root_structure({Cplx(0, 0), Cplx(0, 0), Cplx(1, 0), Cplx(-3, 0), Cplx(2, 0)});
  ASSERT_EQ(cl.size(), 3u);
  EXPECT_TRUE(cl[0].at_infinity);
  EXPECT_EQ(cl[0].multiplicity, 2);
}

TEST(Quartic, AmbiguousClusterIsIllConditioned) {
  // roots at 0 and 4.5e-6: separation falls between the merge tolerance and
  // twice the merge tolerance after normalization
  const double eps = 4.5e-6;
  // z(z - eps)(z-1)(z-2) with max-coefficient ~2
  // expand: (z^2 - eps z)(z^2 - 3z + 2)
  std::array<Cplx, 5> c{Cplx(1, 0), Cplx(-3 - eps, 0), Cplx(2 + 3 * eps, 0), Cplx(-2 * eps, 0),
                        Cplx(0, 0)};
  EXPECT_THROW(quartic_root_structure(c), IllConditioned);
}

TEST(PetrovComplex, AdaptedConditions) {
  EXPECT_EQ(petrov_complex(cup_of(0, 0, 0)).label, PetrovLabel::O);
  EXPECT_EQ(petrov_complex(cup_of(1, 0, 0)).label, PetrovLabel::N);
  EXPECT_EQ(petrov_complex(cup_of(4, 1, 0)).label, PetrovLabel::III);
  // 2 C2^2 - 3 C1 C3 = 2 - 3*(2/3) = 0 -> D
  EXPECT_EQ(petrov_complex(cup_of(2.0 / 3, 1, 1)).label, PetrovLabel::D);
  EXPECT_EQ(petrov_complex(cup_of(1, 1, 1)).label, PetrovLabel::II);
}

TEST(PetrovComplex, GeneralBasisFallsBackToRoots) {
  // C5 != 0 forces the root path; distinct roots -> I
  auto t = petrov_complex({Cplx(6, 0), Cplx(-1, 0), Cplx(1, 0), Cplx(2, 0), Cplx(1, 0)});
  EXPECT_FALSE(petrov_is_degenerate(t.label));
}

TEST(PetrovReal, SignOfDiscriminantSplitsII) {
  EXPECT_EQ(petrov_real(cup_of(-1, 0, 1)).label, PetrovLabel::II_r);   // delta = 3 > 0
  EXPECT_EQ(petrov_real(cup_of(1, 0, 1)).label, PetrovLabel::II_rc);   // delta = -3 < 0
  // inside the tolerance band the double root cannot be split: D_r
  EXPECT_EQ(petrov_real(cup_of(2.0 / 3, 1, 1)).label, PetrovLabel::D_r);
}

TEST(PetrovReal, TwoConjugatePairsGiveIc) {
  // (z^2+1)(z^2+4) = z^4 + 5 z^2 + 4: match coefficients through the
  // binomial weights: C5 = 1, C4 = 0, 6 C3 = 5, C2 = 0, C1 = 4
  std::array<Cplx, 5> cup{Cplx(4, 0), Cplx(0, 0), Cplx(5.0 / 6, 0), Cplx(0, 0), Cplx(1, 0)};
  EXPECT_EQ(petrov_real(cup).label, PetrovLabel::I_c);
}

TEST(TypeDelta, Examples) {
  EXPECT_EQ(type_delta(cup_of(0, 0, 0)), Cplx(0, 0));
  // delta = 2 C2^2 - 3 C3 C1
  EXPECT_EQ(type_delta(cup_of(2, 3, 4)), Cplx(2 * 9 - 3 * 4 * 2, 0));
}

TEST(Petrov, ScalingInvariance) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> uni(-1, 1);
  const double lambdas[] = {1e-6, 1e-3, 1.0, 1e3, 1e6};
  for (int k = 0; k < 10000; ++k) {
    std::array<Cplx, 5> cup;
    const bool adapted = k % 2 == 0;
    for (int i = 0; i < 5; ++i) cup[i] = Cplx(uni(rng), uni(rng));
    if (adapted) cup[3] = cup[4] = Cplx(0, 0);
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
        EXPECT_EQ(petrov_complex(scaled).label, base) << "lambda " << l;
      } catch (const IllConditioned&) {
      }
    }
  }
}

TEST(Petrov, ConditionPathAgreesWithRootPath) {
  // Adapted coefficients classified twice: through the closed conditions and
  // through an independently coded root-pattern reading of the same quartic.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1, 1);
  int checked = 0;
  for (int k = 0; k < 40000 && checked < 10000; ++k) {
    std::array<Cplx, 5> cup{Cplx(uni(rng), uni(rng)), Cplx(uni(rng), uni(rng)),
                            Cplx(uni(rng), uni(rng)), Cplx(0, 0), Cplx(0, 0)};
    if (k % 3 == 0) {
      // exact type-D sheet: C1 = 2 C2^2 / (3 C3)
      if (std::abs(cup[2]) < 0.1) continue;
      cup[0] = cx_div(2.0 * cx_mul(cup[1], cup[1]), 3.0 * cup[2]);
    }
    const Cplx delta = type_delta(cup);
    double scale = 0;
    for (const auto& c : cup) scale = std::max(scale, std::abs(c));
    if (scale < 0.1) continue;
    // skip the ambiguity band between the two deciders
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
    // independent multiplicity reading
    std::vector<int> mult;
    for (const auto& c : roots) mult.push_back(c.multiplicity);
    std::sort(mult.rbegin(), mult.rend());
    PetrovLabel root_label = PetrovLabel::I;
    if (mult == std::vector<int>{4}) root_label = PetrovLabel::N;
    else if (mult == std::vector<int>{3, 1}) root_label = PetrovLabel::III;
    else if (mult == std::vector<int>{2, 2}) root_label = PetrovLabel::D;
    else if (mult == std::vector<int>{2, 1, 1}) root_label = PetrovLabel::II;
    EXPECT_EQ(cond, root_label)
        << "C = (" << cup[0] << ", " << cup[1] << ", " << cup[2] << ")";
    ++checked;
  }
  EXPECT_GE(checked, 10000);
}

TEST(Petrov, DegenerationOrderRespected) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int k = 0; k < 2000; ++k) {
    std::array<Cplx, 5> cup{Cplx(0, 0), Cplx(uni(rng) + 2, 0), Cplx(uni(rng) + 2, 0),
                            Cplx(0, 0), Cplx(0, 0)};
    cup[0] = cx_div(2.0 * cx_mul(cup[1], cup[1]), 3.0 * cup[2]);
    ASSERT_EQ(petrov_complex(cup).label, PetrovLabel::D);
    // sub-tolerance perturbations never yield anything more special than D
    auto pert = cup;
    for (auto& c : pert) c += Cplx(uni(rng), uni(rng)) * 1e-11;
    const PetrovLabel l = petrov_complex(pert).label;
    EXPECT_TRUE(l == PetrovLabel::D || l == PetrovLabel::II);
    EXPECT_NE(l, PetrovLabel::III);
    EXPECT_NE(l, PetrovLabel::N);
    EXPECT_NE(l, PetrovLabel::O);
  }
}

TEST(Symbol, RenderAndSimplify) {
  std::vector<CongruenceTag> tags{{true, true}, {false, true}, {false, true}};
  std::vector<OpticsClass> optics{OpticsClass::MinusMinus, OpticsClass::MinusMinus};
  GeometrySymbol s = assemble_symbol(PetrovLabel::II, PetrovLabel::D, tags, optics);
  // all congruences nonexpanding: the optics block is dropped
  EXPECT_EQ(s.render(), "[II]^{n} (x) [D]^{nn}");
}

TEST(Symbol, FullFormWithOptics) {
  std::vector<CongruenceTag> tags{{true, true}, {true, false}, {false, true}, {false, true}};
  std::vector<OpticsClass> optics{OpticsClass::MinusMinus, OpticsClass::MinusMinus,
                                  OpticsClass::MinusMinus, OpticsClass::PlusPlus};
  GeometrySymbol s = assemble_symbol(PetrovLabel::II, PetrovLabel::D, tags, optics);
  EXPECT_EQ(s.render(), "{[II]^{ne} (x) [D]^{nn}, [--,--,--,++]}");
}

TEST(Symbol, InconsistentOpticsRejected) {
  std::vector<CongruenceTag> tags{{true, true}, {false, true}};
  std::vector<OpticsClass> optics{OpticsClass::PlusPlus};
  EXPECT_THROW(assemble_symbol(PetrovLabel::II, PetrovLabel::D, tags, optics),
               InconsistentOptics);
}

TEST(Quartic, MergedConjugatePairCountsReal) {
  // (z^2 + 1e-16)(z-2)(z-3): the +/- 1e-8 i pair merges into one cluster
  // whose center is real to within the merge tolerance
  const double e2 = 1e-16;
  std::array<Cplx, 5> c{Cplx(1, 0), Cplx(-5, 0), Cplx(6 + e2, 0), Cplx(-5 * e2, 0),
                        Cplx(6 * e2, 0)};
  auto cl = quartic_root_structure(c);
  ASSERT_EQ(cl.size(), 3u);
  EXPECT_EQ(cl[0].multiplicity, 2);
  EXPECT_TRUE(cl[0].real);
  EXPECT_LT(std::abs(cl[0].value), 1e-6);
}

TEST(PetrovReal, ConditionPathAgreesWithRootPath) {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> uni(-1, 1);
  int checked = 0;
  for (int k = 0; k < 20000 && checked < 4000; ++k) {
    std::array<Cplx, 5> cup{Cplx(uni(rng), 0), Cplx(uni(rng), 0), Cplx(uni(rng), 0),
                            Cplx(0, 0), Cplx(0, 0)};
    double scale = 0;
    for (const auto& c : cup) scale = std::max(scale, std::abs(c));
    if (scale < 0.1) continue;
    const double delta = type_delta(cup).real();
    if (std::abs(delta) < 1e-4 * scale * scale) continue;
    if (std::abs(cup[2]) < 1e-3 * scale) continue;
    PetrovLabel cond;
    std::vector<RootCluster> roots;
    try {
      cond = petrov_real(cup).label;
      roots = quartic_root_structure(
          {cup[4], -4.0 * cup[3], 6.0 * cup[2], -4.0 * cup[1], cup[0]});
    } catch (const IllConditioned&) {
      continue;
    }
    // independent reading: double real root at infinity plus the finite pair
    int real_simple = 0, cplx_simple = 0;
    for (const auto& r : roots) {
      if (r.multiplicity != 1) continue;
      (r.real ? real_simple : cplx_simple)++;
    }
    PetrovLabel root_label = cplx_simple == 0 ? PetrovLabel::II_r : PetrovLabel::II_rc;
    EXPECT_EQ(cond, root_label) << cup[0] << cup[1] << cup[2];
    ++checked;
  }
  EXPECT_GE(checked, 4000);
}
