#include <benchmark/benchmark.h>

#include "nsl/dsl.hpp"

using namespace nsl;

static void JetMultiply(benchmark::State& state) {
  Point4 pt{{Cplx(0.3, 0), Cplx(0.7, 0), Cplx(-0.2, 0), Cplx(0.5, 0)}};
  Jet a = jet_exp(Jet::seed(pt, 0, Mode::Real));
  Jet b = jet_sin(Jet::seed(pt, 3, Mode::Real));
  for (auto _ : state) {
    Jet c = jet_mul(a, b);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(JetMultiply);

static void JetDivide(benchmark::State& state) {
  Point4 pt{{Cplx(0.3, 0), Cplx(0.7, 0), Cplx(-0.2, 0), Cplx(0.5, 0)}};
  Jet a = jet_exp(Jet::seed(pt, 0, Mode::Real));
  Jet b = jet_add(Jet::constant(Cplx(3, 0), Mode::Real), jet_sin(Jet::seed(pt, 1, Mode::Real)));
  for (auto _ : state) {
    Jet c = jet_div(a, b);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(JetDivide);

static void ExpressionJetEval(benchmark::State& state) {
  ScalarField f("exp(q)*sin(p) + x^3 - (y + q*x)^2/(3 + p^2)", Mode::Real);
  Point4 pt{{Cplx(0.3, 0), Cplx(0.7, 0), Cplx(-0.2, 0), Cplx(0.5, 0)}};
  for (auto _ : state) {
    Jet j = f.eval_jet(pt);
    benchmark::DoNotOptimize(j);
  }
}
BENCHMARK(ExpressionJetEval);
