#include <benchmark/benchmark.h>

#include "nsl/catalog.hpp"
#include "nsl/curvature.hpp"

using namespace nsl;

namespace {

PlebanskiData bench_instance() {
  Mode mode = Mode::Real;
  return PlebanskiData{field_of(ScalarField("x^2*p + q*x + sin(y)", mode)),
                       field_of(ScalarField("x*y + q", mode)),
                       field_of(ScalarField("y^3 + p*y + exp(q)", mode)), mode};
}

const Point4 kPt{{Cplx(0.3, 0), Cplx(-0.2, 0), Cplx(0.7, 0), Cplx(0.4, 0)}};

}  // namespace

static void ClosedFormCurvature(benchmark::State& state) {
  PlebanskiData pd = bench_instance();
  for (auto _ : state) {
    CurvatureData c = plebanski_curvature(pd, kPt);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(ClosedFormCurvature);

static void OracleCurvature(benchmark::State& state) {
  PlebanskiData pd = bench_instance();
  MetricFrame fr = plebanski_frame(pd);
  for (auto _ : state) {
    CurvatureData c = oracle_curvature(fr, kPt);
    benchmark::DoNotOptimize(c);
  }
}
BENCHMARK(OracleCurvature);

static void ClassifyFamilyPoint(benchmark::State& state) {
  Bindings b;
  b.mode = Mode::Complex;
  MetricInstance inst = instantiate("walker-pk", b);
  std::mt19937_64 rng(1);
  Point4 pt = inst.sample(rng);
  for (auto _ : state) {
    CurvatureData c = inst.curvature(pt);
    PetrovType t = petrov_complex(c.cup());
    benchmark::DoNotOptimize(t);
  }
}
BENCHMARK(ClassifyFamilyPoint);
