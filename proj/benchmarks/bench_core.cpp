#include <benchmark/benchmark.h>

#include "toravg/averaging.hpp"
#include "toravg/decomposition.hpp"
#include "toravg/field_calculus.hpp"
#include "toravg/flow.hpp"
#include "toravg/random_fields.hpp"
#include "toravg/verification.hpp"

namespace {

using namespace toravg;

void BM_EvaluateScalar(benchmark::State& state) {
  const TorusBox box = default_suite_box(static_cast<int>(state.range(0)));
  RandomFieldSampler sampler(7);
  const ScalarField f = sampler.scalar(box);
  const auto points = sampler.phase_points(box, 64);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.evaluate(points[i++ & 63]));
  }
}
BENCHMARK(BM_EvaluateScalar)->Arg(1)->Arg(2);

void BM_Multiply(benchmark::State& state) {
  const TorusBox box = default_suite_box(static_cast<int>(state.range(0)));
  RandomFieldSampler sampler(7);
  const ScalarField f = sampler.scalar(box);
  const ScalarField g = sampler.scalar(box);
  for (auto _ : state) {
    benchmark::DoNotOptimize(multiply(f, g));
  }
}
BENCHMARK(BM_Multiply)->Arg(1)->Arg(2);

void BM_VerticalAverage(benchmark::State& state) {
  const TorusBox box = default_suite_box(static_cast<int>(state.range(0)));
  RandomFieldSampler sampler(7);
  const VectorField x = sampler.vector_field(box);
  for (auto _ : state) {
    benchmark::DoNotOptimize(vertical_average(x));
  }
}
BENCHMARK(BM_VerticalAverage)->Arg(1)->Arg(2);

void BM_DecomposeSymplectic(benchmark::State& state) {
  const TorusBox box = default_suite_box(static_cast<int>(state.range(0)));
  RandomFieldSampler sampler(7);
  const VectorField x = sampler.symplectic_field(box, 0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(decompose_symplectic(x));
  }
}
BENCHMARK(BM_DecomposeSymplectic)->Arg(1)->Arg(2);

void BM_FlowMapPoint(benchmark::State& state) {
  const TorusBox box = default_suite_box(1);
  RandomFieldSampler sampler(7);
  ScalarField h = sampler.scalar(box, 2, 0.1, true);
  h += sampler.action_polynomial(box, 0.3);
  const TimeDepVectorField family =
      TimeDepVectorField::constant(hamiltonian_vf(h), 0.5, true);
  const FlowMap phi = integrate_flow(family, 0.5);
  const auto points = sampler.phase_points(box, 16);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(phi.map(points[i++ & 15]));
  }
}
BENCHMARK(BM_FlowMapPoint);

}  // namespace

BENCHMARK_MAIN();
