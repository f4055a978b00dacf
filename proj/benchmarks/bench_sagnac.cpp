#include <benchmark/benchmark.h>

#include <numbers>

#include "sagnac/linalg.hpp"
#include "sagnac/oracle.hpp"
#include "sagnac/qfi.hpp"

using namespace sagnac;
using std::numbers::pi;

namespace {

void BM_Expm(benchmark::State& state) {
  const auto d = static_cast<Eigen::Index>(state.range(0));
  CMatrix h = CMatrix::Zero(d, d);
  for (Eigen::Index m = 0; m + 1 < d; ++m) {
    h(m + 1, m) = std::sqrt(static_cast<double>(m + 1));
    h(m, m + 1) = -h(m + 1, m);
  }
  for (Eigen::Index m = 0; m < d; ++m) h(m, m) = Complex{0.0, -0.01 * static_cast<double>(m)};
  for (auto _ : state) benchmark::DoNotOptimize(linalg::expm(h));
}
BENCHMARK(BM_Expm)->Arg(16)->Arg(32)->Arg(64);

void BM_ClosedEvolution(benchmark::State& state) {
  const model::PhysicalParams params;
  const auto prof = model::DrivingProfile::half_turn(pi);
  const auto d = static_cast<std::size_t>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::build_evolution_closed(params, prof, pi, Spin::up, d));
}
BENCHMARK(BM_ClosedEvolution)->Arg(30)->Arg(60);

void BM_SteppedEvolution(benchmark::State& state) {
  const model::PhysicalParams params;
  const auto prof = model::DrivingProfile::half_turn(pi);
  const int steps = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(oracle::build_evolution_stepped(params, prof, pi, Spin::up, 30, steps));
}
BENCHMARK(BM_SteppedEvolution)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_Coefficients(benchmark::State& state) {
  const model::PhysicalParams params;
  const auto prof = model::DrivingProfile::half_turn(7.3);
  for (auto _ : state) benchmark::DoNotOptimize(model::coefficients(params, prof, 7.3));
}
BENCHMARK(BM_Coefficients);

void BM_QfiGeneral(benchmark::State& state) {
  const model::PhysicalParams params;
  const auto k = model::derive_constants(params);
  const auto c = model::coefficients(params, model::DrivingProfile::half_turn(7.3), 7.3);
  const auto gen = qfi::make_generator(params, k, c, 100);
  const auto st = states::make_globally_entangled({-1.0, 0.3});
  for (auto _ : state)
    benchmark::DoNotOptimize(qfi::qfi_general(states::correlations_generic(st, c.c1), gen, k));
}
BENCHMARK(BM_QfiGeneral);

void BM_QfiVarianceOracle(benchmark::State& state) {
  const model::PhysicalParams params;
  const auto prof = model::DrivingProfile::half_turn(pi);
  const auto st = states::make_partially_entangled({0.4, -0.3}, 1, {}, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(oracle::qfi_variance_numeric(st, params, prof, pi));
}
BENCHMARK(BM_QfiVarianceOracle)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
