#include <benchmark/benchmark.h>

#include "fhnvs/coefficients.hpp"
#include "fhnvs/discretization.hpp"
#include "fhnvs/energy.hpp"
#include "fhnvs/nonlocal.hpp"
#include "fhnvs/random.hpp"

using namespace fhnvs;

namespace {

Grid bench_grid(const benchmark::State& state) { return Grid(3, 5.0, static_cast<int>(state.range(0))); }

void BM_Laplacian(benchmark::State& state) {
  const Grid g = bench_grid(state);
  Rng rng(1);
  const Field u = random_nodal_field(g, rng);
  Field out(g);
  for (auto _ : state) {
    laplacian_apply(u, out);
    benchmark::DoNotOptimize(out[0]);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(g.size()));
}

void BM_CgShifted(benchmark::State& state) {
  const Grid g = bench_grid(state);
  Rng rng(2);
  const Field rhs = random_smooth_field(g, rng);
  const LinearOperator op = shifted_laplacian(Field(g, 3.0));
  for (auto _ : state) benchmark::DoNotOptimize(cg_solve(op, rhs).iterations);
}

void BM_ApplySb(benchmark::State& state) {
  const Grid g = bench_grid(state);
  const ReducedOperator op(constant_coeffs(g, 1.0, 3.0, 1.0));
  Rng rng(3);
  const Field u = random_smooth_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(op.apply_Sb(u)[0]);
}

void BM_FactorizedInverse(benchmark::State& state) {
  const Grid g = bench_grid(state);
  const ReducedOperator op(constant_coeffs(g, 1.0, 3.0, 1.0));
  Rng rng(4);
  const Field w = random_smooth_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(op.factorized_inverse(w)[0]);
}

void BM_Gradient(benchmark::State& state) {
  const Grid g = bench_grid(state);
  const Metric metric = state.range(1) == 0 ? Metric::ab : Metric::ab_star;
  const EnergyProblem prob(ReducedOperator(constant_coeffs(g, 1.0, 3.0, 1.0)), power_nonlinearity(g, 3.0), metric);
  Rng rng(5);
  const Field u = random_smooth_field(g, rng);
  for (auto _ : state) benchmark::DoNotOptimize(prob.gradient(u)[0]);
  state.SetLabel(to_string(metric));
}

}  // namespace

BENCHMARK(BM_Laplacian)->Arg(15)->Arg(31)->Arg(63);
BENCHMARK(BM_CgShifted)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplySb)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FactorizedInverse)->Arg(15)->Arg(31)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Gradient)->Args({15, 0})->Args({15, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
