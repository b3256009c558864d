#include <benchmark/benchmark.h>

#include <random>

#include "pgfermi/pgfermi.hpp"

using namespace pgfermi;

namespace {

PGElement dense_operator(const ContextPtr& ctx, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const int dim = ctx->dim();
  PGElement x(ctx, Kind::Operator);
  for (int i = 0; i <= ctx->n(); ++i) {
    for (int k = 0; k <= ctx->n(); ++k) {
      Matrix m(dim, dim);
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) m(r, c) = Scalar(normal(rng), normal(rng));
      x.add_term(i, k, m);
    }
  }
  return x;
}

void BM_PgMulOperators(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  const auto ctx = PGContext::fermion(n);
  const PGElement x = dense_operator(ctx, rng);
  const PGElement y = dense_operator(ctx, rng);
  for (auto _ : state) benchmark::DoNotOptimize(pg_mul(x, y));
}
BENCHMARK(BM_PgMulOperators)->DenseRange(1, 8);

void BM_BuildSystemEx3(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(2);
  const CandidatePair pair = example_family(sample_example_params(rng, ExampleKind::Ex3, n));
  for (auto _ : state) benchmark::DoNotOptimize(build_system(pair));
}
BENCHMARK(BM_BuildSystemEx3)->DenseRange(2, 16, 2);

void BM_ResolutionDefect(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  const auto sys = n == 1 ? build_system(hermitian_pair(1))
                          : build_system(example_family(sample_example_params(rng, ExampleKind::Ex3, n)));
  for (auto _ : state) benchmark::DoNotOptimize(resolution_defect(sys, Side::Right));
}
BENCHMARK(BM_ResolutionDefect)->DenseRange(1, 8)->Unit(benchmark::kMicrosecond);

void BM_BinormalizationReport(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto sys = build_system(hermitian_pair(n));
  for (auto _ : state) benchmark::DoNotOptimize(binormalization_report(sys, Side::Left));
}
BENCHMARK(BM_BinormalizationReport)->DenseRange(2, 6, 2)->Unit(benchmark::kMicrosecond);

void BM_SolveIntegrationWeights(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(solve_integration_weights(n));
}
BENCHMARK(BM_SolveIntegrationWeights)->Arg(2)->Arg(5)->Arg(10)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_Factorize(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<Scalar> eps;
  for (int k = 0; k <= n; ++k) eps.emplace_back(k * (k + 1) / 2.0, 0.0);
  Matrix Psi = identity(n + 1);
  for (int k = 0; k < n; ++k) Psi(k, k + 1) = 0.3;
  const auto sys = from_spectrum(eps, Psi);
  for (auto _ : state) benchmark::DoNotOptimize(factorize(sys));
}
BENCHMARK(BM_Factorize)->Arg(2)->Arg(8)->Arg(16);

}  // namespace

BENCHMARK_MAIN();
