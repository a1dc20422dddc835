#include <benchmark/benchmark.h>

#include "ngdim/scatter.hpp"
#include "ngdim/simulation.hpp"

namespace {

ngdim::DataMatrix data(std::size_t n) {
  return ngdim::sample_model(ngdim::ModelSpec::make(ngdim::ModelName::kM1, 1), n).x;
}

void scatter(benchmark::State& state, ngdim::ScatterSpec spec) {
  const auto x = data(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ngdim::evaluate_scatter(x, spec));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

ngdim::ScatterSpec of(ngdim::ScatterKind kind) {
  ngdim::ScatterSpec s;
  s.kind = kind;
  return s;
}

}  // namespace

BENCHMARK_CAPTURE(scatter, cov, of(ngdim::ScatterKind::kCov))->Arg(1000)->Arg(4000);
BENCHMARK_CAPTURE(scatter, cov4, of(ngdim::ScatterKind::kCov4))->Arg(1000)->Arg(4000);
BENCHMARK_CAPTURE(scatter, cauchy, of(ngdim::ScatterKind::kTLikelihood))->Arg(1000)->Arg(4000);
BENCHMARK_CAPTURE(scatter, huber, of(ngdim::ScatterKind::kHuber))->Arg(1000)->Arg(4000);
