#include <benchmark/benchmark.h>

#include "ngdim/simulation.hpp"
#include "ngdim/unmixing.hpp"

namespace {

void unmixing(benchmark::State& state, ngdim::ScatterPairSpec pair) {
  const auto x = ngdim::sample_model(ngdim::ModelSpec::make(ngdim::ModelName::kM1, 2),
                                     static_cast<std::size_t>(state.range(0)))
                     .x;
  for (auto _ : state) benchmark::DoNotOptimize(ngdim::two_scatter_unmixing(x, pair));
}

}  // namespace

BENCHMARK_CAPTURE(unmixing, cov_cov4, ngdim::ScatterPairSpec::cov_cov4())->Arg(1000)->Arg(4000);
BENCHMARK_CAPTURE(unmixing, cau_hub, ngdim::ScatterPairSpec::cau_hub())->Arg(1000)->Arg(4000);
BENCHMARK_CAPTURE(unmixing, scaui_shubi, ngdim::ScatterPairSpec::scaui_shubi(20))->Arg(1000);
