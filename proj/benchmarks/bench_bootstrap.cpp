#include <benchmark/benchmark.h>

#include "ngdim/hypothesis.hpp"
#include "ngdim/simulation.hpp"

namespace {

// One replicate per iteration, so the time reads as the per-replicate cost.
void bootstrap_replicate(benchmark::State& state, ngdim::ScatterPairSpec pair) {
  const auto x = ngdim::sample_model(ngdim::ModelSpec::make(ngdim::ModelName::kM1, 3), 1000).x;
  ngdim::BootstrapConfig cfg;
  cfg.replicates = 1;
  cfg.scatter = pair;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    cfg.seed = ++seed;
    benchmark::DoNotOptimize(ngdim::bootstrap_test(x, 2, cfg));
  }
}

}  // namespace

BENCHMARK_CAPTURE(bootstrap_replicate, cov_cov4, ngdim::ScatterPairSpec::cov_cov4());
BENCHMARK_CAPTURE(bootstrap_replicate, cau_hub, ngdim::ScatterPairSpec::cau_hub());
