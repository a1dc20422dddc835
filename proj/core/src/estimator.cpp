#include "ngdim/estimator.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace ngdim {
namespace {

// Runs the oracle at most once per k and records each first evaluation.
class Tracker {
 public:
  Tracker(const PValueOracle& oracle, double alpha, DimensionEstimate& trace)
      : oracle_(oracle), alpha_(alpha), trace_(trace) {}

  bool rejected(std::size_t k) {
    for (const auto& v : trace_.visited)
      if (v.k == k) return v.rejected;
    VisitedTest v;
    v.k = k;
    try {
      v.p_value = oracle_(k);
    } catch (const Error& e) {
      throw EstimationAborted(e.code(), e.what(), trace_);
    }
    v.tested = v.p_value.has_value();
    v.rejected = v.tested && *v.p_value <= alpha_;
    trace_.visited.push_back(v);
    return v.rejected;
  }

 private:
  const PValueOracle& oracle_;
  double alpha_;
  DimensionEstimate& trace_;
};

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

std::size_t run_incremental(std::size_t p, Tracker& t) {
  for (std::size_t k = p - 2;; --k) {
    if (t.rejected(k)) return k + 1;
    if (k == 0) return 0;
  }
}

std::size_t run_divide_conquer(std::size_t p, Tracker& t) {
  std::size_t lo = 1;
  std::size_t hi = p - 1;
  std::size_t k = (p + 1) / 2;
  while (lo < hi) {
    if (t.rejected(k)) {
      lo = k + 1;
    } else if (t.rejected(k - 1)) {
      return k;
    } else {
      hi = k - 1;
    }
    k = (lo + hi + 1) / 2;
  }
  return std::min(lo, hi);
}

}  // namespace

std::string to_string(Strategy s) {
  return s == Strategy::kIncremental ? "incremental" : "divide_conquer";
}

DimensionEstimate estimate_incremental(std::size_t p, const PValueOracle& oracle, double alpha) {
  if (p < 2) throw InvalidArgument("incremental estimation needs p >= 2");
  check_alpha(alpha);
  DimensionEstimate out;
  out.strategy = Strategy::kIncremental;
  out.alpha = alpha;
  out.dim = p;
  Tracker t(oracle, alpha, out);
  out.q_hat = run_incremental(p, t);
  return out;
}

DimensionEstimate estimate_divide_conquer(std::size_t p, const PValueOracle& oracle,
                                          double alpha) {
  if (p < 3) throw InvalidArgument("divide-and-conquer estimation needs p >= 3");
  check_alpha(alpha);
  DimensionEstimate out;
  out.strategy = Strategy::kDivideConquer;
  out.alpha = alpha;
  out.dim = p;
  Tracker t(oracle, alpha, out);
  out.q_hat = run_divide_conquer(p, t);
  return out;
}

DimensionEstimate estimate(Strategy strategy, std::size_t p, const PValueOracle& oracle,
                           double alpha) {
  return strategy == Strategy::kIncremental ? estimate_incremental(p, oracle, alpha)
                                            : estimate_divide_conquer(p, oracle, alpha);
}

PValueOracle make_bootstrap_oracle(const DataMatrix& x, const BootstrapConfig& cfg) {
  struct State {
    State(const DataMatrix& d, const BootstrapConfig& c) : data(d), cfg(c) {}
    DataMatrix data;
    BootstrapConfig cfg;
    std::map<std::size_t, std::optional<double>> cache;
    std::mutex mutex;
  };
  auto state = std::make_shared<State>(x, cfg);
  return [state](std::size_t k) -> std::optional<double> {
    {
      std::lock_guard lock(state->mutex);
      if (auto it = state->cache.find(k); it != state->cache.end()) return it->second;
    }
    const auto p = static_cast<std::size_t>(state->data.dim());
    const std::size_t max_k =
        state->cfg.statistic == BootstrapStatistic::kVariance ? p - 2 : p - 1;
    std::optional<double> result;
    if (k <= max_k) {
      BootstrapConfig c = state->cfg;
      c.seed = derive_seed(state->cfg.seed, k);
      result = bootstrap_test(state->data, k, c).p_value;
    }
    std::lock_guard lock(state->mutex);
    state->cache.emplace(k, result);
    return result;
  };
}

DimensionEstimate estimate_incremental(const DataMatrix& x, const BootstrapConfig& cfg,
                                       double alpha) {
  return estimate_incremental(static_cast<std::size_t>(x.dim()), make_bootstrap_oracle(x, cfg),
                              alpha);
}

DimensionEstimate estimate_divide_conquer(const DataMatrix& x, const BootstrapConfig& cfg,
                                          double alpha) {
  return estimate_divide_conquer(static_cast<std::size_t>(x.dim()),
                                 make_bootstrap_oracle(x, cfg), alpha);
}

std::size_t replay(const DimensionEstimate& estimate) {
  if (estimate.visited.empty()) throw InvalidArgument("cannot replay an empty trace");
  std::size_t cursor = 0;
  bool mismatch = false;
  PValueOracle recorded = [&](std::size_t k) -> std::optional<double> {
    if (cursor >= estimate.visited.size() || estimate.visited[cursor].k != k) {
      mismatch = true;
      throw InvalidArgument("trace does not match the strategy's test order");
    }
    const VisitedTest& v = estimate.visited[cursor++];
    if (!v.tested) return std::nullopt;
    // Encode the recorded decision rather than trusting p_value vs alpha.
    return v.rejected ? 0.0 : 1.0;
  };
  DimensionEstimate again;
  try {
    again = ngdim::estimate(estimate.strategy, estimate.dim, recorded, 0.5);
  } catch (const EstimationAborted&) {
    if (mismatch) throw InvalidArgument("trace does not match the strategy's test order");
    throw;
  }
  if (cursor != estimate.visited.size())
    throw InvalidArgument("trace has tests the strategy never performs");
  return again.q_hat;
}

}  // namespace ngdim
