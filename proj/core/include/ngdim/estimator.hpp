#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ngdim/data.hpp"
#include "ngdim/error.hpp"
#include "ngdim/hypothesis.hpp"

namespace ngdim {

// Sequential estimation of the signal dimension q from tests of H0k.

enum class Strategy { kIncremental, kDivideConquer };

std::string to_string(Strategy s);

struct VisitedTest {
  std::size_t k = 0;
  std::optional<double> p_value;  // empty when H0k was not testable
  bool rejected = false;
  // False for a k the statistic cannot test (k = p-1 with the variance
  // statistic); such a hypothesis counts as not rejected.
  bool tested = true;
};

struct DimensionEstimate {
  std::size_t q_hat = 0;
  std::vector<VisitedTest> visited;  // in test order
  Strategy strategy = Strategy::kIncremental;
  double alpha = 0.05;
  std::size_t dim = 0;  // p
};

// p-value of H0k, or nullopt when H0k cannot be tested.
using PValueOracle = std::function<std::optional<double>(std::size_t k)>;

// Thrown when a test fails mid-run; carries the trace collected so far and the
// code of the underlying error.
class EstimationAborted : public Error {
 public:
  EstimationAborted(ErrorCode code, const std::string& what, DimensionEstimate partial)
      : Error(code, "estimation aborted: " + what), partial_(std::move(partial)) {}

  const DimensionEstimate& partial() const noexcept { return partial_; }

 private:
  DimensionEstimate partial_;
};

// Tests k = p-2, p-3, ... and stops at the first rejection, returning k + 1;
// q_hat = 0 when H00 is not rejected either. Requires p >= 2.
DimensionEstimate estimate_incremental(std::size_t p, const PValueOracle& oracle, double alpha);

// Bisection on [1, p-1] starting at k = ceil(p/2), testing H0k and then H0(k-1)
// when H0k is not rejected. Each k is tested at most once. Requires p >= 3.
DimensionEstimate estimate_divide_conquer(std::size_t p, const PValueOracle& oracle,
                                          double alpha);

DimensionEstimate estimate(Strategy strategy, std::size_t p, const PValueOracle& oracle,
                           double alpha);

// Memoized bootstrap oracle on fixed data. H0k uses seed derive_seed(cfg.seed, k),
// so any strategy testing the same k on the same data gets the same p-value.
PValueOracle make_bootstrap_oracle(const DataMatrix& x, const BootstrapConfig& cfg);

DimensionEstimate estimate_incremental(const DataMatrix& x, const BootstrapConfig& cfg,
                                       double alpha);
DimensionEstimate estimate_divide_conquer(const DataMatrix& x, const BootstrapConfig& cfg,
                                          double alpha);

// Re-derives q_hat from the recorded decisions alone. Throws an Error with
// code kInvalidArgument when the trace is inconsistent with its strategy.
std::size_t replay(const DimensionEstimate& estimate);

}  // namespace ngdim
