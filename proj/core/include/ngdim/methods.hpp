#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "ngdim/hypothesis.hpp"
#include "ngdim/scatter.hpp"

namespace ngdim {

// Named testing procedures. kFobi is the Cov-Cov4 pair with the known-noise
// statistic; kCovCov4 uses the same pair with the minimal-variance statistic.
enum class Method { kFobi, kCovCov4, kCauHub, kScauShub, kScauiShubi };

struct MethodOptions {
  double nu = 1.0;
  double huber_q = 0.9;
  HuberTail huber_tail = HuberTail::kStandard;
  std::size_t incomplete_d = 100;

  bool operator==(const MethodOptions&) const = default;
};

struct MethodSpec {
  Method method = Method::kCovCov4;
  MethodOptions options;

  std::string label() const;
  ScatterPairSpec scatter() const;
  BootstrapStatistic statistic() const;
  // Largest k a bootstrap test with this method can take for dimension p.
  std::size_t max_testable_k(std::size_t p) const;
  // Copies scatter and statistic into a bootstrap configuration.
  BootstrapConfig apply(BootstrapConfig cfg) const;

  bool operator==(const MethodSpec&) const = default;
};

std::string to_string(Method m);

// Accepts fobi, cov-cov4, cau-hub, scau-shub, scaui-shubi and scaui-shubi(d).
// A "(d)" suffix overrides options.incomplete_d. Throws InvalidArgument.
MethodSpec parse_method(std::string_view label, MethodOptions options = {});

}  // namespace ngdim
