#include "ngdim/methods.hpp"

#include <charconv>

#include "ngdim/error.hpp"

namespace ngdim {

std::string to_string(Method m) {
  switch (m) {
    case Method::kFobi: return "fobi";
    case Method::kCovCov4: return "cov-cov4";
    case Method::kCauHub: return "cau-hub";
    case Method::kScauShub: return "scau-shub";
    case Method::kScauiShubi: return "scaui-shubi";
  }
  return "unknown";
}

std::string MethodSpec::label() const {
  if (method == Method::kScauiShubi)
    return to_string(method) + "(" + std::to_string(options.incomplete_d) + ")";
  return to_string(method);
}

ScatterPairSpec MethodSpec::scatter() const {
  const auto& o = options;
  switch (method) {
    case Method::kFobi:
    case Method::kCovCov4: return ScatterPairSpec::cov_cov4();
    case Method::kCauHub: return ScatterPairSpec::cau_hub(o.nu, o.huber_q, o.huber_tail);
    case Method::kScauShub: return ScatterPairSpec::scau_shub(o.nu, o.huber_q, o.huber_tail);
    case Method::kScauiShubi:
      return ScatterPairSpec::scaui_shubi(o.incomplete_d, o.nu, o.huber_q, o.huber_tail);
  }
  throw InvalidArgument("unknown method");
}

BootstrapStatistic MethodSpec::statistic() const {
  return method == Method::kFobi ? BootstrapStatistic::kKnownNoise : BootstrapStatistic::kVariance;
}

std::size_t MethodSpec::max_testable_k(std::size_t p) const {
  return statistic() == BootstrapStatistic::kKnownNoise ? p - 1 : p - 2;
}

BootstrapConfig MethodSpec::apply(BootstrapConfig cfg) const {
  cfg.scatter = scatter();
  cfg.statistic = statistic();
  return cfg;
}

MethodSpec parse_method(std::string_view label, MethodOptions options) {
  MethodSpec spec;
  spec.options = options;
  std::string_view name = label;
  if (const auto open = label.find('('); open != std::string_view::npos) {
    if (label.back() != ')') throw InvalidArgument("malformed method label: " + std::string(label));
    name = label.substr(0, open);
    const std::string_view arg = label.substr(open + 1, label.size() - open - 2);
    std::size_t d = 0;
    const auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), d);
    if (ec != std::errc() || ptr != arg.data() + arg.size() || name != "scaui-shubi")
      throw InvalidArgument("malformed method label: " + std::string(label));
    spec.options.incomplete_d = d;
  }
  if (name == "fobi") spec.method = Method::kFobi;
  else if (name == "cov-cov4") spec.method = Method::kCovCov4;
  else if (name == "cau-hub") spec.method = Method::kCauHub;
  else if (name == "scau-shub") spec.method = Method::kScauShub;
  else if (name == "scaui-shubi") spec.method = Method::kScauiShubi;
  else throw InvalidArgument("unknown method: " + std::string(label));
  spec.scatter().validate();
  return spec;
}

}  // namespace ngdim
