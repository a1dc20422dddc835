#include "ngdim/diagnostics.hpp"

#include <iostream>
#include <mutex>

#include "ngdim/error.hpp"

namespace ngdim {
namespace {

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

WarningSink& sink() {
  static WarningSink s = [](std::string_view msg) {
    std::cerr << "ngdim: warning: " << msg << '\n';
  };
  return s;
}

}  // namespace

WarningSink set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex());
  std::swap(sink(), s);
  return s;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex());
  if (sink()) sink()(message);
}

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kInvalidData: return "invalid_data";
    case ErrorCode::kWhiteningImpossible: return "whitening_impossible";
    case ErrorCode::kDegenerateScatter: return "degenerate_scatter";
    case ErrorCode::kNonConvergence: return "non_convergence";
    case ErrorCode::kBootstrapAborted: return "bootstrap_aborted";
    case ErrorCode::kExperimentAborted: return "experiment_aborted";
    case ErrorCode::kIo: return "io_error";
  }
  return "unknown";
}

}  // namespace ngdim
