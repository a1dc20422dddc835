#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace ngdim {

// Non-fatal numerical warnings (covariance floors, redrawn mixing matrices,
// slow M-solver convergence) go through a process-wide sink. The default sink
// writes to stderr; tests and the CLI may install their own.
using WarningSink = std::function<void(std::string_view)>;

// Returns the previously installed sink. An empty sink drops warnings.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace ngdim
