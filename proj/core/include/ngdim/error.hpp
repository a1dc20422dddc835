#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace ngdim {

// Stable error codes. The numeric values are part of the CLI contract
// (they become process exit statuses) and must not be renumbered.
enum class ErrorCode : int {
  kInvalidArgument = 2,
  kInvalidData = 3,
  kWhiteningImpossible = 4,
  kDegenerateScatter = 5,
  kNonConvergence = 6,
  kBootstrapAborted = 7,
  kExperimentAborted = 8,
  kIo = 9,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& what)
      : Error(ErrorCode::kInvalidArgument, what) {}
};

class InvalidData : public Error {
 public:
  explicit InvalidData(const std::string& what)
      : Error(ErrorCode::kInvalidData, what) {}
};

class WhiteningImpossible : public Error {
 public:
  explicit WhiteningImpossible(double condition_number)
      : Error(ErrorCode::kWhiteningImpossible,
              "whitening impossible: scatter condition number " +
                  std::to_string(condition_number)),
        condition_number_(condition_number) {}

  double condition_number() const noexcept { return condition_number_; }

 private:
  double condition_number_;
};

class DegenerateScatter : public Error {
 public:
  explicit DegenerateScatter(const std::string& where)
      : Error(ErrorCode::kDegenerateScatter, "degenerate scatter: " + where) {}
};

// Thrown by the M-estimation fixed point when max_iter is exhausted. The last
// iterate is carried so callers can inspect or warm-start from it.
class NonConvergence : public Error {
 public:
  NonConvergence(std::size_t iterations, double residual,
                 Eigen::VectorXd last_location, Eigen::MatrixXd last_scatter)
      : Error(ErrorCode::kNonConvergence,
              "M-estimator did not converge after " +
                  std::to_string(iterations) + " iterations (residual " +
                  std::to_string(residual) + ")"),
        iterations_(iterations),
        residual_(residual),
        last_location_(std::move(last_location)),
        last_scatter_(std::move(last_scatter)) {}

  std::size_t iterations() const noexcept { return iterations_; }
  double residual() const noexcept { return residual_; }
  const Eigen::VectorXd& last_location() const noexcept {
    return last_location_;
  }
  const Eigen::MatrixXd& last_scatter() const noexcept { return last_scatter_; }

 private:
  std::size_t iterations_;
  double residual_;
  Eigen::VectorXd last_location_;
  Eigen::MatrixXd last_scatter_;
};

class BootstrapAborted : public Error {
 public:
  explicit BootstrapAborted(std::size_t failures)
      : Error(ErrorCode::kBootstrapAborted,
              "bootstrap aborted after " + std::to_string(failures) +
                  " failed replicates"),
        failures_(failures) {}

  std::size_t failures() const noexcept { return failures_; }

 private:
  std::size_t failures_;
};

class ExperimentAborted : public Error {
 public:
  ExperimentAborted(std::size_t failures, std::size_t repetitions)
      : Error(ErrorCode::kExperimentAborted,
              "experiment aborted: " + std::to_string(failures) + " of " +
                  std::to_string(repetitions) + " repetitions failed"),
        failures_(failures) {}

  std::size_t failures() const noexcept { return failures_; }

 private:
  std::size_t failures_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorCode::kIo, what) {}
};

}  // namespace ngdim
