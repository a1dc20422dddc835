#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ngdim/estimator.hpp"
#include "ngdim/hypothesis.hpp"
#include "ngdim/methods.hpp"
#include "ngdim/unmixing.hpp"

namespace ngdim::cli {

inline constexpr int kReportSchemaVersion = 1;

enum class Command { kTest, kEstimate, kSimulate, kUnmix };
enum class TestProcedure { kBootstrap, kAsymptotic, kChi2 };

struct RunConfig {
  Command command = Command::kTest;

  // test / estimate / unmix read a CSV; simulate generates from a model.
  std::string input;
  std::string model = "M1";

  std::string method = "cov-cov4";
  std::vector<std::string> methods{"cov-cov4"};  // simulate
  MethodOptions method_options;
  ModelAssumption assumption = ModelAssumption::kNgca;
  NoiseStrategy noise = NoiseStrategy::kParametric;

  TestProcedure procedure = TestProcedure::kBootstrap;
  TkSplit tk_split = TkSplit::kDecomposition;
  Sigma1Scaling sigma1_scaling = Sigma1Scaling::kEstimate;
  std::size_t draws = 100000;

  std::optional<std::size_t> k;  // required by test, optional partition for unmix
  double alpha = 0.05;
  std::size_t replicates = 200;  // M
  std::uint64_t seed = 1;

  Strategy strategy = Strategy::kIncremental;
  std::vector<Strategy> strategies;  // non-empty: simulate runs the estimator experiment

  std::vector<std::size_t> ns{1000};
  std::size_t repetitions = 200;
  std::vector<std::size_t> ks{2, 3, 4};
  bool full = false;

  std::string report_path;
  std::string csv_path;     // replicate-level CSV (test, simulate)
  std::string output_path;  // latent CSV (unmix)
  std::size_t threads = 0;  // 0 = available parallelism
};

// Parses argv into a RunConfig. NGDIM_SEED and NGDIM_THREADS apply when the
// corresponding flag is absent. Returns nullopt after printing help; throws
// InvalidArgument on malformed input.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out);

// Everything in the config that affects results. Output paths and the thread
// count are left out, so reruns differing only in those produce identical
// reports.
nlohmann::json config_echo(const RunConfig& cfg);

// Runs one command; writes a table to `out` and the report / CSV files the
// config asks for. Throws ngdim::Error.
void run_command(const RunConfig& cfg, std::ostream& out);

// Full CLI flow. Exit status 0 on success (statistical rejections included),
// otherwise the numeric ErrorCode of the failure.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ngdim::cli
