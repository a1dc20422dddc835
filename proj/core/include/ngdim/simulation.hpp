#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ngdim/data.hpp"
#include "ngdim/estimator.hpp"
#include "ngdim/hypothesis.hpp"
#include "ngdim/methods.hpp"
#include "ngdim/rng.hpp"

namespace ngdim {

// Simulation models and experiment drivers.

enum class ModelName { kM1, kM2, kM1x, kM2x, kM1star, kM2star };

std::string to_string(ModelName m);
ModelName parse_model_name(std::string_view name);

struct Contamination {
  double fraction = 0.005;
  Eigen::VectorXd shift;
};

struct ModelSpec {
  ModelName name = ModelName::kM1;
  std::size_t p = 6;
  std::size_t q = 3;
  std::optional<Contamination> contamination;
  std::uint64_t seed = 0;

  // Canonical dimensions; the x variants shift 0.5% of columns by 10 * 1_p.
  static ModelSpec make(ModelName name, std::uint64_t seed = 0);
};

// Geometry of the parametric Gamma glyph: a top bar [0,1] x [1-t, 1] joined to
// a left bar [0,t] x [0,1], t = 0.15.
inline constexpr double kGlyphThickness = 0.15;

// Points uniform on the glyph; row 0 is x, row 1 is y.
Eigen::MatrixXd sample_gamma_glyph(std::size_t n, Rng& rng);

struct GlyphMoments {
  Eigen::Vector2d mean;
  Eigen::Matrix2d cov;
  double top_bar_probability = 0.0;  // P(y > 1 - t)
};
GlyphMoments glyph_moments();

struct SampledModel {
  DataMatrix x;
  Eigen::MatrixXd mixing;   // A
  Eigen::MatrixXd latent;   // Z, signals first
  std::size_t mixing_redraws = 0;
  std::vector<std::size_t> contaminated;  // ascending column indices
};

// Draw order: latent signals, noise, mixing matrix, contamination.
SampledModel sample_model(const ModelSpec& spec, std::size_t n, Rng& rng);
SampledModel sample_model(const ModelSpec& spec, std::size_t n);  // Rng(spec.seed)

// Adds `shift` to ceil(fraction * n) distinct uniformly chosen columns.
Eigen::MatrixXd contaminate(const Eigen::MatrixXd& x, double fraction,
                            const Eigen::VectorXd& shift, Rng& rng,
                            std::vector<std::size_t>* shifted = nullptr);
std::size_t contamination_count(double fraction, std::size_t n);

struct ExperimentConfig {
  ModelSpec model;  // model.seed is the master seed
  std::size_t n = 1000;
  std::vector<std::size_t> ks;
  std::vector<MethodSpec> methods;
  std::size_t repetitions = 200;
  std::size_t replicates = 200;  // M
  ModelAssumption assumption = ModelAssumption::kNgca;
  NoiseStrategy noise = NoiseStrategy::kParametric;
  double alpha = 0.05;
  std::size_t threads = 1;
};

struct RepetitionRecord {
  std::size_t repetition = 0;
  std::string method;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool rejected = false;
};

struct RateRow {
  std::string model;
  std::size_t n = 0;
  std::string method;
  std::string scatter_pair;
  std::string assumption;
  std::size_t k = 0;
  double rejection_rate = 0.0;
  std::size_t repetitions = 0;
  std::size_t replicates = 0;
};

struct SimulationReport {
  std::vector<RateRow> rows;
  std::vector<RepetitionRecord> records;  // successful repetitions only
  std::vector<std::size_t> failed_repetitions;
  std::uint64_t master_seed = 0;
  std::string rng = "philox4x32-10";
};

// Repetition r uses seed derive_seed(master, r): data from stream (seed_r, 0),
// every test at k from derive_seed(seed_r, 1, k). A repetition with any failed
// test is excluded; more than 2% failures throws ExperimentAborted.
SimulationReport rejection_rate_experiment(const ExperimentConfig& cfg);

struct EstimatorExperimentConfig {
  ModelSpec model;
  std::size_t n = 2000;
  std::vector<Strategy> strategies{Strategy::kIncremental};
  std::vector<MethodSpec> methods;
  std::size_t repetitions = 100;
  std::size_t replicates = 200;
  ModelAssumption assumption = ModelAssumption::kNgca;
  NoiseStrategy noise = NoiseStrategy::kParametric;
  double alpha = 0.05;
  std::size_t threads = 1;
};

struct EstimateRecord {
  std::size_t repetition = 0;
  std::string strategy;
  std::string method;
  std::size_t q_hat = 0;
  std::size_t tests = 0;
};

struct FrequencyRow {
  std::string strategy;
  std::string method;
  std::size_t n = 0;
  std::vector<std::size_t> counts;  // counts[q] for q = 0..p-1
  std::size_t repetitions = 0;

  double frequency(std::size_t q) const;
  std::size_t mode() const;  // smallest q among the most frequent
};

struct EstimatorReport {
  std::string model;
  std::vector<FrequencyRow> rows;
  std::vector<EstimateRecord> records;
  std::vector<std::size_t> failed_repetitions;
  std::uint64_t master_seed = 0;
  std::string rng = "philox4x32-10";
};

// Strategies on the same repetition and method share one memoized oracle, so
// a k tested by both gets one p-value.
EstimatorReport estimator_experiment(const EstimatorExperimentConfig& cfg);

}  // namespace ngdim
