#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ngdim/data.hpp"
#include "ngdim/rng.hpp"
#include "ngdim/scatter.hpp"
#include "ngdim/unmixing.hpp"

namespace ngdim {

// Tests of H0k: "there are exactly k non-Gaussian components".

enum class NoiseStrategy { kParametric, kRotation };

enum class TestMethod { kBootstrap, kAsymptoticTk, kAsymptoticTk1, kAsymptoticTk2 };

// Which eigenvalue-dispersion statistic a bootstrap test uses:
//  kVariance  - minimal variance over (p-k)-subsets (any scatter pair);
//  kKnownNoise - FOBI's n * sum (d - 1)^2 over the p-k values closest to one.
enum class BootstrapStatistic { kVariance, kKnownNoise };

// Split of T_k into an equality part and a mean-deviation part.
//  kDecomposition: n sum (d - dbar)^2 and n (p-k) (dbar - 1)^2, summing to T_k.
//  kPrinted:       n (sum d^2 - (sum d)^2) and n (sum (d - 1))^2.
enum class TkSplit { kDecomposition, kPrinted };

// Scale used in the chi-squared normalizations of T_k1 / T_k2.
//  kEstimate: 2 s and 2 s + 4(p-k), with s = sigma1_hat as estimated
//             (the same s that enters the C_k law linearly);
//  kSquared:  2 s^2 and 2 s^2 + 4(p-k).
enum class Sigma1Scaling { kEstimate, kSquared };

std::string to_string(TestMethod m);

struct TestOutcome {
  double statistic = 0.0;
  double p_value = 1.0;
  TestMethod method = TestMethod::kBootstrap;
  std::size_t k = 0;
  std::vector<double> replicates;     // bootstrap only, length M
  std::optional<double> sigma1_hat;   // asymptotic only
  std::uint64_t seed = 0;
  std::size_t replicate_failures = 0;
};

struct BootstrapConfig {
  ModelAssumption model = ModelAssumption::kNgca;
  NoiseStrategy noise = NoiseStrategy::kParametric;
  std::size_t replicates = 200;  // M
  std::uint64_t seed = 0;
  ScatterPairSpec scatter = ScatterPairSpec::cov_cov4();
  BootstrapStatistic statistic = BootstrapStatistic::kVariance;
  // Worker threads for the replicate loop (0 = hardware concurrency). Results
  // do not depend on this value.
  std::size_t threads = 1;
};

// Indices of the `count` values closest to one by (d - 1)^2, ties toward the
// smaller value.
std::vector<std::size_t> closest_to_one(std::span<const double> d, std::size_t count);

double statistic_Tk_fobi(std::span<const double> d, std::size_t k, std::size_t n);
double statistic_variance_tk(std::span<const double> d, std::size_t k, std::size_t n);

struct TkParts {
  double tk1 = 0.0;
  double tk2 = 0.0;
};
TkParts statistics_Tk1_Tk2(std::span<const double> d, std::size_t k, std::size_t n,
                           TkSplit split = TkSplit::kDecomposition);

// Fourth-moment constant of the limiting law, from a standardized latent
// sample (p x n). Floored at 1e-6.
double sigma1_hat(const Eigen::MatrixXd& z, ModelAssumption model);

// Degrees of freedom (p-k-1)(p-k+2)/2 of the chi-squared part Q1.
std::size_t q1_degrees_of_freedom(std::size_t p, std::size_t k);

// P(C_k >= observed) for C_k = 2 s Q1 + (2 s + 4(p-k)) Q2 by seeded Monte Carlo.
double limiting_law_p_value(double observed, double sigma1, std::size_t p, std::size_t k,
                            std::uint64_t seed, std::size_t draws);

// FOBI asymptotic test: statistic (p+2)^2 T_k against C_k.
TestOutcome asymptotic_test_fobi(const DataMatrix& x, std::size_t k, ModelAssumption model,
                                 std::uint64_t seed, std::size_t draws = 100000);

// (p+2)^2 T_k1 / (2 s) ~ chi2_{(p-k-1)(p-k+2)/2} and
// (p+2)^2 T_k2 / (2 s + 4(p-k)) ~ chi2_1 (see Sigma1Scaling).
std::pair<TestOutcome, TestOutcome> chi2_tests_Tk1_Tk2(
    const DataMatrix& x, std::size_t k, ModelAssumption model,
    TkSplit split = TkSplit::kDecomposition,
    Sigma1Scaling scaling = Sigma1Scaling::kEstimate);

// Known-noise diagnostic n tr(B^2), B the trailing (p-k) block of S2 - I
// expressed in a basis whose last p-k coordinates span the noise.
double statistic_Tk_star(const ScatterMatrix& s2_latent, std::size_t k, std::size_t n);

Eigen::MatrixXd haar_orthogonal(std::size_t m, Rng& rng);

// Bootstrap signal block: NGCA resamples whole columns, NGICA resamples each
// row independently.
Eigen::MatrixXd resample_signal(const Eigen::MatrixXd& signal, ModelAssumption model, Rng& rng);

// Bootstrap noise block: Gaussian with the empirical covariance, or each
// column premultiplied by an independent Haar orthogonal matrix.
Eigen::MatrixXd resample_noise(const Eigen::MatrixXd& noise, NoiseStrategy strategy, Rng& rng);

// Two-scatter bootstrap test. p-value = (#{t* >= t} + 1) / (M + 1).
TestOutcome bootstrap_test(const DataMatrix& x, std::size_t k, const BootstrapConfig& config);

}  // namespace ngdim
