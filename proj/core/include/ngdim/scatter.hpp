#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ngdim/data.hpp"

namespace ngdim {

// Sample location and scatter functionals.
//
// Every functional here is the plug-in (empirical distribution) version of
// its population definition, so covariance-type sums use divisor n, not n-1.

enum class WeightKind { kIdentity, kHuber, kTLikelihood };

// Huber's scatter weight above the cutoff: kStandard uses c^2/(r^2 sigma^2)
// (continuous at r = c); kPaper uses c/(r^2 sigma^2).
enum class HuberTail { kStandard, kPaper };

// Weight functions w1 (location) and w2 (scatter) of an M-functional,
// together with the constants they were derived for.
struct WeightSpec {
  WeightKind kind = WeightKind::kIdentity;
  int dim = 0;             // p the constants belong to (0 = any, identity only)
  double q = 0.9;          // Huber: probability Pr(Q <= c^2), Q ~ chi2_p
  double c = 0.0;          // Huber: cutoff in Mahalanobis-distance units
  double sigma2 = 1.0;     // Huber: consistency scaling
  double nu = 1.0;         // t-likelihood degrees of freedom
  HuberTail tail = HuberTail::kStandard;

  // Both weights take the squared distance r^2.
  double w1(double r2) const noexcept;
  double w2(double r2) const noexcept;

  static WeightSpec identity() { return {}; }
  static WeightSpec t_likelihood(double nu, int dim);
};

// c^2 is the q-quantile of chi2_p and sigma^2 solves E(Q w2(sqrt(Q))) = p.
WeightSpec huber_weight_constants(double q, int dim,
                                  HuberTail tail = HuberTail::kStandard);

struct SolverOptions {
  double tol = 1e-6;
  std::size_t max_iter = 500;

  bool operator==(const SolverOptions&) const = default;
};

struct MEstimate {
  LocationVector location;
  ScatterMatrix scatter;
  std::size_t iterations = 0;
  // Fixed-point residual after each iteration.
  std::vector<double> residuals;
};

LocationVector mean_location(const DataMatrix& x);
ScatterMatrix sample_cov(const DataMatrix& x);
ScatterMatrix cov4(const DataMatrix& x);

// Joint M-estimate of location and scatter, iterated from (mean, cov).
// Converged when max(|S' - S|_F / |S|_F, |T' - T| / sqrt(tr(S')/p)) < tol.
MEstimate m_estimate(const DataMatrix& x, const WeightSpec& w,
                     const SolverOptions& options = {});

enum class ScatterKind { kCov, kCov4, kTLikelihood, kHuber };
enum class Symmetrization { kNone, kComplete, kIncomplete };

// A configured scatter functional.
struct ScatterSpec {
  ScatterKind kind = ScatterKind::kCov;
  double nu = 1.0;
  double huber_q = 0.9;
  HuberTail huber_tail = HuberTail::kStandard;
  Symmetrization symmetrization = Symmetrization::kNone;
  std::size_t incomplete_d = 100;
  // Seed of the column permutation applied before forming the cyclic lag
  // pairs of an incomplete symmetrization; nullopt keeps the input order.
  std::optional<std::uint64_t> pairing_seed = 0x5eed;
  SolverOptions solver;

  std::string label() const;
  bool operator==(const ScatterSpec&) const = default;
};

enum class LocationKind { kMean, kFirstScatter };

// (T, S1, S2). T defaults to the mean for every pair.
struct ScatterPairSpec {
  LocationKind location = LocationKind::kMean;
  ScatterSpec s1;
  ScatterSpec s2;

  Symmetrization symmetrization() const noexcept { return s1.symmetrization; }
  // Throws InvalidArgument when s1 == s2 or parameters are out of range.
  void validate() const;
  std::string label() const;

  static ScatterPairSpec cov_cov4();
  static ScatterPairSpec cau_hub(double nu = 1.0, double huber_q = 0.9,
                                 HuberTail tail = HuberTail::kStandard);
  static ScatterPairSpec scau_shub(double nu = 1.0, double huber_q = 0.9,
                                   HuberTail tail = HuberTail::kStandard);
  static ScatterPairSpec scaui_shubi(std::size_t d = 100, double nu = 1.0,
                                     double huber_q = 0.9,
                                     HuberTail tail = HuberTail::kStandard);
};

struct LocationScatter {
  // Empty for symmetrized functionals, which carry no location.
  std::optional<LocationVector> location;
  ScatterMatrix scatter;
};

// Evaluates one configured scatter functional (with its companion location
// when it has one).
LocationScatter evaluate_scatter(const DataMatrix& x, const ScatterSpec& spec);

// Base scatter applied to all n(n-1)/2 pairwise differences x_i - x_j (i < j)
// with the location pinned at the origin. `base.symmetrization` is ignored.
ScatterMatrix symmetrized_scatter(const DataMatrix& x, const ScatterSpec& base);

// Base scatter applied to the cyclic-lag difference set
// {x_i - x_{(i + l) mod n} : l = 1..d/2}, after permuting columns with
// `pairing_seed` when given; each observation enters exactly d differences.
ScatterMatrix incomplete_symmetrized_scatter(
    const DataMatrix& x, const ScatterSpec& base, std::size_t d,
    std::optional<std::uint64_t> pairing_seed);

// Column permutation used by incomplete_symmetrized_scatter.
std::vector<std::size_t> pairing_permutation(std::size_t n, std::uint64_t seed);

namespace detail {

// Functionals over a raw column sample, optionally with location fixed at the
// origin. These back both the public API and the difference-set scatters.
MEstimate m_estimate(const Eigen::MatrixXd& points, const WeightSpec& w,
                     const SolverOptions& options, bool location_at_origin);
ScatterMatrix cov4(const Eigen::MatrixXd& points, bool location_at_origin);
ScatterMatrix scatter_at_origin(const Eigen::MatrixXd& points,
                                const ScatterSpec& base);

}  // namespace detail

}  // namespace ngdim
