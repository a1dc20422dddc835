#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ngdim/data.hpp"
#include "ngdim/scatter.hpp"

namespace ngdim {

enum class ModelAssumption { kNgca, kNgica };

std::string to_string(ModelAssumption m);

struct Whitened {
  Eigen::MatrixXd data;           // S1^{-1/2} (X - T 1^T)
  Eigen::MatrixXd inverse_root;   // the symmetric S1^{-1/2}
};

// Unique symmetric positive definite inverse square root. Throws
// WhiteningImpossible (with the condition number) unless the smallest
// eigenvalue exceeds 1e-12 times the largest.
Eigen::MatrixXd inverse_sqrt(const ScatterMatrix& s);

Whitened whiten(const DataMatrix& x, const LocationVector& location,
                const ScatterMatrix& s1);

// Result of the two-scatter transformation.
//
// `unmixing` and `eigenvalues` are stored in raw descending-eigenvalue order;
// `ordering` maps output positions to raw rows (identity until a partition
// is applied) and `noise_index` marks where the noise block starts in that
// ordering.
struct UnmixingResult {
  Eigen::MatrixXd unmixing;
  Eigen::VectorXd eigenvalues;
  LocationVector location;
  std::vector<std::size_t> ordering;
  std::optional<std::size_t> noise_index;

  Eigen::Index dim() const noexcept { return unmixing.rows(); }
  // W with rows permuted per `ordering`.
  Eigen::MatrixXd ordered_unmixing() const;
  Eigen::VectorXd ordered_eigenvalues() const;
};

// W = U^T S1^{-1/2}, U the eigenvectors of S2 on the S1-standardized data.
// Rows are signed so that each row's largest-magnitude entry is positive.
UnmixingResult two_scatter_unmixing(const DataMatrix& x, const ScatterPairSpec& spec);

struct Partition {
  // Signal positions first (decreasing value), then the noise subset
  // (decreasing value).
  std::vector<std::size_t> ordering;
  std::vector<std::size_t> noise;  // indices into the input, ascending value
};

// Selects the (p-k)-subset of `values` with minimal variance. Ties go to the
// subset whose mean is closest to the median of all values, then to the lower
// sorted positions. Requires k <= p - 2.
Partition order_for_partition(std::span<const double> values, std::size_t k);

// Returns a copy of `result` whose ordering puts the minimal-variance
// (p-k)-block last.
UnmixingResult partition_unmixing(UnmixingResult result, std::size_t k);

// Z = W (X - T 1^T), rows in `result.ordering` order.
Eigen::MatrixXd latent_components(const DataMatrix& x, const UnmixingResult& result);
Eigen::MatrixXd latent_components(const Eigen::MatrixXd& x, const UnmixingResult& result);

}  // namespace ngdim
