#pragma once

#include <Eigen/Dense>

namespace ngdim {

using LocationVector = Eigen::VectorXd;
using ScatterMatrix = Eigen::MatrixXd;

// A p x n sample, one p-variate observation per column. Construction
// validates p >= 2, n >= p + 1 and finiteness; an existing DataMatrix is
// therefore always a legal input to the scatter functionals.
class DataMatrix {
 public:
  explicit DataMatrix(Eigen::MatrixXd values);

  Eigen::Index dim() const noexcept { return values_.rows(); }
  Eigen::Index size() const noexcept { return values_.cols(); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::MatrixXd::ConstColXpr col(Eigen::Index i) const { return values_.col(i); }

 private:
  Eigen::MatrixXd values_;
};

// Checks the ScatterMatrix invariants: symmetric to 1e-10 relative and
// smallest eigenvalue >= -1e-10 * largest.
bool is_valid_scatter(const ScatterMatrix& s);

}  // namespace ngdim
