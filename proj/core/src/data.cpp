#include "ngdim/data.hpp"

#include <string>

#include "ngdim/error.hpp"

namespace ngdim {

DataMatrix::DataMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
  const auto p = values_.rows();
  const auto n = values_.cols();
  if (p < 2) throw InvalidData("data dimension p must be at least 2, got " + std::to_string(p));
  if (n < p + 1)
    throw InvalidData("sample size n = " + std::to_string(n) +
                      " must be at least p + 1 = " + std::to_string(p + 1));
  if (!values_.allFinite()) throw InvalidData("data contains non-finite entries");
}

bool is_valid_scatter(const ScatterMatrix& s) {
  if (s.rows() != s.cols() || s.size() == 0 || !s.allFinite()) return false;
  const double scale = s.cwiseAbs().maxCoeff();
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1e-300)) return false;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return ev.minCoeff() >= -1e-10 * std::max(ev.maxCoeff(), 0.0);
}

}  // namespace ngdim
