#include "ngdim/unmixing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ngdim/error.hpp"

namespace ngdim {

std::string to_string(ModelAssumption m) { return m == ModelAssumption::kNgca ? "ngca" : "ngica"; }

Eigen::MatrixXd inverse_sqrt(const ScatterMatrix& s) {
  if (s.rows() != s.cols()) throw InvalidArgument("scatter matrix must be square");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.info() != Eigen::Success || !s.allFinite())
    throw WhiteningImpossible(std::numeric_limits<double>::infinity());
  const Eigen::VectorXd& ev = eig.eigenvalues();
  const double lo = ev.minCoeff();
  const double hi = ev.maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-12 * hi))
    throw WhiteningImpossible(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::MatrixXd root = v * ev.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  return 0.5 * (root + root.transpose());
}

Whitened whiten(const DataMatrix& x, const LocationVector& location, const ScatterMatrix& s1) {
  if (location.size() != x.dim() || s1.rows() != x.dim())
    throw InvalidArgument("location/scatter dimension does not match the data");
  Whitened out;
  out.inverse_root = inverse_sqrt(s1);
  out.data = out.inverse_root * (x.values().colwise() - location);
  return out;
}

Eigen::MatrixXd UnmixingResult::ordered_unmixing() const {
  Eigen::MatrixXd w(unmixing.rows(), unmixing.cols());
  for (std::size_t i = 0; i < ordering.size(); ++i)
    w.row(static_cast<Eigen::Index>(i)) = unmixing.row(static_cast<Eigen::Index>(ordering[i]));
  return w;
}

Eigen::VectorXd UnmixingResult::ordered_eigenvalues() const {
  Eigen::VectorXd d(eigenvalues.size());
  for (std::size_t i = 0; i < ordering.size(); ++i)
    d[static_cast<Eigen::Index>(i)] = eigenvalues[static_cast<Eigen::Index>(ordering[i])];
  return d;
}

UnmixingResult two_scatter_unmixing(const DataMatrix& x, const ScatterPairSpec& spec) {
  spec.validate();
  const LocationScatter first = evaluate_scatter(x, spec.s1);
  LocationVector location =
      spec.location == LocationKind::kFirstScatter ? *first.location : mean_location(x);
  Whitened standardized = whiten(x, location, first.scatter);
  const ScatterMatrix s2 = evaluate_scatter(DataMatrix(std::move(standardized.data)), spec.s2).scatter;

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s2);
  if (eig.info() != Eigen::Success) throw DegenerateScatter("eigendecomposition of S2 failed");
  const Eigen::Index p = x.dim();

  UnmixingResult result;
  result.unmixing.resize(p, p);
  result.eigenvalues.resize(p);
  // Eigen returns ascending eigenvalues; store descending.
  for (Eigen::Index i = 0; i < p; ++i) {
    const Eigen::Index src = p - 1 - i;
    result.eigenvalues[i] = eig.eigenvalues()[src];
    result.unmixing.row(i) = eig.eigenvectors().col(src).transpose() * standardized.inverse_root;
  }
  for (Eigen::Index i = 0; i < p; ++i) {
    Eigen::Index arg;
    result.unmixing.row(i).cwiseAbs().maxCoeff(&arg);
    if (result.unmixing(i, arg) < 0.0) result.unmixing.row(i) *= -1.0;
  }
  result.location = std::move(location);
  result.ordering.resize(static_cast<std::size_t>(p));
  std::iota(result.ordering.begin(), result.ordering.end(), std::size_t{0});
  return result;
}

namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

Partition order_for_partition(std::span<const double> values, std::size_t k) {
  const std::size_t p = values.size();
  if (p < 2 || k + 2 > p)
    throw InvalidArgument("partition needs k <= p - 2 (noise block of at least two values)");
  const std::size_t m = p - k;

  std::vector<std::size_t> sorted(p);
  std::iota(sorted.begin(), sorted.end(), std::size_t{0});
  std::stable_sort(sorted.begin(), sorted.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  const double overall_median = median({values.begin(), values.end()});

  // For a fixed subset size the variance minimizer is a contiguous run of the
  // sorted values, so a sliding window over k + 1 starts suffices.
  std::size_t best_start = 0;
  double best_ss = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  for (std::size_t start = 0; start + m <= p; ++start) {
    double sum = 0.0;
    for (std::size_t j = start; j < start + m; ++j) sum += values[sorted[j]];
    const double mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (std::size_t j = start; j < start + m; ++j) {
      const double dev = values[sorted[j]] - mean;
      ss += dev * dev;
    }
    const double gap = std::abs(mean - overall_median);
    if (ss < best_ss || (ss == best_ss && gap < best_gap)) {
      best_start = start;
      best_ss = ss;
      best_gap = gap;
    }
  }

  Partition part;
  part.noise.assign(sorted.begin() + static_cast<std::ptrdiff_t>(best_start),
                    sorted.begin() + static_cast<std::ptrdiff_t>(best_start + m));
  for (std::size_t j = p; j-- > 0;)
    if (j < best_start || j >= best_start + m) part.ordering.push_back(sorted[j]);
  for (std::size_t j = best_start + m; j-- > best_start;) part.ordering.push_back(sorted[j]);
  return part;
}

UnmixingResult partition_unmixing(UnmixingResult result, std::size_t k) {
  const std::vector<double> d(result.eigenvalues.data(),
                              result.eigenvalues.data() + result.eigenvalues.size());
  result.ordering = order_for_partition(d, k).ordering;
  result.noise_index = k;
  return result;
}

Eigen::MatrixXd latent_components(const Eigen::MatrixXd& x, const UnmixingResult& result) {
  if (x.rows() != result.dim())
    throw InvalidArgument("data dimension does not match the unmixing matrix");
  return result.ordered_unmixing() * (x.colwise() - result.location);
}

Eigen::MatrixXd latent_components(const DataMatrix& x, const UnmixingResult& result) {
  return latent_components(x.values(), result);
}

}  // namespace ngdim
