#pragma once

// Reference implementations used only as test oracles. They are deliberately
// naive and share no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Regularized lower incomplete gamma P(a, x) by its power series (fine for
// the moderate arguments used in tests).
inline double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * sum;
}

inline double chi2_cdf(double x, double df) { return gamma_p(0.5 * df, 0.5 * x); }

inline double chi2_quantile(double prob, double df) {
  double lo = 0.0;
  double hi = std::max(1.0, df);
  while (chi2_cdf(hi, df) < prob) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (chi2_cdf(mid, df) < prob ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

inline double chi2_density(double x, double df) {
  if (x <= 0.0) return 0.0;
  const double k = 0.5 * df;
  return std::exp((k - 1.0) * std::log(x) - 0.5 * x - k * std::log(2.0) - std::lgamma(k));
}

// Composite Simpson rule on [a, b] with an even number of panels.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 20000) {
  const double h = (b - a) / panels;
  double s = f(a) + f(b);
  for (int i = 1; i < panels; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

inline double variance_sum(const std::vector<double>& v) {
  const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s;
}

// Exhaustive search for the (p-k)-subset with the smallest sum of squared
// deviations. Returns input indices sorted by value.
inline std::vector<std::size_t> min_variance_subset(const std::vector<double>& d, std::size_t k) {
  const std::size_t p = d.size();
  const std::size_t m = p - k;
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  const double median = p % 2 ? sorted[p / 2] : 0.5 * (sorted[p / 2 - 1] + sorted[p / 2]);

  std::vector<std::size_t> best;
  double best_var = std::numeric_limits<double>::infinity();
  double best_gap = std::numeric_limits<double>::infinity();
  for (unsigned mask = 0; mask < (1u << p); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != m) continue;
    std::vector<std::size_t> idx;
    std::vector<double> vals;
    for (std::size_t i = 0; i < p; ++i)
      if (mask & (1u << i)) {
        idx.push_back(i);
        vals.push_back(d[i]);
      }
    const double var = variance_sum(vals);
    const double gap =
        std::abs(std::accumulate(vals.begin(), vals.end(), 0.0) / m - median);
    if (var < best_var || (var == best_var && gap < best_gap)) {
      best_var = var;
      best_gap = gap;
      best = idx;
    }
  }
  std::sort(best.begin(), best.end(), [&](std::size_t a, std::size_t b) {
    return d[a] < d[b] || (d[a] == d[b] && a < b);
  });
  return best;
}

inline double correlation(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const Eigen::VectorXd ca = a.array() - a.mean();
  const Eigen::VectorXd cb = b.array() - b.mean();
  return ca.dot(cb) / (ca.norm() * cb.norm());
}

// Largest principal angle between the row spaces of a and b.
inline double max_principal_angle(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const Eigen::MatrixXd qa = Eigen::HouseholderQR<Eigen::MatrixXd>(a.transpose())
                                 .householderQ() *
                             Eigen::MatrixXd::Identity(a.cols(), a.rows());
  const Eigen::MatrixXd qb = Eigen::HouseholderQR<Eigen::MatrixXd>(b.transpose())
                                 .householderQ() *
                             Eigen::MatrixXd::Identity(b.cols(), b.rows());
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(qa.transpose() * qb);
  const double smallest = svd.singularValues().minCoeff();
  return std::acos(std::clamp(smallest, -1.0, 1.0));
}

}  // namespace oracle
