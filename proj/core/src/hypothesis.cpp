#include "ngdim/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ngdim/chi_squared.hpp"
#include "ngdim/diagnostics.hpp"
#include "ngdim/error.hpp"
#include "ngdim/parallel.hpp"

namespace ngdim {
namespace {

constexpr std::size_t kMaxReplicateFailures = 10;

double clamp_p_value(double p) {
  return std::clamp(p, std::numeric_limits<double>::min(), 1.0);
}

double sum_squared_deviation(std::span<const double> d, const std::vector<std::size_t>& idx,
                             double center) {
  double ss = 0.0;
  for (std::size_t i : idx) ss += (d[i] - center) * (d[i] - center);
  return ss;
}

double subset_mean(std::span<const double> d, const std::vector<std::size_t>& idx) {
  double sum = 0.0;
  for (std::size_t i : idx) sum += d[i];
  return sum / static_cast<double>(idx.size());
}

std::span<const double> as_span(const Eigen::VectorXd& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Signal rows first (decreasing eigenvalue), then the p-k noise rows.
std::vector<std::size_t> noise_last_ordering(std::span<const double> d,
                                             const std::vector<std::size_t>& noise) {
  std::vector<std::size_t> signal;
  for (std::size_t i = 0; i < d.size(); ++i)
    if (std::find(noise.begin(), noise.end(), i) == noise.end()) signal.push_back(i);
  auto by_value_desc = [&](std::size_t a, std::size_t b) { return d[a] > d[b]; };
  std::stable_sort(signal.begin(), signal.end(), by_value_desc);
  std::vector<std::size_t> tail = noise;
  std::stable_sort(tail.begin(), tail.end(), by_value_desc);
  signal.insert(signal.end(), tail.begin(), tail.end());
  return signal;
}

struct FittedStatistic {
  double statistic;
  UnmixingResult fit;
};

FittedStatistic fit_statistic(const DataMatrix& x, std::size_t k, const BootstrapConfig& config) {
  FittedStatistic out{0.0, two_scatter_unmixing(x, config.scatter)};
  const auto n = static_cast<std::size_t>(x.size());
  const auto d = as_span(out.fit.eigenvalues);
  if (config.statistic == BootstrapStatistic::kVariance) {
    out.statistic = statistic_variance_tk(d, k, n);
    out.fit.ordering = order_for_partition(d, k).ordering;
  } else {
    out.statistic = statistic_Tk_fobi(d, k, n);
    out.fit.ordering = noise_last_ordering(d, closest_to_one(d, d.size() - k));
  }
  out.fit.noise_index = k;
  return out;
}

}  // namespace

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::kBootstrap: return "bootstrap";
    case TestMethod::kAsymptoticTk: return "asymptotic_Tk";
    case TestMethod::kAsymptoticTk1: return "asymptotic_Tk1";
    case TestMethod::kAsymptoticTk2: return "asymptotic_Tk2";
  }
  return "unknown";
}

std::vector<std::size_t> closest_to_one(std::span<const double> d, std::size_t count) {
  if (count > d.size()) throw InvalidArgument("cannot select more values than available");
  std::vector<std::size_t> idx(d.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    const double da = (d[a] - 1.0) * (d[a] - 1.0);
    const double db = (d[b] - 1.0) * (d[b] - 1.0);
    if (da != db) return da < db;
    return d[a] < d[b];
  });
  idx.resize(count);
  return idx;
}

double statistic_Tk_fobi(std::span<const double> d, std::size_t k, std::size_t n) {
  if (k >= d.size()) throw InvalidArgument("T_k needs k <= p - 1");
  return static_cast<double>(n) * sum_squared_deviation(d, closest_to_one(d, d.size() - k), 1.0);
}

double statistic_variance_tk(std::span<const double> d, std::size_t k, std::size_t n) {
  const Partition part = order_for_partition(d, k);
  return static_cast<double>(n) *
         sum_squared_deviation(d, part.noise, subset_mean(d, part.noise));
}

TkParts statistics_Tk1_Tk2(std::span<const double> d, std::size_t k, std::size_t n,
                           TkSplit split) {
  if (k >= d.size()) throw InvalidArgument("T_k1/T_k2 need k <= p - 1");
  const auto selected = closest_to_one(d, d.size() - k);
  const double m = static_cast<double>(selected.size());
  const double nn = static_cast<double>(n);
  TkParts parts;
  if (split == TkSplit::kDecomposition) {
    const double mean = subset_mean(d, selected);
    parts.tk1 = nn * sum_squared_deviation(d, selected, mean);
    parts.tk2 = nn * m * (mean - 1.0) * (mean - 1.0);
  } else {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i : selected) {
      sum += d[i];
      sum_sq += d[i] * d[i];
    }
    parts.tk1 = nn * (sum_sq - sum * sum);
    parts.tk2 = nn * (sum - m) * (sum - m);
  }
  return parts;
}

double sigma1_hat(const Eigen::MatrixXd& z, ModelAssumption model) {
  const double p = static_cast<double>(z.rows());
  const double n = static_cast<double>(z.cols());
  double value;
  if (model == ModelAssumption::kNgica) {
    value = z.array().square().square().sum() / n - p + 8.0;
  } else {
    value = z.colwise().squaredNorm().array().square().sum() / n - p * p + 8.0;
  }
  return std::max(value, 1e-6);
}

std::size_t q1_degrees_of_freedom(std::size_t p, std::size_t k) {
  if (k + 2 > p) throw InvalidArgument("limiting law needs p - k >= 2 (Q1 degrees of freedom > 0)");
  return (p - k - 1) * (p - k + 2) / 2;
}

double limiting_law_p_value(double observed, double sigma1, std::size_t p, std::size_t k,
                            std::uint64_t seed, std::size_t draws) {
  const double df1 = static_cast<double>(q1_degrees_of_freedom(p, k));
  if (draws == 0) throw InvalidArgument("Monte Carlo draw count must be positive");
  const double a = 2.0 * sigma1;
  const double b = 2.0 * sigma1 + 4.0 * static_cast<double>(p - k);
  Rng rng(seed);
  std::size_t exceed = 0;
  for (std::size_t i = 0; i < draws; ++i) {
    const double c = a * rng.chi_squared(df1) + b * rng.chi_squared(1.0);
    if (c >= observed) ++exceed;
  }
  return static_cast<double>(exceed + 1) / static_cast<double>(draws + 1);
}

TestOutcome asymptotic_test_fobi(const DataMatrix& x, std::size_t k, ModelAssumption model,
                                 std::uint64_t seed, std::size_t draws) {
  const auto p = static_cast<std::size_t>(x.dim());
  q1_degrees_of_freedom(p, k);
  const UnmixingResult fit = two_scatter_unmixing(x, ScatterPairSpec::cov_cov4());
  const auto n = static_cast<std::size_t>(x.size());
  const double scale = static_cast<double>((p + 2) * (p + 2));

  TestOutcome out;
  out.method = TestMethod::kAsymptoticTk;
  out.k = k;
  out.seed = seed;
  out.statistic = scale * statistic_Tk_fobi(as_span(fit.eigenvalues), k, n);
  out.sigma1_hat = sigma1_hat(latent_components(x, fit), model);
  out.p_value = limiting_law_p_value(out.statistic, *out.sigma1_hat, p, k, seed, draws);
  return out;
}

std::pair<TestOutcome, TestOutcome> chi2_tests_Tk1_Tk2(const DataMatrix& x, std::size_t k,
                                                      ModelAssumption model, TkSplit split,
                                                      Sigma1Scaling scaling) {
  const auto p = static_cast<std::size_t>(x.dim());
  const double df1 = static_cast<double>(q1_degrees_of_freedom(p, k));
  const UnmixingResult fit = two_scatter_unmixing(x, ScatterPairSpec::cov_cov4());
  const auto n = static_cast<std::size_t>(x.size());
  const double scale = static_cast<double>((p + 2) * (p + 2));
  const TkParts parts = statistics_Tk1_Tk2(as_span(fit.eigenvalues), k, n, split);
  const double s = sigma1_hat(latent_components(x, fit), model);
  const double base = scaling == Sigma1Scaling::kEstimate ? 2.0 * s : 2.0 * s * s;

  TestOutcome first;
  first.method = TestMethod::kAsymptoticTk1;
  first.k = k;
  first.sigma1_hat = s;
  first.statistic = scale * parts.tk1 / base;
  first.p_value = clamp_p_value(chi_squared_sf(first.statistic, df1));

  TestOutcome second;
  second.method = TestMethod::kAsymptoticTk2;
  second.k = k;
  second.sigma1_hat = s;
  second.statistic = scale * parts.tk2 / (base + 4.0 * static_cast<double>(p - k));
  second.p_value = clamp_p_value(chi_squared_sf(second.statistic, 1.0));
  return {first, second};
}

double statistic_Tk_star(const ScatterMatrix& s2_latent, std::size_t k, std::size_t n) {
  const auto p = static_cast<std::size_t>(s2_latent.rows());
  if (k >= p) throw InvalidArgument("T_k* needs k <= p - 1");
  const auto m = static_cast<Eigen::Index>(p - k);
  const Eigen::MatrixXd block =
      (s2_latent - Eigen::MatrixXd::Identity(s2_latent.rows(), s2_latent.cols()))
          .bottomRightCorner(m, m);
  return static_cast<double>(n) * (block * block).trace();
}

Eigen::MatrixXd haar_orthogonal(std::size_t m, Rng& rng) {
  const auto dim = static_cast<Eigen::Index>(m);
  Eigen::MatrixXd g(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) g(i, j) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(dim, dim);
  const Eigen::MatrixXd& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < dim; ++j)
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  return q;
}

Eigen::MatrixXd resample_signal(const Eigen::MatrixXd& signal, ModelAssumption model, Rng& rng) {
  const Eigen::Index k = signal.rows();
  const Eigen::Index n = signal.cols();
  Eigen::MatrixXd out(k, n);
  if (k == 0) return out;
  const auto size = static_cast<std::size_t>(n);
  if (model == ModelAssumption::kNgca) {
    for (Eigen::Index i = 0; i < n; ++i)
      out.col(i) = signal.col(static_cast<Eigen::Index>(rng.index(size)));
  } else {
    for (Eigen::Index r = 0; r < k; ++r)
      for (Eigen::Index i = 0; i < n; ++i)
        out(r, i) = signal(r, static_cast<Eigen::Index>(rng.index(size)));
  }
  return out;
}

Eigen::MatrixXd resample_noise(const Eigen::MatrixXd& noise, NoiseStrategy strategy, Rng& rng) {
  const Eigen::Index m = noise.rows();
  const Eigen::Index n = noise.cols();
  if (m < 1) throw InvalidArgument("noise block must have at least one row");
  Eigen::MatrixXd out(m, n);
  if (strategy == NoiseStrategy::kRotation) {
    for (Eigen::Index i = 0; i < n; ++i)
      out.col(i) = haar_orthogonal(static_cast<std::size_t>(m), rng) * noise.col(i);
    return out;
  }
  const Eigen::MatrixXd centered = noise.colwise() - noise.rowwise().mean();
  Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(n);
  cov = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  Eigen::VectorXd ev = eig.eigenvalues();
  const double floor = 1e-10 * std::max(cov.trace(), std::numeric_limits<double>::min());
  if (ev.minCoeff() < floor) {
    warn("noise covariance is singular; eigenvalues floored at 1e-10 * trace");
    ev = ev.cwiseMax(floor);
  }
  const Eigen::MatrixXd root = eig.eigenvectors() * ev.cwiseSqrt().asDiagonal();
  Eigen::MatrixXd g(m, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index r = 0; r < m; ++r) g(r, i) = rng.normal();
  out.noalias() = root * g;
  return out;
}

TestOutcome bootstrap_test(const DataMatrix& x, std::size_t k, const BootstrapConfig& config) {
  const auto p = static_cast<std::size_t>(x.dim());
  if (config.replicates < 1) throw InvalidArgument("bootstrap needs M >= 1 replicates");
  if (config.statistic == BootstrapStatistic::kVariance && k + 2 > p)
    throw InvalidArgument("variance statistic needs k <= p - 2");
  if (config.statistic == BootstrapStatistic::kKnownNoise && k + 1 > p)
    throw InvalidArgument("known-noise statistic needs k <= p - 1");
  config.scatter.validate();

  const FittedStatistic observed = fit_statistic(x, k, config);
  Eigen::MatrixXd unmixing = observed.fit.ordered_unmixing();
  Eigen::MatrixXd latent = unmixing * (x.values().colwise() - observed.fit.location);
  // Orient each latent row to a nonnegative third moment. The orientation is
  // then a property of the data rather than of W's entries, which keeps the
  // resampled samples (and hence the p-value) affine invariant.
  for (Eigen::Index r = 0; r < latent.rows(); ++r) {
    if (latent.row(r).array().cube().sum() < 0.0) {
      latent.row(r) *= -1.0;
      unmixing.row(r) *= -1.0;
    }
  }
  const auto kk = static_cast<Eigen::Index>(k);
  const Eigen::MatrixXd signal = latent.topRows(kk);
  const Eigen::MatrixXd noise = latent.bottomRows(latent.rows() - kk);
  const Eigen::MatrixXd mixing = unmixing.partialPivLu().inverse();

  const std::size_t m = config.replicates;
  std::vector<double> stats(m, 0.0);
  std::vector<unsigned> failures(m, 0);
  parallel_for(m, config.threads, [&](std::size_t j) {
    for (unsigned attempt = 0; attempt < 2; ++attempt) {
      Rng rng(derive_seed(config.seed, j, attempt));
      Eigen::MatrixXd z(latent.rows(), latent.cols());
      z.topRows(kk) = resample_signal(signal, config.model, rng);
      z.bottomRows(z.rows() - kk) = resample_noise(noise, config.noise, rng);
      try {
        stats[j] = fit_statistic(DataMatrix(mixing * z), k, config).statistic;
        return;
      } catch (const Error&) {
        ++failures[j];
      }
    }
  });

  std::size_t total_failures = 0;
  bool exhausted = false;
  for (unsigned f : failures) {
    total_failures += f;
    exhausted = exhausted || f >= 2;
  }
  if (exhausted || total_failures >= kMaxReplicateFailures) throw BootstrapAborted(total_failures);

  TestOutcome out;
  out.method = TestMethod::kBootstrap;
  out.k = k;
  out.seed = config.seed;
  out.statistic = observed.statistic;
  out.replicate_failures = total_failures;
  const auto exceed = static_cast<std::size_t>(
      std::count_if(stats.begin(), stats.end(), [&](double t) { return t >= out.statistic; }));
  out.p_value = static_cast<double>(exceed + 1) / static_cast<double>(m + 1);
  out.replicates = std::move(stats);
  return out;
}

}  // namespace ngdim
