#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "ngdim/error.hpp"
#include "ngdim/rng.hpp"
#include "ngdim/unmixing.hpp"
#include "oracles.hpp"

using namespace ngdim;
using Catch::Approx;

namespace {

Eigen::MatrixXd gaussian(Eigen::Index p, Eigen::Index n, Rng& rng) {
  Eigen::MatrixXd x(p, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < p; ++i) x(i, j) = rng.normal();
  return x;
}

// Latent sample with distinct kurtoses: uniform, exponential-like, then
// Gaussian noise rows.
Eigen::MatrixXd ngica_latent(Eigen::Index n, Eigen::Index noise, Rng& rng) {
  Eigen::MatrixXd z(2 + noise, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    z(0, j) = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    z(1, j) = (rng.chi_squared(4.0) - 4.0) / std::sqrt(8.0);
    for (Eigen::Index i = 0; i < noise; ++i) z(2 + i, j) = rng.normal();
  }
  return z;
}

double rel_err(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

}  // namespace

TEST_CASE("inverse square roots and whitening on simple inputs") {
  Eigen::Matrix2d s;
  s << 4, 0, 0, 9;
  Eigen::Matrix2d ref;
  ref << 0.5, 0, 0, 1.0 / 3.0;
  CHECK(inverse_sqrt(s).isApprox(ref, 1e-14));

  Rng rng(1);
  const DataMatrix x(gaussian(2, 20, rng));
  const Eigen::Vector2d t(0.5, -1.0);
  const Whitened w = whiten(x, t, Eigen::Matrix2d::Identity());
  CHECK(w.data.isApprox(x.values().colwise() - t, 1e-14));

  Eigen::Matrix2d singular;
  singular << 1, 1, 1, 1;
  CHECK_THROWS_AS(inverse_sqrt(singular), WhiteningImpossible);
  try {
    Eigen::Matrix2d near;
    near << 1, 0, 0, 1e-14;
    inverse_sqrt(near);
    FAIL("expected WhiteningImpossible");
  } catch (const WhiteningImpossible& e) {
    CHECK(e.condition_number() == Approx(1e14).epsilon(1e-6));
  }
}

TEST_CASE("whitening with the sample covariance gives identity covariance") {
  Rng rng(3);
  Eigen::MatrixXd z = gaussian(4, 500, rng);
  z = Eigen::MatrixXd::Random(4, 4) * z;
  const DataMatrix x(z);
  const Whitened w = whiten(x, mean_location(x), sample_cov(x));
  CHECK((sample_cov(DataMatrix(w.data)) - Eigen::MatrixXd::Identity(4, 4)).norm() < 1e-8);
}

TEST_CASE("joint diagonalization holds for every scatter pair") {
  Rng rng(5);
  const Eigen::MatrixXd z = ngica_latent(600, 3, rng);
  const Eigen::MatrixXd a = gaussian(5, 5, rng) + 2.0 * Eigen::MatrixXd::Identity(5, 5);
  const DataMatrix x(a * z);
  for (const auto& spec : {ScatterPairSpec::cov_cov4(), ScatterPairSpec::cau_hub(),
                           ScatterPairSpec::scaui_shubi(20)}) {
    const UnmixingResult r = two_scatter_unmixing(x, spec);
    const Eigen::MatrixXd& w = r.unmixing;
    const ScatterMatrix s1 = evaluate_scatter(x, spec.s1).scatter;
    CHECK(rel_err(w * s1 * w.transpose(), Eigen::MatrixXd::Identity(5, 5)) < 1e-8);

    const Eigen::MatrixXd root = inverse_sqrt(s1).inverse();
    const Whitened st = whiten(x, r.location, s1);
    const ScatterMatrix s2 = evaluate_scatter(DataMatrix(st.data), spec.s2).scatter;
    const ScatterMatrix s2_back = root * s2 * root;
    const Eigen::MatrixXd diag = w * s2_back * w.transpose();
    CHECK(rel_err(diag, Eigen::MatrixXd(r.eigenvalues.asDiagonal())) < 1e-8);

    for (Eigen::Index i = 0; i + 1 < 5; ++i) CHECK(r.eigenvalues[i] >= r.eigenvalues[i + 1]);
    CHECK(r.eigenvalues.minCoeff() >= 0.0);
    CHECK(w.allFinite());
    for (Eigen::Index i = 0; i < 5; ++i) {
      Eigen::Index arg;
      w.row(i).cwiseAbs().maxCoeff(&arg);
      CHECK(w(i, arg) > 0.0);
    }
  }
}

TEST_CASE("generalized kurtosis quadratic form in the latent basis") {
  Rng rng(7);
  const DataMatrix x(ngica_latent(800, 2, rng));
  const ScatterPairSpec spec = ScatterPairSpec::cau_hub();
  const UnmixingResult r = two_scatter_unmixing(x, spec);
  const ScatterMatrix s1 = evaluate_scatter(x, spec.s1).scatter;
  const Eigen::MatrixXd root = inverse_sqrt(s1).inverse();
  const ScatterMatrix s2 =
      root * evaluate_scatter(DataMatrix(whiten(x, r.location, s1).data), spec.s2).scatter * root;
  // Latent-basis scatters: W S W^T.
  const Eigen::MatrixXd l1 = r.unmixing * s1 * r.unmixing.transpose();
  const Eigen::MatrixXd l2 = r.unmixing * s2 * r.unmixing.transpose();
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd u(4);
    for (int i = 0; i < 4; ++i) u[i] = rng.normal();
    u.normalize();
    const double lhs = u.dot(l2 * u) / u.dot(l1 * u);
    const double rhs = u.cwiseAbs2().dot(r.eigenvalues);
    CHECK(lhs == Approx(rhs).epsilon(1e-8));
  }
}

TEST_CASE("FOBI eigenvalues for uniform plus Gaussian") {
  Rng rng(9);
  const Eigen::Index n = 1000000;
  Eigen::MatrixXd z(2, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    z(0, j) = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    z(1, j) = rng.normal();
  }
  Eigen::Matrix2d a;
  a << 1.0, 0.4, -0.7, 2.0;
  const UnmixingResult r = two_scatter_unmixing(DataMatrix(a * z), ScatterPairSpec::cov_cov4());
  CHECK(r.eigenvalues[0] == Approx(1.0).margin(0.01));
  CHECK(r.eigenvalues[1] == Approx(0.7).margin(0.01));
}

TEST_CASE("Gaussian data gives FOBI eigenvalues near one") {
  Rng rng(11);
  const Eigen::Index n = 100000;
  const UnmixingResult r =
      two_scatter_unmixing(DataMatrix(gaussian(4, n, rng)), ScatterPairSpec::cov_cov4());
  CHECK((r.eigenvalues.array() - 1.0).abs().maxCoeff() < 5.0 / std::sqrt(double(n)));
}

TEST_CASE("latent components are invariant to a full-rank transformation") {
  Rng rng(13);
  const Eigen::MatrixXd z = ngica_latent(1500, 2, rng);
  const Eigen::MatrixXd b = gaussian(4, 4, rng) + 2.0 * Eigen::MatrixXd::Identity(4, 4);
  for (const auto& spec : {ScatterPairSpec::cov_cov4(), ScatterPairSpec::cau_hub()}) {
    const DataMatrix x(z);
    const DataMatrix bx(b * z);
    const UnmixingResult rx = two_scatter_unmixing(x, spec);
    const UnmixingResult rb = two_scatter_unmixing(bx, spec);
    CHECK((rx.eigenvalues - rb.eigenvalues).cwiseAbs().maxCoeff() < 1e-5);
    const Eigen::MatrixXd lx = latent_components(x, rx);
    const Eigen::MatrixXd lb = latent_components(bx, rb);
    for (Eigen::Index i = 0; i < 4; ++i)
      CHECK(std::abs(oracle::correlation(lx.row(i).transpose(), lb.row(i).transpose())) >
            1.0 - 1e-6);
  }
}

TEST_CASE("latent components with identity unmixing return the data") {
  Rng rng(15);
  const Eigen::MatrixXd z = gaussian(3, 10, rng);
  UnmixingResult r;
  r.unmixing = Eigen::MatrixXd::Identity(3, 3);
  r.eigenvalues = Eigen::Vector3d(3, 2, 1);
  r.location = Eigen::Vector3d::Zero();
  r.ordering = {0, 1, 2};
  CHECK(latent_components(z, r).isApprox(z));
  CHECK_THROWS_AS(latent_components(Eigen::MatrixXd::Ones(2, 10), r), InvalidArgument);
}

TEST_CASE("order_for_partition examples") {
  const std::vector<double> d{1.0, 1.01, 0.99, 3.2, 2.5};
  const Partition part = order_for_partition(d, 2);
  CHECK(part.noise == std::vector<std::size_t>{2, 0, 1});
  CHECK(part.ordering == std::vector<std::size_t>{3, 4, 1, 0, 2});

  const std::vector<double> ties{5.0, 2.0, 2.0, 2.0, 0.1};
  CHECK(order_for_partition(ties, 2).noise == std::vector<std::size_t>{1, 2, 3});

  CHECK_THROWS_AS(order_for_partition(d, 4), InvalidArgument);
}

TEST_CASE("order_for_partition tie-break prefers the block nearest the median") {
  // Three windows share the smallest spread; {1, 2} and {2, 3} are equally
  // close to the median 2, so the lower one wins.
  const std::vector<double> d{0.0, 1.0, 2.0, 3.0, 5.0};
  CHECK(order_for_partition(d, 3).noise == std::vector<std::size_t>{1, 2});
  const std::vector<double> shifted{-1.0, 1.0, 2.0, 3.0, 6.0};
  CHECK(order_for_partition(shifted, 3).noise == std::vector<std::size_t>{1, 2});
}

TEST_CASE("order_for_partition matches brute force on random inputs") {
  Rng rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t p = 2 + rng.index(7);
    std::vector<double> d(p);
    for (auto& v : d) v = 0.5 + 2.0 * rng.uniform();
    for (std::size_t k = 0; k + 2 <= p; ++k) {
      std::vector<std::size_t> got = order_for_partition(d, k).noise;
      CHECK(got == oracle::min_variance_subset(d, k));
    }
  }
}

TEST_CASE("partition_unmixing places the chosen block last") {
  Rng rng(19);
  const DataMatrix x(ngica_latent(800, 3, rng));
  const UnmixingResult r = partition_unmixing(two_scatter_unmixing(x, ScatterPairSpec::cov_cov4()), 2);
  REQUIRE(r.noise_index.has_value());
  CHECK(*r.noise_index == 2);
  const Eigen::VectorXd d = r.ordered_eigenvalues();
  const std::vector<double> raw(r.eigenvalues.data(), r.eigenvalues.data() + 5);
  const auto noise = oracle::min_variance_subset(raw, 2);
  std::vector<double> tail(d.data() + 2, d.data() + 5);
  std::vector<double> expect;
  for (auto i : noise) expect.push_back(raw[i]);
  std::sort(tail.begin(), tail.end());
  CHECK(tail == expect);
  CHECK(latent_components(x, r).rows() == 5);
}

TEST_CASE("NGICA recovery of individual signals with cov-cov4") {
  Rng rng(21);
  const Eigen::Index n = 40000;
  const Eigen::MatrixXd z = ngica_latent(n, 3, rng);
  const Eigen::MatrixXd a = gaussian(5, 5, rng);
  const UnmixingResult r = two_scatter_unmixing(DataMatrix(a * z), ScatterPairSpec::cov_cov4());
  const Eigen::MatrixXd est = latent_components(DataMatrix(a * z), r);
  for (Eigen::Index s = 0; s < 2; ++s) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i)
      best = std::max(best, std::abs(oracle::correlation(est.row(i).transpose(),
                                                          z.row(s).transpose())));
    CHECK(best >= 0.99);
  }
}

TEST_CASE("principal-angle oracle") {
  Eigen::MatrixXd a(2, 4), b(2, 4);
  a << 1, 0, 0, 0, 0, 1, 0, 0;
  b << 0, 1, 0, 0, 1, 1, 0, 0;
  CHECK(oracle::max_principal_angle(a, b) < 1e-7);
  Eigen::MatrixXd c(1, 2), e(1, 2);
  c << 1, 0;
  e << 1, 1;
  CHECK(oracle::max_principal_angle(c, e) == Approx(M_PI / 4).epsilon(1e-12));
}
