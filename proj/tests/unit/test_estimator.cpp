#include <catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <vector>

#include "ngdim/error.hpp"
#include "ngdim/estimator.hpp"
#include "ngdim/rng.hpp"

using namespace ngdim;

namespace {

std::vector<std::size_t> ks(const DimensionEstimate& e) {
  std::vector<std::size_t> out;
  for (const auto& v : e.visited) out.push_back(v.k);
  return out;
}

// Rejects H0k exactly when k < q.
PValueOracle changepoint(std::size_t q) {
  return [q](std::size_t k) -> std::optional<double> { return k < q ? 0.001 : 0.5; };
}

std::size_t ceil_log2(std::size_t p) {
  std::size_t r = 0;
  while ((std::size_t{1} << r) < p) ++r;
  return r;
}

}  // namespace

TEST_CASE("incremental trace from fixed p-values") {
  const std::map<std::size_t, double> p{{4, 0.4}, {3, 0.3}, {2, 0.01}};
  const auto e = estimate_incremental(
      6, [&](std::size_t k) -> std::optional<double> { return p.at(k); }, 0.05);
  CHECK(e.q_hat == 3);
  CHECK(ks(e) == std::vector<std::size_t>{4, 3, 2});
  CHECK(e.visited.back().rejected);
  CHECK(*e.visited.front().p_value == 0.4);
  CHECK(e.strategy == Strategy::kIncremental);
  CHECK(e.dim == 6);
}

TEST_CASE("incremental returns zero when nothing is rejected") {
  const auto e = estimate_incremental(5, changepoint(0), 0.05);
  CHECK(e.q_hat == 0);
  CHECK(ks(e) == std::vector<std::size_t>{3, 2, 1, 0});
}

TEST_CASE("divide and conquer traces") {
  const auto three = estimate_divide_conquer(6, changepoint(3), 0.05);
  CHECK(three.q_hat == 3);
  CHECK(ks(three) == std::vector<std::size_t>{3, 2});

  const auto one = estimate_divide_conquer(8, changepoint(1), 0.05);
  CHECK(one.q_hat == 1);
  CHECK(ks(one) == std::vector<std::size_t>{4, 3, 2, 1});
}

TEST_CASE("both strategies find a single changepoint") {
  for (std::size_t p = 3; p <= 12; ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      const auto inc = estimate_incremental(p, changepoint(q), 0.05);
      CHECK(inc.q_hat == q);
      CHECK(inc.visited.size() <= p - 1);
      if (q >= 1) {
        const auto dc = estimate_divide_conquer(p, changepoint(q), 0.05);
        CHECK(dc.q_hat == q);
        CHECK(dc.visited.size() <= 2 * ceil_log2(p) + 2);
      }
    }
  }
}

TEST_CASE("untestable hypotheses count as not rejected") {
  // The variance statistic cannot test k = p - 1.
  const std::size_t p = 6;
  PValueOracle oracle = [&](std::size_t k) -> std::optional<double> {
    if (k + 2 > p) return std::nullopt;
    return 0.001;
  };
  const auto dc = estimate_divide_conquer(p, oracle, 0.05);
  CHECK(dc.q_hat == 5);
  CHECK(ks(dc) == std::vector<std::size_t>{3, 5, 4});
  bool saw_untested = false;
  for (const auto& v : dc.visited)
    if (!v.tested) {
      saw_untested = true;
      CHECK_FALSE(v.rejected);
      CHECK_FALSE(v.p_value.has_value());
    }
  CHECK(saw_untested);
  CHECK(replay(dc) == dc.q_hat);
}

TEST_CASE("each k is tested at most once and traces replay") {
  Rng rng(1);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t p = 3 + rng.index(8);
    std::map<std::size_t, double> fixed;
    for (std::size_t k = 0; k < p; ++k) fixed[k] = rng.uniform();
    std::map<std::size_t, int> calls;
    PValueOracle oracle = [&](std::size_t k) -> std::optional<double> {
      ++calls[k];
      return fixed.at(k);
    };
    for (Strategy s : {Strategy::kIncremental, Strategy::kDivideConquer}) {
      calls.clear();
      const auto e = estimate(s, p, oracle, 0.3);
      for (const auto& [k, c] : calls) CHECK(c == 1);
      CHECK_FALSE(e.visited.empty());
      CHECK(replay(e) == e.q_hat);
      CHECK(e.q_hat < p);
    }
  }
}

TEST_CASE("replay rejects inconsistent traces") {
  auto e = estimate_incremental(6, changepoint(3), 0.05);
  auto tampered = e;
  tampered.visited.back().rejected = false;
  CHECK_THROWS_AS(replay(tampered), InvalidArgument);

  auto reordered = e;
  std::swap(reordered.visited[0], reordered.visited[1]);
  CHECK_THROWS_AS(replay(reordered), InvalidArgument);

  auto extra = e;
  extra.visited.push_back({0, 0.5, false, true});
  CHECK_THROWS_AS(replay(extra), InvalidArgument);

  DimensionEstimate empty;
  CHECK_THROWS_AS(replay(empty), InvalidArgument);
}

TEST_CASE("errors abort with the partial trace") {
  PValueOracle failing = [](std::size_t k) -> std::optional<double> {
    if (k == 2) throw BootstrapAborted(10);
    return 0.9;
  };
  try {
    estimate_incremental(6, failing, 0.05);
    FAIL("expected EstimationAborted");
  } catch (const EstimationAborted& e) {
    CHECK(e.code() == ErrorCode::kBootstrapAborted);
    CHECK(ks(e.partial()) == std::vector<std::size_t>{4, 3});
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(estimate_incremental(1, changepoint(0), 0.05), InvalidArgument);
  CHECK_THROWS_AS(estimate_divide_conquer(2, changepoint(1), 0.05), InvalidArgument);
  CHECK_THROWS_AS(estimate_incremental(5, changepoint(1), 0.0), InvalidArgument);
  CHECK(to_string(Strategy::kIncremental) == "incremental");
  CHECK(to_string(Strategy::kDivideConquer) == "divide_conquer");
}

TEST_CASE("bootstrap oracle is memoized and seeded per k") {
  Rng rng(3);
  Eigen::MatrixXd z(5, 500);
  for (Eigen::Index j = 0; j < z.cols(); ++j) {
    z(0, j) = std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0);
    for (Eigen::Index i = 1; i < 5; ++i) z(i, j) = rng.normal();
  }
  const DataMatrix x(z);
  BootstrapConfig cfg;
  cfg.replicates = 20;
  cfg.seed = 42;
  const PValueOracle oracle = make_bootstrap_oracle(x, cfg);
  const auto first = oracle(1);
  REQUIRE(first.has_value());
  CHECK(oracle(1) == first);
  BootstrapConfig direct = cfg;
  direct.seed = derive_seed(42, 1);
  CHECK(*first == bootstrap_test(x, 1, direct).p_value);
  CHECK_FALSE(oracle(4).has_value());

  const auto inc = estimate(Strategy::kIncremental, 5, oracle, 0.05);
  const auto dc = estimate(Strategy::kDivideConquer, 5, oracle, 0.05);
  for (const auto& a : inc.visited)
    for (const auto& b : dc.visited)
      if (a.k == b.k) CHECK(a.p_value == b.p_value);

  const auto via_data = estimate_incremental(x, cfg, 0.05);
  CHECK(via_data.q_hat == inc.q_hat);
  CHECK(ks(via_data) == ks(inc));
}
