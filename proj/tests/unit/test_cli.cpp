#include <catch_amalgamated.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "csv.hpp"
#include "ngdim/error.hpp"
#include "ngdim/simulation.hpp"
#include "run.hpp"

using namespace ngdim;
using json = nlohmann::json;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::vector<std::string>& args, std::string* out_text = nullptr,
        std::string* err_text = nullptr) {
  std::vector<const char*> argv{"ngdim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
  if (out_text) *out_text = out.str();
  if (err_text) *err_text = err.str();
  return code;
}

std::string sample_csv(const std::string& name, ModelName model, std::size_t n, std::uint64_t seed) {
  const auto s = sample_model(ModelSpec::make(model, seed), n);
  std::vector<std::string> header;
  for (Eigen::Index i = 0; i < s.x.values().rows(); ++i) header.push_back("x" + std::to_string(i));
  cli::write_csv(name, s.x.values(), header);
  return name;
}

DataMatrix parse(const std::string& text) {
  std::istringstream in(text);
  return cli::parse_csv(in, "mem");
}

}  // namespace

TEST_CASE("csv parsing") {
  const DataMatrix x = parse("1,2\n3,4\n5,7\n");
  CHECK(x.dim() == 2);
  CHECK(x.size() == 3);
  CHECK(x.values()(1, 2) == 7.0);
  CHECK(x.values()(0, 1) == 3.0);

  const DataMatrix h = parse("a,b\n1,2\n3,4\n5,7\n");
  CHECK(h.values() == x.values());

  try {
    parse("1,2\n3,NA\n5,7\n");
    FAIL("expected InvalidData");
  } catch (const InvalidData& e) {
    const std::string msg = e.what();
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("column 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse("1,2\n3\n5,7\n"), InvalidData);
  CHECK_THROWS_AS(parse("1,2\n3,4\n"), InvalidData);
  CHECK_THROWS_AS(parse(""), InvalidData);
  CHECK_THROWS_AS(cli::ingest_csv("does/not/exist.csv"), IoError);
}

TEST_CASE("csv round trip keeps full precision") {
  Eigen::MatrixXd v(2, 4);
  v << 0.1, 1.0 / 3.0, -2.5e-17, 1e300, std::acos(-1.0), 7, 8, 9;
  cli::write_csv("roundtrip.csv", v, {"a", "b"});
  CHECK(cli::ingest_csv("roundtrip.csv").values() == v);
}

TEST_CASE("exit codes") {
  CHECK(run({"bogus"}) == static_cast<int>(ErrorCode::kInvalidArgument));
  CHECK(run({"test", "--input", "x.csv"}) == static_cast<int>(ErrorCode::kInvalidArgument));
  std::string out;
  CHECK(run({"--help"}, &out) == 0);
  CHECK(out.find("simulate") != std::string::npos);
  std::string err;
  CHECK(run({"test", "--input", "missing.csv", "--k", "1"}, nullptr, &err) ==
        static_cast<int>(ErrorCode::kIo));
  CHECK(err.find("error[") != std::string::npos);

  std::ofstream("tiny.csv") << "1,2\n3,4\n";
  CHECK(run({"unmix", "--input", "tiny.csv"}) == static_cast<int>(ErrorCode::kInvalidData));

  sample_csv("m1_small.csv", ModelName::kM1, 200, 1);
  CHECK(run({"test", "--input", "m1_small.csv", "--k", "5", "--M", "9"}) ==
        static_cast<int>(ErrorCode::kInvalidArgument));
  CHECK(run({"test", "--input", "m1_small.csv", "--k", "1", "--procedure", "chi2"}) ==
        static_cast<int>(ErrorCode::kInvalidArgument));
}

TEST_CASE("test report records an exact Monte Carlo p-value") {
  const std::string input = sample_csv("m1_test.csv", ModelName::kM1, 400, 2);
  REQUIRE(run({"--seed", "17", "--report", "test.json", "test", "--input", input, "--k", "2",
               "--M", "19", "--replicates-csv", "reps.csv"}) == 0);
  const json r = json::parse(slurp("test.json"));
  CHECK(r["schema"] == "ngdim-report");
  CHECK(r["seed"] == 17);
  CHECK(r["config"]["M"] == 19);
  CHECK(r["input"]["p"] == 6);
  CHECK(r["input"]["n"] == 400);
  const double p = r["result"]["p_value"];
  const double scaled = p * 20.0;
  CHECK(std::abs(scaled - std::round(scaled)) < 1e-9);
  CHECK(r["result"]["replicates"].size() == 19);
  CHECK(r["result"]["rejected"] == (p <= 0.05));

  const DataMatrix reps = cli::ingest_csv("reps.csv");
  CHECK(reps.size() == 19);
}

TEST_CASE("reports do not depend on the thread count") {
  const std::string input = sample_csv("m2_est.csv", ModelName::kM2, 300, 3);
  for (const char* cmd : {"test", "estimate"}) {
    std::vector<std::string> base{"--seed", "5", "--report", "", cmd, "--input", input,
                                  "--M", "19", "--method", "cov-cov4"};
    if (std::string(cmd) == "test") {
      base.push_back("--k");
      base.push_back("1");
    }
    auto one = base;
    one[3] = "one.json";
    one.insert(one.begin(), {"--threads", "1"});
    auto two = base;
    two[3] = "two.json";
    two.insert(two.begin(), {"--threads", "2"});
    REQUIRE(run(one) == 0);
    REQUIRE(run(two) == 0);
    CHECK(slurp("one.json") == slurp("two.json"));
  }
}

TEST_CASE("simulate writes rates and estimator frequencies") {
  REQUIRE(run({"--seed", "9", "--report", "sim.json", "simulate", "--model", "M1", "--n", "200",
               "--reps", "2", "--M", "9", "--ks", "2,3", "--methods", "cov-cov4",
               "--csv", "sim.csv"}) == 0);
  const json r = json::parse(slurp("sim.json"));
  CHECK(r["result"]["kind"] == "rejection_rates");
  CHECK(r["result"]["rows"].size() == 2);

  REQUIRE(run({"--report", "freq.json", "simulate", "--model", "M2", "--n", "200", "--reps", "1",
               "--M", "9", "--methods", "cov-cov4", "--strategies",
               "incremental,divide-conquer"}) == 0);
  const json f = json::parse(slurp("freq.json"));
  CHECK(f["result"]["kind"] == "estimator_frequencies");
  CHECK(f["result"]["rows"].size() == 2);
}

TEST_CASE("unmix writes latent components") {
  const std::string input = sample_csv("m1_unmix.csv", ModelName::kM1, 500, 4);
  REQUIRE(run({"--report", "unmix.json", "unmix", "--input", input, "--k", "3", "--output",
               "latent.csv"}) == 0);
  const DataMatrix z = cli::ingest_csv("latent.csv");
  CHECK(z.dim() == 6);
  CHECK(z.size() == 500);
  const Eigen::MatrixXd c = z.values().colwise() - z.values().rowwise().mean();
  const Eigen::MatrixXd cov = c * c.transpose() / 500.0;
  CHECK((cov - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-8);
  const json r = json::parse(slurp("unmix.json"));
  CHECK(r["result"]["noise_index"] == 3);
  CHECK(r["result"]["eigenvalues"].size() == 6);
}
