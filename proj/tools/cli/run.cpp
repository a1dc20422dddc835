#include "run.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "csv.hpp"
#include "ngdim/diagnostics.hpp"
#include "ngdim/error.hpp"
#include "ngdim/simulation.hpp"

namespace ngdim::cli {
namespace {

using json = nlohmann::json;

template <typename T>
using Names = std::map<std::string, T>;

const Names<ModelAssumption> kAssumptions{{"ngca", ModelAssumption::kNgca},
                                          {"ngica", ModelAssumption::kNgica}};
const Names<NoiseStrategy> kNoise{{"parametric", NoiseStrategy::kParametric},
                                  {"rotation", NoiseStrategy::kRotation}};
const Names<TestProcedure> kProcedures{{"bootstrap", TestProcedure::kBootstrap},
                                       {"asymptotic", TestProcedure::kAsymptotic},
                                       {"chi2", TestProcedure::kChi2}};
const Names<TkSplit> kSplits{{"decomposition", TkSplit::kDecomposition},
                             {"printed", TkSplit::kPrinted}};
const Names<Sigma1Scaling> kScalings{{"estimate", Sigma1Scaling::kEstimate},
                                     {"squared", Sigma1Scaling::kSquared}};
const Names<Strategy> kStrategies{{"incremental", Strategy::kIncremental},
                                  {"divide-conquer", Strategy::kDivideConquer}};
const Names<HuberTail> kTails{{"standard", HuberTail::kStandard}, {"paper", HuberTail::kPaper}};

template <typename T>
std::string name_of(const Names<T>& names, T value) {
  for (const auto& [k, v] : names)
    if (v == value) return k;
  return "unknown";
}

std::string command_name(Command c) {
  switch (c) {
    case Command::kTest: return "test";
    case Command::kEstimate: return "estimate";
    case Command::kSimulate: return "simulate";
    case Command::kUnmix: return "unmix";
  }
  return "unknown";
}

// FNV-1a over the parsed values, so a report pins down the exact input.
std::string fingerprint(const DataMatrix& x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(x.values().data());
  const auto count = static_cast<std::size_t>(x.values().size()) * sizeof(double);
  for (std::size_t i = 0; i < count; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json input_json(const RunConfig& cfg, const DataMatrix& x) {
  return {{"path", cfg.input}, {"p", x.dim()}, {"n", x.size()}, {"fnv1a64", fingerprint(x)}};
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json outcome_json(const TestOutcome& t, double alpha) {
  json j{{"statistic", t.statistic},
         {"p_value", t.p_value},
         {"method", to_string(t.method)},
         {"k", t.k},
         {"seed", t.seed},
         {"alpha", alpha},
         {"rejected", t.p_value <= alpha}};
  if (t.method == TestMethod::kBootstrap) {
    j["replicate_count"] = t.replicates.size();
    j["replicate_failures"] = t.replicate_failures;
    j["replicates"] = t.replicates;
  }
  j["sigma1_hat"] = t.sigma1_hat ? json(*t.sigma1_hat) : json(nullptr);
  return j;
}

json estimate_json(const DimensionEstimate& e) {
  json visited = json::array();
  for (const auto& v : e.visited)
    visited.push_back({{"k", v.k},
                       {"p_value", v.p_value ? json(*v.p_value) : json(nullptr)},
                       {"rejected", v.rejected},
                       {"tested", v.tested}});
  return {{"q_hat", e.q_hat},
          {"strategy", to_string(e.strategy)},
          {"alpha", e.alpha},
          {"p", e.dim},
          {"visited", visited}};
}

json base_report(const RunConfig& cfg) {
  return {{"schema", "ngdim-report"},
          {"schema_version", kReportSchemaVersion},
          {"tool", {{"name", "ngdim"}, {"version", NGDIM_VERSION_STRING}}},
          {"command", command_name(cfg.command)},
          {"config", config_echo(cfg)},
          {"seed", cfg.seed},
          {"rng", "philox4x32-10"}};
}

void write_report(const RunConfig& cfg, const json& report) {
  if (cfg.report_path.empty()) return;
  std::ofstream out(cfg.report_path);
  if (!out) throw IoError("cannot write " + cfg.report_path);
  out << report.dump(2) << '\n';
  if (!out) throw IoError("failed writing " + cfg.report_path);
}

std::ofstream open_csv(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << std::setprecision(17);
  return out;
}

MethodSpec method_of(const RunConfig& cfg, const std::string& label) {
  return parse_method(label, cfg.method_options);
}

BootstrapConfig bootstrap_config(const RunConfig& cfg, const MethodSpec& m) {
  BootstrapConfig bc;
  bc.model = cfg.assumption;
  bc.noise = cfg.noise;
  bc.replicates = cfg.replicates;
  bc.seed = cfg.seed;
  bc.threads = cfg.threads;
  return m.apply(bc);
}

std::size_t required_k(const RunConfig& cfg) {
  if (!cfg.k) throw InvalidArgument("--k is required");
  return *cfg.k;
}

void print_outcome(std::ostream& out, const TestOutcome& t, double alpha) {
  out << "H0k: k = " << t.k << "  (" << to_string(t.method) << ")\n"
      << "  statistic  " << t.statistic << '\n'
      << "  p-value    " << t.p_value << '\n';
  if (t.sigma1_hat) out << "  sigma1_hat " << *t.sigma1_hat << '\n';
  if (t.method == TestMethod::kBootstrap)
    out << "  M          " << t.replicates.size() << " (" << t.replicate_failures
        << " replicate failures)\n";
  out << "  decision   " << (t.p_value <= alpha ? "reject" : "do not reject") << " at alpha = "
      << alpha << '\n';
}

void run_test(const RunConfig& cfg, std::ostream& out) {
  const DataMatrix x = ingest_csv(cfg.input);
  const std::size_t k = required_k(cfg);
  const MethodSpec m = method_of(cfg, cfg.method);
  json report = base_report(cfg);
  report["input"] = input_json(cfg, x);

  if (cfg.procedure == TestProcedure::kBootstrap) {
    const TestOutcome t = bootstrap_test(x, k, bootstrap_config(cfg, m));
    report["result"] = outcome_json(t, cfg.alpha);
    print_outcome(out, t, cfg.alpha);
    if (!cfg.csv_path.empty()) {
      auto csv = open_csv(cfg.csv_path);
      csv << "replicate,statistic\n";
      for (std::size_t j = 0; j < t.replicates.size(); ++j) csv << j << ',' << t.replicates[j] << '\n';
    }
  } else {
    if (m.method != Method::kFobi)
      throw InvalidArgument("asymptotic and chi2 procedures require --method fobi");
    if (cfg.procedure == TestProcedure::kAsymptotic) {
      const TestOutcome t = asymptotic_test_fobi(x, k, cfg.assumption, cfg.seed, cfg.draws);
      report["result"] = outcome_json(t, cfg.alpha);
      print_outcome(out, t, cfg.alpha);
    } else {
      const auto [t1, t2] =
          chi2_tests_Tk1_Tk2(x, k, cfg.assumption, cfg.tk_split, cfg.sigma1_scaling);
      report["result"] = {{"tk1", outcome_json(t1, cfg.alpha)}, {"tk2", outcome_json(t2, cfg.alpha)}};
      print_outcome(out, t1, cfg.alpha);
      print_outcome(out, t2, cfg.alpha);
    }
  }
  write_report(cfg, report);
}

void run_estimate(const RunConfig& cfg, std::ostream& out) {
  const DataMatrix x = ingest_csv(cfg.input);
  const MethodSpec m = method_of(cfg, cfg.method);
  const auto p = static_cast<std::size_t>(x.dim());
  const DimensionEstimate e =
      estimate(cfg.strategy, p, make_bootstrap_oracle(x, bootstrap_config(cfg, m)), cfg.alpha);
  json report = base_report(cfg);
  report["input"] = input_json(cfg, x);
  report["result"] = estimate_json(e);
  out << "q_hat = " << e.q_hat << "  (" << to_string(e.strategy) << ", alpha = " << e.alpha
      << ")\n  k  p-value   decision\n";
  for (const auto& v : e.visited) {
    out << "  " << v.k << "  ";
    if (v.p_value) out << std::setw(8) << std::left << *v.p_value << std::right;
    else out << "untested";
    out << "  " << (v.rejected ? "reject" : "accept") << '\n';
  }
  write_report(cfg, report);
}

std::vector<std::string> full_grid_methods(std::size_t n) {
  std::vector<std::string> methods{"fobi", "cov-cov4", "cau-hub"};
  if (n < 4000) methods.push_back("scau-shub");
  methods.push_back("scaui-shubi");
  return methods;
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
  const ModelName name = parse_model_name(cfg.model);
  std::vector<std::size_t> ns = cfg.ns;
  std::size_t reps = cfg.repetitions;
  if (cfg.full) {
    ns = {500, 1000, 2000, 4000};
    reps = 1000;
    warn("--full runs 1000 repetitions over n = 500..4000 for every method; expect many hours");
  }

  std::optional<std::ofstream> csv;
  if (!cfg.csv_path.empty()) csv = open_csv(cfg.csv_path);
  json report = base_report(cfg);
  json rows = json::array();
  json failed = json::object();

  if (cfg.strategies.empty()) {
    if (csv) *csv << "n,repetition,method,k,seed,statistic,p_value,rejected\n";
    out << "model  n  method  assumption  k  rate  reps  M\n";
    for (std::size_t n : ns) {
      ExperimentConfig ec;
      ec.model = ModelSpec::make(name, cfg.seed);
      ec.n = n;
      ec.ks = cfg.ks;
      for (const auto& label : cfg.full ? full_grid_methods(n) : cfg.methods)
        ec.methods.push_back(method_of(cfg, label));
      ec.repetitions = reps;
      ec.replicates = cfg.replicates;
      ec.assumption = cfg.assumption;
      ec.noise = cfg.noise;
      ec.alpha = cfg.alpha;
      ec.threads = cfg.threads;
      const SimulationReport r = rejection_rate_experiment(ec);
      for (const auto& row : r.rows) {
        rows.push_back({{"model", row.model},
                        {"n", row.n},
                        {"method", row.method},
                        {"scatter_pair", row.scatter_pair},
                        {"assumption", row.assumption},
                        {"k", row.k},
                        {"rejection_rate", row.rejection_rate},
                        {"repetitions", row.repetitions},
                        {"M", row.replicates}});
        out << row.model << "  " << row.n << "  " << row.method << "  " << row.assumption
            << "  " << row.k << "  " << std::fixed << std::setprecision(3) << row.rejection_rate
            << std::defaultfloat << std::setprecision(6) << "  " << row.repetitions << "  "
            << row.replicates << '\n';
      }
      failed[std::to_string(n)] = r.failed_repetitions;
      if (csv)
        for (const auto& rec : r.records)
          *csv << n << ',' << rec.repetition << ',' << rec.method << ',' << rec.k << ','
               << rec.seed << ',' << rec.statistic << ',' << rec.p_value << ','
               << (rec.rejected ? 1 : 0) << '\n';
    }
    report["result"] = {{"kind", "rejection_rates"}, {"rows", rows}, {"failed_repetitions", failed}};
  } else {
    if (csv) *csv << "n,repetition,strategy,method,q_hat,tests\n";
    out << "model  n  strategy  method  frequencies(q = 0..p-1)  mode\n";
    for (std::size_t n : ns) {
      EstimatorExperimentConfig ec;
      ec.model = ModelSpec::make(name, cfg.seed);
      ec.n = n;
      ec.strategies = cfg.strategies;
      for (const auto& label : cfg.full ? full_grid_methods(n) : cfg.methods)
        ec.methods.push_back(method_of(cfg, label));
      ec.repetitions = reps;
      ec.replicates = cfg.replicates;
      ec.assumption = cfg.assumption;
      ec.noise = cfg.noise;
      ec.alpha = cfg.alpha;
      ec.threads = cfg.threads;
      const EstimatorReport r = estimator_experiment(ec);
      for (const auto& row : r.rows) {
        json freq = json::array();
        for (std::size_t q = 0; q < row.counts.size(); ++q) freq.push_back(row.frequency(q));
        rows.push_back({{"model", r.model},
                        {"n", row.n},
                        {"strategy", row.strategy},
                        {"method", row.method},
                        {"counts", row.counts},
                        {"frequencies", freq},
                        {"mode", row.mode()},
                        {"repetitions", row.repetitions}});
        out << r.model << "  " << row.n << "  " << row.strategy << "  " << row.method << " ";
        for (std::size_t q = 0; q < row.counts.size(); ++q) out << ' ' << row.counts[q];
        out << "  " << row.mode() << '\n';
      }
      failed[std::to_string(n)] = r.failed_repetitions;
      if (csv)
        for (const auto& rec : r.records)
          *csv << n << ',' << rec.repetition << ',' << rec.strategy << ',' << rec.method << ','
               << rec.q_hat << ',' << rec.tests << '\n';
    }
    report["result"] = {{"kind", "estimator_frequencies"}, {"rows", rows}, {"failed_repetitions", failed}};
  }
  write_report(cfg, report);
}

void run_unmix(const RunConfig& cfg, std::ostream& out) {
  const DataMatrix x = ingest_csv(cfg.input);
  const MethodSpec m = method_of(cfg, cfg.method);
  UnmixingResult r = two_scatter_unmixing(x, m.scatter());
  if (cfg.k) r = partition_unmixing(std::move(r), *cfg.k);
  const Eigen::MatrixXd z = latent_components(x, r);
  if (!cfg.output_path.empty()) {
    std::vector<std::string> header;
    for (Eigen::Index i = 0; i < z.rows(); ++i) header.push_back("z" + std::to_string(i + 1));
    write_csv(cfg.output_path, z, header);
  }
  json report = base_report(cfg);
  report["input"] = input_json(cfg, x);
  report["result"] = {{"scatter_pair", m.scatter().label()},
                      {"eigenvalues", vector_json(r.ordered_eigenvalues())},
                      {"unmixing", matrix_json(r.ordered_unmixing())},
                      {"location", vector_json(r.location)},
                      {"ordering", r.ordering},
                      {"noise_index", r.noise_index ? json(*r.noise_index) : json(nullptr)}};
  write_report(cfg, report);
  out << "scatter pair " << m.scatter().label() << "\n  eigenvalues:";
  const Eigen::VectorXd d = r.ordered_eigenvalues();
  for (Eigen::Index i = 0; i < d.size(); ++i) out << ' ' << d[i];
  out << '\n';
  if (r.noise_index) out << "  noise block starts at component " << *r.noise_index + 1 << '\n';
}

}  // namespace

json config_echo(const RunConfig& cfg) {
  json j{{"command", command_name(cfg.command)}, {"seed", cfg.seed}};
  const json method_options{{"nu", cfg.method_options.nu},
                            {"huber_q", cfg.method_options.huber_q},
                            {"huber_tail", name_of(kTails, cfg.method_options.huber_tail)},
                            {"incomplete_d", cfg.method_options.incomplete_d}};
  auto bootstrap_fields = [&] {
    j["assumption"] = name_of(kAssumptions, cfg.assumption);
    j["noise"] = name_of(kNoise, cfg.noise);
    j["M"] = cfg.replicates;
    j["alpha"] = cfg.alpha;
    j["method_options"] = method_options;
  };
  switch (cfg.command) {
    case Command::kTest:
      bootstrap_fields();
      j["input"] = cfg.input;
      j["method"] = cfg.method;
      j["k"] = cfg.k ? json(*cfg.k) : json(nullptr);
      j["procedure"] = name_of(kProcedures, cfg.procedure);
      j["tk_split"] = name_of(kSplits, cfg.tk_split);
      j["sigma1_scaling"] = name_of(kScalings, cfg.sigma1_scaling);
      j["draws"] = cfg.draws;
      break;
    case Command::kEstimate:
      bootstrap_fields();
      j["input"] = cfg.input;
      j["method"] = cfg.method;
      j["strategy"] = name_of(kStrategies, cfg.strategy);
      break;
    case Command::kSimulate: {
      bootstrap_fields();
      j["model"] = cfg.model;
      j["n"] = cfg.ns;
      j["repetitions"] = cfg.repetitions;
      j["ks"] = cfg.ks;
      j["methods"] = cfg.methods;
      json strategies = json::array();
      for (Strategy s : cfg.strategies) strategies.push_back(name_of(kStrategies, s));
      j["strategies"] = strategies;
      j["full"] = cfg.full;
      break;
    }
    case Command::kUnmix:
      j["input"] = cfg.input;
      j["method"] = cfg.method;
      j["method_options"] = method_options;
      j["k"] = cfg.k ? json(*cfg.k) : json(nullptr);
      break;
  }
  return j;
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out) {
  RunConfig cfg;
  CLI::App app{"Estimate and test the dimension of the non-Gaussian signal subspace."};
  app.name("ngdim");
  app.set_version_flag("--version", NGDIM_VERSION_STRING);
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", cfg.seed, "Master RNG seed")->envname("NGDIM_SEED");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = available parallelism)")
      ->envname("NGDIM_THREADS");
  app.add_option("--report", cfg.report_path, "Write the JSON report to this path");

  auto add_method_options = [&](CLI::App* sub) {
    sub->add_option("--t-nu", cfg.method_options.nu, "t-likelihood degrees of freedom")
        ->capture_default_str();
    sub->add_option("--huber-q", cfg.method_options.huber_q, "Huber cutoff probability")
        ->capture_default_str();
    sub->add_option("--huber-tail", cfg.method_options.huber_tail, "standard or paper")
        ->transform(CLI::CheckedTransformer(kTails, CLI::ignore_case));
    sub->add_option("--incomplete-d", cfg.method_options.incomplete_d,
                    "Differences per observation for scaui-shubi")
        ->capture_default_str();
  };
  auto add_method_label = [&](CLI::App* sub) {
    sub->add_option("--method", cfg.method,
                    "fobi, cov-cov4, cau-hub, scau-shub, scaui-shubi or scaui-shubi(d)")
        ->capture_default_str();
  };
  auto add_bootstrap_options = [&](CLI::App* sub) {
    add_method_options(sub);
    sub->add_option("--noise", cfg.noise, "Noise resampling: parametric or rotation")
        ->transform(CLI::CheckedTransformer(kNoise, CLI::ignore_case));
    sub->add_option("--M", cfg.replicates, "Bootstrap replicates")->check(CLI::PositiveNumber);
    sub->add_option("--alpha", cfg.alpha, "Test level")->check(CLI::Range(0.0, 1.0));
  };

  auto add_assumption = [&](CLI::App* sub, const std::string& flag) {
    sub->add_option(flag, cfg.assumption, "Signal model: ngca or ngica")
        ->transform(CLI::CheckedTransformer(kAssumptions, CLI::ignore_case));
  };

  auto* test = app.add_subcommand("test", "Test H0k: exactly k non-Gaussian components");
  add_bootstrap_options(test);
  add_method_label(test);
  add_assumption(test, "--model");
  test->add_option("--input", cfg.input, "CSV file, one observation per row")->required();
  test->add_option("--k", cfg.k, "Hypothesized signal dimension")->required();
  test->add_option("--procedure", cfg.procedure, "bootstrap, asymptotic or chi2")
      ->transform(CLI::CheckedTransformer(kProcedures, CLI::ignore_case));
  test->add_option("--tk-split", cfg.tk_split, "decomposition or printed")
      ->transform(CLI::CheckedTransformer(kSplits, CLI::ignore_case));
  test->add_option("--sigma1-scaling", cfg.sigma1_scaling, "estimate or squared")
      ->transform(CLI::CheckedTransformer(kScalings, CLI::ignore_case));
  test->add_option("--draws", cfg.draws, "Monte Carlo draws for the limiting law")
      ->check(CLI::PositiveNumber);
  test->add_option("--replicates-csv", cfg.csv_path, "Write bootstrap statistics as CSV");

  auto* est = app.add_subcommand("estimate", "Estimate the signal dimension");
  add_bootstrap_options(est);
  add_method_label(est);
  add_assumption(est, "--model");
  est->add_option("--input", cfg.input, "CSV file, one observation per row")->required();
  est->add_option("--strategy", cfg.strategy, "incremental or divide-conquer")
      ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));

  auto* sim = app.add_subcommand("simulate", "Run a simulation experiment");
  add_bootstrap_options(sim);
  add_assumption(sim, "--assumption");
  sim->add_option("--model", cfg.model, "M1, M2, M1x, M2x, M1star or M2star")->capture_default_str();
  sim->add_option("--methods", cfg.methods, "Comma-separated method labels")->delimiter(',');
  sim->add_option("--n", cfg.ns, "Sample size(s), comma-separated")->delimiter(',');
  sim->add_option("--reps", cfg.repetitions, "Repetitions")->check(CLI::PositiveNumber);
  sim->add_option("--ks", cfg.ks, "Tested k values, comma-separated")->delimiter(',');
  sim->add_option("--strategies", cfg.strategies,
                  "Run the estimator experiment with these strategies")
      ->delimiter(',')
      ->transform(CLI::CheckedTransformer(kStrategies, CLI::ignore_case));
  sim->add_flag("--full", cfg.full, "Full 1000-repetition grid over n = 500..4000 (slow)");
  sim->add_option("--csv", cfg.csv_path, "Write per-repetition rows as CSV");

  auto* unmix = app.add_subcommand("unmix", "Fit the two-scatter unmixing");
  add_method_options(unmix);
  add_method_label(unmix);
  unmix->add_option("--input", cfg.input, "CSV file, one observation per row")->required();
  unmix->add_option("--k", cfg.k, "Order components so the last p-k form the noise block");
  unmix->add_option("--output", cfg.output_path, "Write latent components as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::CallForVersion&) {
    out << NGDIM_VERSION_STRING << '\n';
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw InvalidArgument(e.what());
  }

  if (*test) cfg.command = Command::kTest;
  else if (*est) cfg.command = Command::kEstimate;
  else if (*sim) cfg.command = Command::kSimulate;
  else cfg.command = Command::kUnmix;
  if (cfg.command == Command::kSimulate && (cfg.ns.empty() || cfg.methods.empty() || cfg.ks.empty()))
    throw InvalidArgument("simulate needs --n, --methods and --ks values");
  return cfg;
}

void run_command(const RunConfig& cfg, std::ostream& out) {
  switch (cfg.command) {
    case Command::kTest: return run_test(cfg, out);
    case Command::kEstimate: return run_estimate(cfg, out);
    case Command::kSimulate: return run_simulate(cfg, out);
    case Command::kUnmix: return run_unmix(cfg, out);
  }
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  struct RestoreSink {
    WarningSink previous;
    ~RestoreSink() { set_warning_sink(std::move(previous)); }
  } restore{set_warning_sink([&err](std::string_view m) { err << "warning: " << m << '\n'; })};
  try {
    const auto cfg = parse_command_line(argc, argv, out);
    if (cfg) run_command(*cfg, out);
    return 0;
  } catch (const EstimationAborted& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    for (const auto& v : e.partial().visited)
      err << "  visited k = " << v.k << (v.rejected ? " (rejected)" : " (not rejected)") << '\n';
    return static_cast<int>(e.code());
  } catch (const Error& e) {
    err << "error[" << to_string(e.code()) << "]: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace ngdim::cli
