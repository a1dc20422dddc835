#include "ngdim/simulation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>

#include "ngdim/diagnostics.hpp"
#include "ngdim/error.hpp"
#include "ngdim/parallel.hpp"
#include "ngdim/unmixing.hpp"

namespace ngdim {
namespace {

constexpr double kMaxMixingCondition = 1e6;

struct Rect {
  double x0, x1, y0, y1;
  double area() const { return (x1 - x0) * (y1 - y0); }
};

// The glyph as two disjoint rectangles: the full top bar and the part of the
// left bar below it.
Rect top_bar() { return {0.0, 1.0, 1.0 - kGlyphThickness, 1.0}; }
Rect left_stem() { return {0.0, kGlyphThickness, 0.0, 1.0 - kGlyphThickness}; }

struct TwoComponentMixture {
  double weight;  // of the first component
  double mean1, sd1, mean2, sd2;

  double mean() const { return weight * mean1 + (1.0 - weight) * mean2; }
  double variance() const {
    const double m = mean();
    return weight * (sd1 * sd1 + mean1 * mean1) +
           (1.0 - weight) * (sd2 * sd2 + mean2 * mean2) - m * m;
  }
  double draw(Rng& rng) const {
    return rng.uniform() < weight ? mean1 + sd1 * rng.normal() : mean2 + sd2 * rng.normal();
  }
};

const TwoComponentMixture kM2Signals[3] = {
    {1.0 / (3.0 + std::sqrt(3.0)), -5.0, 1.0, 5.0, 1.0},
    {0.7, 10.0, 2.0, 15.0, 5.0},
    {0.4, -4.0, 1.0, 2.0, 15.0},
};

bool is_m1_family(ModelName m) {
  return m == ModelName::kM1 || m == ModelName::kM1x || m == ModelName::kM1star;
}

void fill_m1_signals(Eigen::MatrixXd& z, Rng& rng) {
  const auto n = static_cast<std::size_t>(z.cols());
  const GlyphMoments g = glyph_moments();
  const Eigen::Matrix2d root = inverse_sqrt(g.cov);
  z.topRows(2) = root * (sample_gamma_glyph(n, rng).colwise() - g.mean);
  for (Eigen::Index i = 0; i < z.cols(); ++i)
    z(2, i) = (rng.chi_squared(1.0) - 1.0) / std::sqrt(2.0);
}

void fill_m2_signals(Eigen::MatrixXd& z, Rng& rng) {
  for (Eigen::Index r = 0; r < 3; ++r) {
    const auto& mix = kM2Signals[r];
    const double m = mix.mean();
    const double sd = std::sqrt(mix.variance());
    for (Eigen::Index i = 0; i < z.cols(); ++i) z(r, i) = (mix.draw(rng) - m) / sd;
  }
}

double condition_number(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const auto& s = svd.singularValues();
  const double lo = s.minCoeff();
  return lo > 0.0 ? s.maxCoeff() / lo : std::numeric_limits<double>::infinity();
}

void check_common(std::size_t n, std::size_t p, std::size_t reps, double alpha) {
  if (reps < 1) throw InvalidArgument("repetitions must be >= 1");
  if (n < p + 1) throw InvalidArgument("n must be at least p + 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
}

void check_failures(std::size_t failures, std::size_t reps) {
  if (failures * 50 > reps) throw ExperimentAborted(failures, reps);
}

}  // namespace

std::string to_string(ModelName m) {
  switch (m) {
    case ModelName::kM1: return "M1";
    case ModelName::kM2: return "M2";
    case ModelName::kM1x: return "M1x";
    case ModelName::kM2x: return "M2x";
    case ModelName::kM1star: return "M1star";
    case ModelName::kM2star: return "M2star";
  }
  return "unknown";
}

ModelName parse_model_name(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "m1") return ModelName::kM1;
  if (lower == "m2") return ModelName::kM2;
  if (lower == "m1x") return ModelName::kM1x;
  if (lower == "m2x") return ModelName::kM2x;
  if (lower == "m1star" || lower == "m1*") return ModelName::kM1star;
  if (lower == "m2star" || lower == "m2*") return ModelName::kM2star;
  throw InvalidArgument("unknown model: " + std::string(name));
}

ModelSpec ModelSpec::make(ModelName name, std::uint64_t seed) {
  ModelSpec spec;
  spec.name = name;
  spec.seed = seed;
  spec.q = 3;
  spec.p = (name == ModelName::kM1star || name == ModelName::kM2star) ? 9 : 6;
  if (name == ModelName::kM1x || name == ModelName::kM2x)
    spec.contamination = Contamination{0.005, Eigen::VectorXd::Constant(6, 10.0)};
  return spec;
}

Eigen::MatrixXd sample_gamma_glyph(std::size_t n, Rng& rng) {
  const Rect top = top_bar();
  const Rect stem = left_stem();
  const double p_top = top.area() / (top.area() + stem.area());
  Eigen::MatrixXd g(2, static_cast<Eigen::Index>(n));
  for (Eigen::Index i = 0; i < g.cols(); ++i) {
    const Rect& r = rng.uniform() < p_top ? top : stem;
    g(0, i) = r.x0 + (r.x1 - r.x0) * rng.uniform();
    g(1, i) = r.y0 + (r.y1 - r.y0) * rng.uniform();
  }
  return g;
}

GlyphMoments glyph_moments() {
  const Rect parts[2] = {top_bar(), left_stem()};
  double area = 0.0;
  Eigen::Vector2d m1 = Eigen::Vector2d::Zero();
  Eigen::Matrix2d m2 = Eigen::Matrix2d::Zero();
  for (const Rect& r : parts) {
    const double w = r.area();
    const double ex = 0.5 * (r.x0 + r.x1);
    const double ey = 0.5 * (r.y0 + r.y1);
    const double exx = (r.x0 * r.x0 + r.x0 * r.x1 + r.x1 * r.x1) / 3.0;
    const double eyy = (r.y0 * r.y0 + r.y0 * r.y1 + r.y1 * r.y1) / 3.0;
    area += w;
    m1 += w * Eigen::Vector2d(ex, ey);
    m2(0, 0) += w * exx;
    m2(1, 1) += w * eyy;
    m2(0, 1) += w * ex * ey;
  }
  m1 /= area;
  m2 /= area;
  m2(1, 0) = m2(0, 1);
  GlyphMoments out;
  out.mean = m1;
  out.cov = m2 - m1 * m1.transpose();
  out.top_bar_probability = parts[0].area() / area;
  return out;
}

std::size_t contamination_count(double fraction, std::size_t n) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    throw InvalidArgument("contamination fraction must lie in [0, 1]");
  // The small slack keeps products like 0.005 * 1000 from rounding up to 6.
  const double raw = fraction * static_cast<double>(n);
  return std::min(n, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

Eigen::MatrixXd contaminate(const Eigen::MatrixXd& x, double fraction,
                            const Eigen::VectorXd& shift, Rng& rng,
                            std::vector<std::size_t>* shifted) {
  if (shift.size() != x.rows()) throw InvalidArgument("shift length must equal p");
  const auto n = static_cast<std::size_t>(x.cols());
  const std::size_t count = contamination_count(fraction, n);
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) std::swap(idx[i], idx[i + rng.index(n - i)]);
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  Eigen::MatrixXd out = x;
  for (std::size_t i : idx) out.col(static_cast<Eigen::Index>(i)) += shift;
  if (shifted) *shifted = std::move(idx);
  return out;
}

SampledModel sample_model(const ModelSpec& spec, std::size_t n, Rng& rng) {
  if (spec.q != 3 || spec.p < spec.q + 1) throw InvalidArgument("model needs q = 3 and p > q");
  if (n < spec.p + 1) throw InvalidArgument("n must be at least p + 1");
  if (spec.contamination && !(spec.contamination->fraction >= 0.0 &&
                              spec.contamination->fraction <= 0.05))
    throw InvalidArgument("contamination fraction must lie in [0, 0.05]");
  const auto p = static_cast<Eigen::Index>(spec.p);
  const auto cols = static_cast<Eigen::Index>(n);

  Eigen::MatrixXd z(p, cols);
  if (is_m1_family(spec.name)) fill_m1_signals(z, rng);
  else fill_m2_signals(z, rng);
  for (Eigen::Index r = 3; r < p; ++r)
    for (Eigen::Index i = 0; i < cols; ++i) z(r, i) = rng.normal();

  Eigen::MatrixXd a(p, p);
  std::size_t redraws = 0;
  for (;;) {
    for (Eigen::Index j = 0; j < p; ++j)
      for (Eigen::Index i = 0; i < p; ++i) a(i, j) = rng.normal();
    if (condition_number(a) <= kMaxMixingCondition) break;
    ++redraws;
  }
  if (redraws > 0)
    warn("mixing matrix redrawn " + std::to_string(redraws) + " time(s) for conditioning");

  Eigen::MatrixXd x = a * z;
  std::vector<std::size_t> shifted;
  if (spec.contamination)
    x = contaminate(x, spec.contamination->fraction, spec.contamination->shift, rng, &shifted);
  return SampledModel{DataMatrix(std::move(x)), std::move(a), std::move(z), redraws,
                      std::move(shifted)};
}

SampledModel sample_model(const ModelSpec& spec, std::size_t n) {
  Rng rng(spec.seed);
  return sample_model(spec, n, rng);
}

SimulationReport rejection_rate_experiment(const ExperimentConfig& cfg) {
  const std::size_t p = cfg.model.p;
  check_common(cfg.n, p, cfg.repetitions, cfg.alpha);
  if (cfg.methods.empty() || cfg.ks.empty()) throw InvalidArgument("need methods and ks");
  if (cfg.replicates < 1) throw InvalidArgument("M must be >= 1");
  for (const auto& m : cfg.methods)
    for (std::size_t k : cfg.ks)
      if (k > m.max_testable_k(p))
        throw InvalidArgument("k = " + std::to_string(k) + " is not testable with " + m.label());

  struct Outcome {
    bool failed = false;
    std::vector<RepetitionRecord> records;
  };
  std::vector<Outcome> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.model.seed, r);
    Outcome& out = outcomes[r];
    try {
      Rng data_rng(derive_seed(rep_seed, 0));
      const SampledModel sample = sample_model(cfg.model, cfg.n, data_rng);
      for (const auto& m : cfg.methods) {
        BootstrapConfig bc;
        bc.model = cfg.assumption;
        bc.noise = cfg.noise;
        bc.replicates = cfg.replicates;
        bc.threads = 1;
        bc = m.apply(bc);
        for (std::size_t k : cfg.ks) {
          bc.seed = derive_seed(rep_seed, 1, k);
          const TestOutcome t = bootstrap_test(sample.x, k, bc);
          out.records.push_back(RepetitionRecord{r, m.label(), k, bc.seed, t.statistic,
                                                 t.p_value, t.p_value <= cfg.alpha});
        }
      }
    } catch (const Error& e) {
      warn("repetition " + std::to_string(r) + " failed: " + e.what());
      out.failed = true;
      out.records.clear();
    }
  });

  SimulationReport report;
  report.master_seed = cfg.model.seed;
  std::map<std::pair<std::string, std::size_t>, std::size_t> rejections;
  std::size_t successes = 0;
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].failed) {
      report.failed_repetitions.push_back(r);
      continue;
    }
    ++successes;
    for (auto& rec : outcomes[r].records) {
      if (rec.rejected) ++rejections[{rec.method, rec.k}];
      report.records.push_back(std::move(rec));
    }
  }
  check_failures(report.failed_repetitions.size(), cfg.repetitions);

  for (const auto& m : cfg.methods) {
    for (std::size_t k : cfg.ks) {
      RateRow row;
      row.model = to_string(cfg.model.name);
      row.n = cfg.n;
      row.method = m.label();
      row.scatter_pair = m.scatter().label();
      row.assumption = to_string(cfg.assumption);
      row.k = k;
      row.repetitions = successes;
      row.replicates = cfg.replicates;
      const auto it = rejections.find({row.method, k});
      const std::size_t hits = it == rejections.end() ? 0 : it->second;
      row.rejection_rate = successes ? static_cast<double>(hits) / static_cast<double>(successes) : 0.0;
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

double FrequencyRow::frequency(std::size_t q) const {
  if (repetitions == 0 || q >= counts.size()) return 0.0;
  return static_cast<double>(counts[q]) / static_cast<double>(repetitions);
}

std::size_t FrequencyRow::mode() const {
  return static_cast<std::size_t>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

EstimatorReport estimator_experiment(const EstimatorExperimentConfig& cfg) {
  const std::size_t p = cfg.model.p;
  check_common(cfg.n, p, cfg.repetitions, cfg.alpha);
  if (cfg.methods.empty() || cfg.strategies.empty())
    throw InvalidArgument("need methods and strategies");
  if (cfg.replicates < 1) throw InvalidArgument("M must be >= 1");

  struct Outcome {
    bool failed = false;
    std::vector<EstimateRecord> records;
  };
  std::vector<Outcome> outcomes(cfg.repetitions);
  parallel_for(cfg.repetitions, cfg.threads, [&](std::size_t r) {
    const std::uint64_t rep_seed = derive_seed(cfg.model.seed, r);
    Outcome& out = outcomes[r];
    try {
      Rng data_rng(derive_seed(rep_seed, 0));
      const SampledModel sample = sample_model(cfg.model, cfg.n, data_rng);
      for (const auto& m : cfg.methods) {
        BootstrapConfig bc;
        bc.model = cfg.assumption;
        bc.noise = cfg.noise;
        bc.replicates = cfg.replicates;
        bc.seed = derive_seed(rep_seed, 1);
        bc.threads = 1;
        const PValueOracle oracle = make_bootstrap_oracle(sample.x, m.apply(bc));
        for (Strategy s : cfg.strategies) {
          const DimensionEstimate est = estimate(s, p, oracle, cfg.alpha);
          out.records.push_back(
              EstimateRecord{r, to_string(s), m.label(), est.q_hat, est.visited.size()});
        }
      }
    } catch (const Error& e) {
      warn("repetition " + std::to_string(r) + " failed: " + e.what());
      out.failed = true;
      out.records.clear();
    }
  });

  EstimatorReport report;
  report.model = to_string(cfg.model.name);
  report.master_seed = cfg.model.seed;
  for (Strategy s : cfg.strategies) {
    for (const auto& m : cfg.methods) {
      FrequencyRow row;
      row.strategy = to_string(s);
      row.method = m.label();
      row.n = cfg.n;
      row.counts.assign(p, 0);
      report.rows.push_back(std::move(row));
    }
  }
  for (std::size_t r = 0; r < outcomes.size(); ++r) {
    if (outcomes[r].failed) {
      report.failed_repetitions.push_back(r);
      continue;
    }
    for (auto& rec : outcomes[r].records) {
      for (auto& row : report.rows) {
        if (row.strategy == rec.strategy && row.method == rec.method) {
          ++row.counts[rec.q_hat];
          ++row.repetitions;
        }
      }
      report.records.push_back(std::move(rec));
    }
  }
  check_failures(report.failed_repetitions.size(), cfg.repetitions);
  return report;
}

}  // namespace ngdim
