#include "ngdim/scatter.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ngdim/chi_squared.hpp"
#include "ngdim/error.hpp"
#include "ngdim/rng.hpp"

namespace ngdim {

double WeightSpec::w1(double r2) const noexcept {
  switch (kind) {
    case WeightKind::kIdentity:
      return 1.0;
    case WeightKind::kHuber:
      return r2 <= c * c ? 1.0 : c / std::sqrt(r2);
    case WeightKind::kTLikelihood:
      return (dim + nu) / (r2 + nu);
  }
  return 1.0;
}

double WeightSpec::w2(double r2) const noexcept {
  switch (kind) {
    case WeightKind::kIdentity:
      return 1.0;
    case WeightKind::kHuber:
      if (r2 <= c * c) return 1.0 / sigma2;
      return (tail == HuberTail::kStandard ? c * c : c) / (r2 * sigma2);
    case WeightKind::kTLikelihood:
      return (dim + nu) / (r2 + nu);
  }
  return 1.0;
}

WeightSpec WeightSpec::t_likelihood(double nu, int dim) {
  if (!(nu >= 1.0)) throw InvalidArgument("t-likelihood degrees of freedom must be >= 1");
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  WeightSpec w;
  w.kind = WeightKind::kTLikelihood;
  w.dim = dim;
  w.nu = nu;
  return w;
}

WeightSpec huber_weight_constants(double q, int dim, HuberTail tail) {
  if (!(q > 0.0 && q < 1.0)) throw InvalidArgument("Huber q must lie in (0, 1)");
  if (dim < 1) throw InvalidArgument("dimension must be positive");
  WeightSpec w;
  w.kind = WeightKind::kHuber;
  w.dim = dim;
  w.q = q;
  w.tail = tail;
  const double c2 = chi_squared_quantile(q, dim);
  w.c = std::sqrt(c2);
  // E(Q 1{Q <= c^2}) = p * F_{p+2}(c^2) for Q ~ chi2_p.
  const double inner = chi_squared_cdf(c2, dim + 2.0);
  const double outer_const = tail == HuberTail::kStandard ? c2 : w.c;
  w.sigma2 = inner + outer_const * (1.0 - q) / dim;
  return w;
}

namespace {

// Returns (eigenvalues, eigenvectors) of a scatter after checking that it is
// safely invertible.
Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> checked_eigen(const ScatterMatrix& s) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s);
  if (eig.info() != Eigen::Success || !s.allFinite())
    throw WhiteningImpossible(std::numeric_limits<double>::infinity());
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (!(hi > 0.0) || !(lo > 1e-12 * hi))
    throw WhiteningImpossible(lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity());
  return eig;
}

ScatterMatrix weighted_scatter(const Eigen::MatrixXd& centered, const Eigen::VectorXd& w) {
  const double n = static_cast<double>(centered.cols());
  ScatterMatrix s = (centered * w.asDiagonal()) * centered.transpose();
  s /= n;
  return 0.5 * (s + s.transpose());
}

WeightSpec weights_for(const ScatterSpec& spec, int dim) {
  switch (spec.kind) {
    case ScatterKind::kTLikelihood:
      return WeightSpec::t_likelihood(spec.nu, dim);
    case ScatterKind::kHuber:
      return huber_weight_constants(spec.huber_q, dim, spec.huber_tail);
    default:
      return WeightSpec::identity();
  }
}

}  // namespace

namespace detail {

ScatterMatrix cov4(const Eigen::MatrixXd& points, bool location_at_origin) {
  const Eigen::Index p = points.rows();
  const double n = static_cast<double>(points.cols());
  Eigen::MatrixXd centered = points;
  if (!location_at_origin) centered.colwise() -= points.rowwise().mean();
  const ScatterMatrix s1 = weighted_scatter(centered, Eigen::VectorXd::Ones(points.cols()));
  const auto eig = checked_eigen(s1);
  const Eigen::MatrixXd whitener =
      eig.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
      eig.eigenvectors().transpose();
  const Eigen::VectorXd r2 = (whitener * centered).colwise().squaredNorm().transpose();
  ScatterMatrix s = (centered * r2.asDiagonal()) * centered.transpose();
  s /= n * static_cast<double>(p + 2);
  return 0.5 * (s + s.transpose());
}

MEstimate m_estimate(const Eigen::MatrixXd& points, const WeightSpec& w,
                     const SolverOptions& options, bool location_at_origin) {
  const Eigen::Index p = points.rows();
  const Eigen::Index n = points.cols();
  if (w.kind != WeightKind::kIdentity && w.dim != p)
    throw InvalidArgument("weight constants were derived for p = " +
                          std::to_string(w.dim) + " but data has p = " +
                          std::to_string(p));

  MEstimate est;
  est.location = location_at_origin ? LocationVector::Zero(p)
                                    : LocationVector(points.rowwise().mean());
  Eigen::MatrixXd centered = points.colwise() - est.location;
  est.scatter = weighted_scatter(centered, Eigen::VectorXd::Ones(n));

  if (w.kind == WeightKind::kIdentity) {
    est.iterations = 1;
    est.residuals.push_back(0.0);
    return est;
  }

  Eigen::VectorXd w1(n), w2(n);
  for (std::size_t iter = 1; iter <= options.max_iter; ++iter) {
    Eigen::LLT<Eigen::MatrixXd> llt(est.scatter);
    if (llt.info() != Eigen::Success || !est.scatter.allFinite())
      throw DegenerateScatter("M-estimator scatter lost positive definiteness at iteration " +
                              std::to_string(iter));
    const Eigen::VectorXd r2 =
        llt.matrixL().solve(centered).colwise().squaredNorm().transpose();
    for (Eigen::Index i = 0; i < n; ++i) {
      w1[i] = w.w1(r2[i]);
      w2[i] = w.w2(r2[i]);
    }

    LocationVector next_location = est.location;
    if (!location_at_origin) {
      const double total = w1.sum();
      if (!(total > 0.0)) throw DegenerateScatter("all location weights vanished");
      next_location = points * w1 / total;
      centered = points.colwise() - next_location;
    }
    ScatterMatrix next_scatter = weighted_scatter(centered, w2);

    const double scatter_change =
        (next_scatter - est.scatter).norm() / est.scatter.norm();
    const double scale = std::sqrt(next_scatter.trace() / static_cast<double>(p));
    const double location_change = (next_location - est.location).norm() / scale;
    const double residual = std::max(scatter_change, location_change);
    est.residuals.push_back(residual);
    est.location = std::move(next_location);
    est.scatter = std::move(next_scatter);
    est.iterations = iter;
    if (!std::isfinite(residual))
      throw DegenerateScatter("M-estimator iterate became non-finite");
    if (residual < options.tol) return est;
  }
  throw NonConvergence(est.iterations, est.residuals.back(), est.location, est.scatter);
}

ScatterMatrix scatter_at_origin(const Eigen::MatrixXd& points, const ScatterSpec& base) {
  const int p = static_cast<int>(points.rows());
  switch (base.kind) {
    case ScatterKind::kCov:
      return weighted_scatter(points, Eigen::VectorXd::Ones(points.cols()));
    case ScatterKind::kCov4:
      return cov4(points, true);
    case ScatterKind::kTLikelihood:
    case ScatterKind::kHuber:
      return m_estimate(points, weights_for(base, p), base.solver, true).scatter;
  }
  throw InvalidArgument("unknown scatter kind");
}

}  // namespace detail

LocationVector mean_location(const DataMatrix& x) { return x.values().rowwise().mean(); }

ScatterMatrix sample_cov(const DataMatrix& x) {
  const Eigen::MatrixXd centered = x.values().colwise() - mean_location(x);
  return weighted_scatter(centered, Eigen::VectorXd::Ones(x.size()));
}

ScatterMatrix cov4(const DataMatrix& x) { return detail::cov4(x.values(), false); }

MEstimate m_estimate(const DataMatrix& x, const WeightSpec& w, const SolverOptions& options) {
  return detail::m_estimate(x.values(), w, options, false);
}

std::string ScatterSpec::label() const {
  std::ostringstream out;
  if (symmetrization == Symmetrization::kComplete) out << "s";
  if (symmetrization == Symmetrization::kIncomplete) out << "s";
  switch (kind) {
    case ScatterKind::kCov: out << "Cov"; break;
    case ScatterKind::kCov4: out << "Cov4"; break;
    case ScatterKind::kTLikelihood:
      if (nu == 1.0) out << "Cau";
      else out << "T(" << nu << ")";
      break;
    case ScatterKind::kHuber: out << "Hub"; break;
  }
  if (symmetrization == Symmetrization::kIncomplete) out << "I";
  return out.str();
}

void ScatterPairSpec::validate() const {
  if (s1 == s2) throw InvalidArgument("the two scatter functionals must differ");
  for (const ScatterSpec* s : {&s1, &s2}) {
    if (s->kind == ScatterKind::kTLikelihood && !(s->nu >= 1.0))
      throw InvalidArgument("t-likelihood degrees of freedom must be >= 1");
    if (s->kind == ScatterKind::kHuber && !(s->huber_q > 0.0 && s->huber_q < 1.0))
      throw InvalidArgument("Huber q must lie in (0, 1)");
    if (s->symmetrization == Symmetrization::kIncomplete &&
        (s->incomplete_d < 2 || s->incomplete_d % 2 != 0))
      throw InvalidArgument("incomplete symmetrization d must be even and >= 2");
    if (!(s->solver.tol > 0.0) || s->solver.max_iter == 0)
      throw InvalidArgument("solver tolerance and iteration cap must be positive");
  }
  if (location == LocationKind::kFirstScatter && s1.symmetrization != Symmetrization::kNone)
    throw InvalidArgument("a symmetrized first scatter has no companion location");
}

std::string ScatterPairSpec::label() const { return s1.label() + "-" + s2.label(); }

ScatterPairSpec ScatterPairSpec::cov_cov4() {
  ScatterPairSpec spec;
  spec.s1.kind = ScatterKind::kCov;
  spec.s2.kind = ScatterKind::kCov4;
  return spec;
}

ScatterPairSpec ScatterPairSpec::cau_hub(double nu, double huber_q, HuberTail tail) {
  ScatterPairSpec spec;
  spec.s1.kind = ScatterKind::kTLikelihood;
  spec.s1.nu = nu;
  spec.s2.kind = ScatterKind::kHuber;
  spec.s2.huber_q = huber_q;
  spec.s2.huber_tail = tail;
  return spec;
}

ScatterPairSpec ScatterPairSpec::scau_shub(double nu, double huber_q, HuberTail tail) {
  ScatterPairSpec spec = cau_hub(nu, huber_q, tail);
  spec.s1.symmetrization = Symmetrization::kComplete;
  spec.s2.symmetrization = Symmetrization::kComplete;
  return spec;
}

ScatterPairSpec ScatterPairSpec::scaui_shubi(std::size_t d, double nu, double huber_q,
                                             HuberTail tail) {
  ScatterPairSpec spec = cau_hub(nu, huber_q, tail);
  for (ScatterSpec* s : {&spec.s1, &spec.s2}) {
    s->symmetrization = Symmetrization::kIncomplete;
    s->incomplete_d = d;
  }
  return spec;
}

LocationScatter evaluate_scatter(const DataMatrix& x, const ScatterSpec& spec) {
  switch (spec.symmetrization) {
    case Symmetrization::kComplete:
      return {std::nullopt, symmetrized_scatter(x, spec)};
    case Symmetrization::kIncomplete:
      return {std::nullopt,
              incomplete_symmetrized_scatter(x, spec, spec.incomplete_d, spec.pairing_seed)};
    case Symmetrization::kNone:
      break;
  }
  switch (spec.kind) {
    case ScatterKind::kCov:
      return {mean_location(x), sample_cov(x)};
    case ScatterKind::kCov4:
      return {mean_location(x), cov4(x)};
    case ScatterKind::kTLikelihood:
    case ScatterKind::kHuber: {
      MEstimate est = m_estimate(x, weights_for(spec, static_cast<int>(x.dim())), spec.solver);
      return {std::move(est.location), std::move(est.scatter)};
    }
  }
  throw InvalidArgument("unknown scatter kind");
}

ScatterMatrix symmetrized_scatter(const DataMatrix& x, const ScatterSpec& base) {
  const Eigen::Index n = x.size();
  if (n < 3) throw InvalidData("symmetrized scatter needs n >= 3");
  const Eigen::MatrixXd& v = x.values();
  Eigen::MatrixXd diffs(x.dim(), n * (n - 1) / 2);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) diffs.col(col++) = v.col(i) - v.col(j);
  return detail::scatter_at_origin(diffs, base);
}

std::vector<std::size_t> pairing_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(derive_seed(seed, n));
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.index(i)]);
  return perm;
}

ScatterMatrix incomplete_symmetrized_scatter(const DataMatrix& x, const ScatterSpec& base,
                                             std::size_t d,
                                             std::optional<std::uint64_t> pairing_seed) {
  const auto n = static_cast<std::size_t>(x.size());
  if (d < 2 || d % 2 != 0) throw InvalidArgument("incomplete symmetrization d must be even and >= 2");
  if (d >= n)
    throw InvalidArgument("incomplete symmetrization d = " + std::to_string(d) +
                          " must be smaller than n = " + std::to_string(n));
  std::vector<std::size_t> order(n);
  if (pairing_seed) {
    order = pairing_permutation(n, *pairing_seed);
  } else {
    std::iota(order.begin(), order.end(), std::size_t{0});
  }
  const Eigen::MatrixXd& v = x.values();
  const std::size_t lags = d / 2;
  Eigen::MatrixXd diffs(x.dim(), static_cast<Eigen::Index>(n * lags));
  Eigen::Index col = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 1; l <= lags; ++l)
      diffs.col(col++) = v.col(static_cast<Eigen::Index>(order[i])) -
                         v.col(static_cast<Eigen::Index>(order[(i + l) % n]));
  return detail::scatter_at_origin(diffs, base);
}

}  // namespace ngdim
