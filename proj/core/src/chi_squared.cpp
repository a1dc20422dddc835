#include "ngdim/chi_squared.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include "ngdim/error.hpp"

namespace ngdim {
namespace {

boost::math::chi_squared_distribution<double> make(double df) {
  if (!(df > 0.0)) throw InvalidArgument("chi-squared degrees of freedom must be > 0");
  return boost::math::chi_squared_distribution<double>(df);
}

}  // namespace

double chi_squared_cdf(double x, double df) {
  if (x <= 0.0) return 0.0;
  return boost::math::cdf(make(df), x);
}

double chi_squared_sf(double x, double df) {
  if (x <= 0.0) return 1.0;
  return boost::math::cdf(boost::math::complement(make(df), x));
}

double chi_squared_quantile(double probability, double df) {
  if (!(probability > 0.0 && probability < 1.0))
    throw InvalidArgument("chi-squared quantile probability must be in (0,1)");
  return boost::math::quantile(make(df), probability);
}

}  // namespace ngdim
