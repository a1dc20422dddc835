#pragma once

namespace ngdim {

// Chi-squared distribution helpers (backed by Boost.Math).
double chi_squared_cdf(double x, double df);
// Upper tail P(Q >= x), computed directly for accuracy in the far tail.
double chi_squared_sf(double x, double df);
double chi_squared_quantile(double probability, double df);

}  // namespace ngdim
