#pragma once

#include <span>

namespace itosup {

double mean(std::span<const double> v);
double sample_variance(std::span<const double> v);

double normal_cdf(double z);
// z such that P(N(0,1) <= z) = gamma
double normal_quantile(double gamma);

} // namespace itosup
