#include "itosup/stats.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <stdexcept>

namespace itosup {

double mean(std::span<const double> v) {
    if (v.empty()) throw std::invalid_argument("mean: empty sample");
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sample_variance(std::span<const double> v) {
    if (v.size() < 2) throw std::invalid_argument("sample_variance: need at least 2 samples");
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) {
        const double d = x - m;
        s += d * d;
    }
    return s / static_cast<double>(v.size() - 1);
}

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z * 0.70710678118654752440);
}

double normal_quantile(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw std::invalid_argument("normal_quantile: gamma must be in (0,1)");
    }
    return -1.41421356237309504880 * boost::math::erfc_inv(2.0 * gamma);
}

} // namespace itosup
