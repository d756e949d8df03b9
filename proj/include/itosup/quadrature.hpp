#pragma once

#include <functional>

namespace itosup {

// composite Simpson with a fixed number of panels (panels >= 1)
double simpson(const std::function<double(double)>& f, double a, double b, int panels);

// adaptive Simpson to the given relative tolerance; throws
// std::invalid_argument on non-finite integrand values
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol);

} // namespace itosup
