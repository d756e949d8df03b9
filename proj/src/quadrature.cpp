#include "itosup/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace itosup {

namespace {

double checked(const std::function<double(double)>& f, double x) {
    const double v = f(x);
    if (!std::isfinite(v)) {
        throw std::invalid_argument("quadrature: integrand is not finite");
    }
    return v;
}

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = checked(f, lm);
    const double frm = checked(f, rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
         + simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace

double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    if (panels < 1) throw std::invalid_argument("simpson: panels must be >= 1");
    if (a == b) return 0.0;
    if (panels % 2 == 1) ++panels; // composite Simpson needs an even count
    const double h = (b - a) / panels;
    double sum = checked(f, a) + checked(f, b);
    for (int i = 1; i < panels; ++i) {
        sum += (i % 2 == 1 ? 4.0 : 2.0) * checked(f, a + i * h);
    }
    return sum * h / 3.0;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (a == b) return 0.0;
    const double fa = checked(f, a);
    const double fb = checked(f, b);
    const double m = 0.5 * (a + b);
    const double fm = checked(f, m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(std::fabs(whole), 1e-300);
    return simpson_rec(f, a, b, fa, fm, fb, whole, rel_tol * scale, 40);
}

} // namespace itosup
