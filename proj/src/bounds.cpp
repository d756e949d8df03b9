#include "itosup/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace itosup {

namespace {

constexpr double kLn2 = 0.69314718055994530942;

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string("non-finite parameter: ") + name);
    }
}

void require_x(double x) {
    require_finite(x, "x");
    if (x < 0.0) throw std::invalid_argument("x must be >= 0");
}

// log(exp(a) + exp(b)), tolerating -inf operands
double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    if (m == -std::numeric_limits<double>::infinity()) return m;
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

// checks v(x) >= 1 (the bound only holds above v^{-1}(1)) and returns a
// value clipped to [1, inf) so the second exponent's algebra stays clean
double checked_v(double x, const VFunction& v) {
    if (x < 0.0) throw std::domain_error("x below v^{-1}(1)");
    if (!v) throw std::invalid_argument("v function is empty");
    const double vx = v(x);
    if (!std::isfinite(vx)) throw std::invalid_argument("v(x) is not finite");
    if (vx < 1.0 - 1e-9) throw std::domain_error("x below v^{-1}(1): v(x) < 1");
    return std::max(vx, 1.0);
}

} // namespace

void validate(const BoundParams& p) {
    require_finite(p.sigma_bar, "sigma_bar");
    require_finite(p.c, "c");
    require_finite(p.alpha, "alpha");
    require_finite(p.horizon, "horizon");
    if (p.sigma_bar <= 0.0) throw std::invalid_argument("sigma_bar must be > 0");
    if (p.c < 0.0) throw std::invalid_argument("c must be >= 0");
    if (p.alpha > 1.0) throw std::invalid_argument("alpha must be <= 1");
    if (p.horizon <= 0.0) throw std::invalid_argument("horizon must be > 0");
}

BoundValue make_bound(double log_raw) {
    const double raw = std::exp(log_raw);
    return BoundValue{log_raw, raw, std::min(raw, 1.0)};
}

BoundValue eval_gaussian_tail(double x, double m) {
    require_x(x);
    require_finite(m, "M");
    if (m <= 0.0) throw std::invalid_argument("M must be > 0");
    return make_bound(-x * x / (2.0 * m * m));
}

BoundValue eval_decomposition(double x, double y, double qv_tail) {
    require_x(x);
    require_finite(y, "y");
    require_finite(qv_tail, "qv_tail");
    if (y <= 0.0) throw std::invalid_argument("y must be > 0");
    if (qv_tail < 0.0 || qv_tail > 1.0) {
        throw std::invalid_argument("qv_tail must lie in [0,1]");
    }
    const double log_qv = qv_tail > 0.0 ? std::log(qv_tail)
                                        : -std::numeric_limits<double>::infinity();
    return make_bound(log_sum_exp(-x * x / (2.0 * y), log_qv));
}

BoundValue eval_alpha0(double x, const BoundParams& p) {
    require_x(x);
    validate(p);
    if (p.alpha != 0.0) throw std::invalid_argument("eval_alpha0 requires alpha = 0");
    const double s = p.sigma_bar;
    const double den = s + std::sqrt(s * s + 4.0 * std::sqrt(p.c) * x);
    return make_bound(kLn2 - 2.0 * x * x / (den * den));
}

BoundValue eval_general_lt1(double x, const BoundParams& p, const VFunction& v) {
    validate(p);
    if (p.alpha < 0.0 || p.alpha >= 1.0) {
        throw std::invalid_argument("eval_general_lt1 requires alpha in [0,1)");
    }
    if (p.c <= 0.0) throw std::invalid_argument("eval_general_lt1 requires c > 0");
    const double vx = checked_v(x, v);
    const double one_m_a = 1.0 - p.alpha;
    const double s = p.sigma_bar;
    const double e1 = -x * x / (2.0 * s * s * vx);
    // (v^{(1-a)/2} - 1) via expm1 to stay accurate near v = 1
    const double gap = std::expm1(0.5 * one_m_a * std::log(vx));
    const double e2 = -std::pow(s, 2.0 - 2.0 * p.alpha) * gap * gap
                      / (2.0 * p.c * one_m_a * one_m_a);
    return make_bound(log_sum_exp(e1, e2));
}

BoundValue eval_general_eq1(double x, const BoundParams& p, const VFunction& v) {
    validate(p);
    if (p.alpha != 1.0) throw std::invalid_argument("eval_general_eq1 requires alpha = 1");
    if (p.c <= 0.0) {
        throw std::invalid_argument("eval_general_eq1 requires c > 0 (use eval_gaussian_tail at c = 0)");
    }
    const double vx = checked_v(x, v);
    const double s = p.sigma_bar;
    const double lnv = std::log(vx);
    const double e1 = -x * x / (2.0 * s * s * vx);
    const double e2 = -lnv * lnv / (8.0 * p.c);
    return make_bound(log_sum_exp(e1, e2));
}

BoundValue eval_explicit_lt1(double x, const BoundParams& p) {
    require_x(x);
    validate(p);
    if (p.alpha < 0.0 || p.alpha >= 1.0) {
        throw std::invalid_argument("eval_explicit_lt1 requires alpha in [0,1)");
    }
    const double one_m_a = 1.0 - p.alpha;
    const double grow = std::pow(p.c * one_m_a * one_m_a * x * x,
                                 one_m_a / (4.0 - 2.0 * p.alpha));
    const double base = std::pow(p.sigma_bar, one_m_a) + grow;
    const double den = std::pow(base, 2.0 / one_m_a);
    return make_bound(kLn2 - x * x / (2.0 * den));
}

BoundValue eval_explicit_eq1(double x, const BoundParams& p) {
    require_x(x);
    validate(p);
    if (p.alpha != 1.0) throw std::invalid_argument("eval_explicit_eq1 requires alpha = 1");
    if (p.c <= 0.0) throw std::invalid_argument("eval_explicit_eq1 requires c > 0");
    const double s = p.sigma_bar;
    const double sc = std::sqrt(p.c);
    const double u = sc / s;
    const double l_e = std::log(u * x + 2.71828182845904523536);
    const double t1 = x * l_e / (sc * x + s);
    const double e1 = -0.5 * t1 * t1;
    const double t2 = std::log1p(u * x) - std::log(l_e);
    const double e2 = -t2 * t2 / (2.0 * p.c);
    return make_bound(log_sum_exp(e1, e2));
}

BoundValue eval_neg_alpha(double x, const BoundParams& p, const VFunction& v) {
    validate(p);
    if (p.alpha >= 0.0) throw std::invalid_argument("eval_neg_alpha requires alpha < 0");
    if (p.c <= 0.0) throw std::invalid_argument("eval_neg_alpha requires c > 0");
    const double vx = checked_v(x, v);
    const double a = p.alpha;
    const double one_m_a = 1.0 - a;
    const double s = p.sigma_bar; // sigma_bar_{alpha,T}
    const double e1 = -x * x
                      / (2.0 * std::pow(s, 2.0 / one_m_a)
                         * std::pow(p.horizon, -a / one_m_a) * vx);
    const double gap = std::expm1(0.5 * one_m_a * std::log(vx));
    const double e2 = -s * s * gap * gap / (2.0 * p.c * one_m_a * one_m_a);
    return make_bound(log_sum_exp(e1, e2));
}

BoundValue eval_explicit_neg_alpha(double x, const BoundParams& p) {
    require_x(x);
    validate(p);
    if (p.alpha >= 0.0) throw std::invalid_argument("eval_explicit_neg_alpha requires alpha < 0");
    const double a = p.alpha;
    const double one_m_a = 1.0 - a;
    const double t_outer = std::pow(p.horizon, -a / (2.0 - a));
    const double t_inner = std::pow(p.horizon, -a / (4.0 - 2.0 * a));
    const double grow = std::pow(p.c * one_m_a * one_m_a * x * x,
                                 one_m_a / (4.0 - 2.0 * a));
    const double den = t_outer * std::pow(p.sigma_bar * t_inner + grow, 2.0 / one_m_a);
    return make_bound(kLn2 - x * x / (2.0 * den));
}

BoundValue eval_gaussian_functional(double x, double sigma, double c) {
    require_x(x);
    require_finite(sigma, "sigma");
    require_finite(c, "c");
    if (sigma <= 0.0) throw std::invalid_argument("sigma must be > 0");
    if (c <= 0.0) throw std::invalid_argument("c must be > 0");
    const double den = sigma + std::sqrt(sigma * sigma + 4.0 * std::sqrt(c) * x);
    return make_bound(2.0 * kLn2 - 2.0 * x * x / (den * den));
}

BoundValue eval_double_integral(double x, double g_norm) {
    require_x(x);
    require_finite(g_norm, "g_norm");
    if (g_norm <= 0.0) throw std::invalid_argument("g_norm must be > 0");
    const double den = g_norm + std::sqrt(g_norm * g_norm
                                          + 2.82842712474619009760 * g_norm * x);
    return make_bound(kLn2 - x * x / (den * den));
}

double cir_sigma_bar_sq(double a, double b, double sigma, double x0, double T) {
    const double em1 = std::expm1(b * T);
    return sigma * sigma * (x0 * em1 / b + 0.5 * a * em1 * em1 / (b * b));
}

double cir_malliavin_c(double b, double sigma, double T) {
    const double em1 = std::expm1(b * T);
    const double s2 = sigma * sigma;
    return s2 * s2 * em1 * em1 / (8.0 * b * b);
}

BoundValue eval_cir(double x, double a, double b, double sigma, double x0, double T) {
    require_x(x);
    require_finite(a, "a");
    require_finite(b, "b");
    require_finite(sigma, "sigma");
    require_finite(x0, "x0");
    require_finite(T, "T");
    if (a <= 0.0 || b <= 0.0 || sigma <= 0.0 || x0 <= 0.0 || T <= 0.0) {
        throw std::invalid_argument("CIR parameters must all be > 0");
    }
    if (2.0 * a <= sigma * sigma) {
        throw std::invalid_argument("Feller condition violated: need 2a > sigma^2");
    }
    const double sb = std::sqrt(cir_sigma_bar_sq(a, b, sigma, x0, T));
    const double lin = 1.41421356237309504880 * sigma * sigma * std::expm1(b * T) / b;
    const double den = sb + std::sqrt(sb * sb + lin * x);
    return make_bound(kLn2 - 2.0 * x * x / (den * den));
}

double asymptotic_rate(const BoundParams& p) {
    validate(p);
    if (p.c <= 0.0) throw std::invalid_argument("asymptotic_rate requires c > 0");
    if (p.alpha == 1.0) return -1.0 / (2.0 * p.c);
    const double a = p.alpha;
    double den = 2.0 * std::pow(p.c, 1.0 / (2.0 - a))
                 * std::pow(1.0 - a, 2.0 / (2.0 - a));
    if (a < 0.0) den *= std::pow(p.horizon, -a / (2.0 - a));
    return -1.0 / den;
}

} // namespace itosup
