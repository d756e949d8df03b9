#include "itosup/vsolver.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace itosup {

namespace {

constexpr int kMaxExpand = 60;
constexpr int kMaxBisect = 200;
constexpr double kLnWidthTol = 1e-13;

// Bracketed bisection in ln v for an increasing lhs with lhs(ln v = 0) = 0.
// Derivative-free and immune to the flat region near v = 1.
VSolution solve_monotone(double x, double target,
                         const std::function<double(double)>& lhs_of_lnv) {
    if (target < 0.0 || !std::isfinite(target)) {
        throw std::invalid_argument("v solver: target must be finite and >= 0");
    }
    if (target == 0.0) {
        return VSolution{x, 1.0, 0.0};
    }
    double lo = 0.0;
    double hi = 0.69314718055994530942; // ln 2
    int expand = 0;
    while (lhs_of_lnv(hi) < target) {
        lo = hi;
        hi *= 2.0;
        if (++expand > kMaxExpand) {
            throw std::runtime_error("v solver failed to bracket the root");
        }
    }
    for (int i = 0; i < kMaxBisect && hi - lo > kLnWidthTol; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (lhs_of_lnv(mid) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double lnv = 0.5 * (lo + hi);
    return VSolution{x, std::exp(lnv), std::fabs(lhs_of_lnv(lnv) - target)};
}

} // namespace

VSolution solve_v_lt1(double x, const BoundParams& p) {
    validate(p);
    if (x < 0.0 || !std::isfinite(x)) throw std::invalid_argument("x must be >= 0");
    if (p.alpha < 0.0 || p.alpha >= 1.0) {
        throw std::invalid_argument("solve_v_lt1 requires alpha in [0,1)");
    }
    if (p.c <= 0.0) throw std::invalid_argument("solve_v_lt1 requires c > 0");
    const double one_m_a = 1.0 - p.alpha;
    const double target = x * std::sqrt(p.c) * one_m_a
                          / std::pow(p.sigma_bar, 2.0 - p.alpha);
    const double beta = 0.5 * one_m_a;
    return solve_monotone(x, target, [beta](double lnv) {
        return std::exp(0.5 * lnv) * std::expm1(beta * lnv);
    });
}

VSolution solve_v_eq1(double x, const BoundParams& p) {
    validate(p);
    if (x < 0.0 || !std::isfinite(x)) throw std::invalid_argument("x must be >= 0");
    if (p.alpha != 1.0) throw std::invalid_argument("solve_v_eq1 requires alpha = 1");
    if (p.c <= 0.0) throw std::invalid_argument("solve_v_eq1 requires c > 0");
    const double target = 2.0 * std::sqrt(p.c) * x / p.sigma_bar;
    return solve_monotone(x, target, [](double lnv) {
        return std::exp(0.5 * lnv) * lnv;
    });
}

VSolution closed_form_v_alpha0(double x, const BoundParams& p) {
    validate(p);
    if (x < 0.0 || !std::isfinite(x)) throw std::invalid_argument("x must be >= 0");
    if (p.alpha != 0.0) throw std::invalid_argument("closed_form_v_alpha0 requires alpha = 0");
    const double s = p.sigma_bar;
    const double root = (s + std::sqrt(s * s + 4.0 * std::sqrt(p.c) * x)) / (2.0 * s);
    const double v = root * root;
    const double target = x * std::sqrt(p.c) / (s * s);
    const double residual = std::fabs(root * (root - 1.0) - target);
    return VSolution{x, v, residual};
}

VFunction make_v_function(const BoundParams& p) {
    validate(p);
    if (p.alpha < 0.0) {
        throw std::invalid_argument("make_v_function: no balance equation registered for alpha < 0");
    }
    if (p.alpha == 1.0) {
        return [p](double x) { return solve_v_eq1(x, p).v; };
    }
    return [p](double x) { return solve_v_lt1(x, p).v; };
}

} // namespace itosup
