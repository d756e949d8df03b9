#pragma once

#include <functional>

namespace itosup {

// Constants parameterizing the tail bounds for running suprema of Ito
// integrals: sigma_bar is the L2-norm scale of the dominating integrand
// (sigma_bar_{alpha,T} in the alpha < 0 regime), c the Malliavin constant,
// alpha the growth exponent, horizon the terminal time T.
struct BoundParams {
    double sigma_bar = 1.0;
    double c = 0.0;
    double alpha = 0.0;
    double horizon = 1.0;
};

// throws std::invalid_argument when sigma_bar <= 0, c < 0, alpha > 1 or
// horizon <= 0 (or any field is non-finite)
void validate(const BoundParams& p);

// A tail-bound value. All evaluators work in log space: log_raw is exact
// even where exp() underflows (very large x), raw = exp(log_raw), and
// clamped = min(raw, 1) is what verification compares against, since the
// raw right-hand sides exceed 1 near x = 0.
struct BoundValue {
    double log_raw;
    double raw;
    double clamped;
};

BoundValue make_bound(double log_raw);

// increasing auxiliary function v: [0,inf) -> [1,inf)
using VFunction = std::function<double(double)>;

// classical sub-Gaussian tail exp(-x^2 / (2 M^2)) for integrands bounded
// by M in L^2[0,T]
BoundValue eval_gaussian_tail(double x, double m);

// two-term split exp(-x^2/(2y)) + qv_tail, where qv_tail is any upper
// bound on P(integral of u^2 >= y) supplied by the caller
BoundValue eval_decomposition(double x, double y, double qv_tail);

// alpha = 0 closed form: 2 exp(-2x^2 / (sigma + sqrt(sigma^2 + 4 sqrt(c) x))^2).
// c = 0 degrades continuously to the classical bound (times 2).
BoundValue eval_alpha0(double x, const BoundParams& p);

// general two-term bound for alpha in [0,1) with a caller-supplied v
BoundValue eval_general_lt1(double x, const BoundParams& p, const VFunction& v);

// general two-term bound for alpha = 1 with a caller-supplied v
BoundValue eval_general_eq1(double x, const BoundParams& p, const VFunction& v);

// fully explicit bound for alpha in [0,1)
BoundValue eval_explicit_lt1(double x, const BoundParams& p);

// fully explicit two-term bound for alpha = 1 (requires c > 0)
BoundValue eval_explicit_eq1(double x, const BoundParams& p);

// general two-term bound for alpha < 0; p.sigma_bar carries sigma_bar_{alpha,T}
BoundValue eval_neg_alpha(double x, const BoundParams& p, const VFunction& v);

// fully explicit bound for alpha < 0
BoundValue eval_explicit_neg_alpha(double x, const BoundParams& p);

// two-sided bound for |F - E F| when F is a smooth function of an
// n-dimensional standard Gaussian vector: 4 exp(-2x^2/(sigma + sqrt(...))^2)
BoundValue eval_gaussian_functional(double x, double sigma, double c);

// supremum of the double Wiener integral of a symmetric kernel g;
// g_norm is the L2 norm of g over the square [0,T]^2
BoundValue eval_double_integral(double x, double g_norm);

// supremum of e^{bt}(X_t - E X_t) for the CIR process with 2a > sigma^2
BoundValue eval_cir(double x, double a, double b, double sigma, double x0, double T);

// integrated second moment sigma_bar_T^2 of the CIR integrand sigma e^{bs} sqrt(X_s)
double cir_sigma_bar_sq(double a, double b, double sigma, double x0, double T);

// Malliavin constant of the CIR integrand: sigma^4 (e^{bT}-1)^2 / (8 b^2)
double cir_malliavin_c(double b, double sigma, double T);

// limit of ln(bound)/x^{(2-2alpha)/(2-alpha)} for alpha < 1, or of
// ln(bound)/ln^2 x for alpha = 1
double asymptotic_rate(const BoundParams& p);

} // namespace itosup
