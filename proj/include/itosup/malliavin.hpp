#pragma once

#include "itosup/simulate.hpp"

#include <functional>
#include <vector>

namespace itosup {

// Deterministic bound k(s,r) on the Malliavin derivative |D_r X_s|,
// 0 <= r <= s <= T. inner_sq, when set, is the closed form of the inner
// integral of k^2 over [0,s]; otherwise it is computed by adaptive
// quadrature.
struct KernelBound {
    std::function<double(double, double)> k;
    std::function<double(double)> inner_sq;
};

// growth specification |df/dx| <= L |f|^alpha
struct GrowthSpec {
    double L = 1.0;
    double alpha = 0.0;
};

// entrywise sup bounds on the Hessian of f, lambda[i*n + k] = lambda_{ik}
struct HessianBounds {
    int n = 0;
    std::vector<double> lambda;
    double at(int i, int k) const { return lambda[static_cast<std::size_t>(i) * n + k]; }
};

// inner integral of k^2 over [0,s] (closed form if registered)
double kernel_inner_sq(const KernelBound& k, double s, double rel_tol = 1e-9);

// alpha < 0:  c = L^2 * double integral of k^2 over the triangle {r <= s <= T}
double c_neg_alpha(const KernelBound& k, const GrowthSpec& g, double T);

// alpha in [0,1):  c = L^2 (int_0^T (int_0^s k^2)^{1/(1-alpha)} ds)^{1-alpha}
double c_mid_alpha(const KernelBound& k, const GrowthSpec& g, double T);

// alpha = 1:  c = L^2 sup_{0<=s<=T} int_0^s k^2(s,r) dr
double c_alpha1(const KernelBound& k, const GrowthSpec& g, double T);

// c for twice-differentiable Gaussian functionals:
// sum over the strict lower triangle of lambda^2 plus half the diagonal sum
double c_gaussian_functional(const HessianBounds& h);

struct McEstimate {
    double estimate;
    double upper_cl;
};

// Monte Carlo estimate of sigma_bar^2 = int_0^T E|u_bar_s|^exponent ds.
// Trapezoidal time average per path, averaged over paths; upper_cl is the
// one-sided upper normal-approximation limit on the path-level means at
// the given confidence. Feeding sqrt(upper_cl) to a bound keeps it
// conservative.
McEstimate sigma_bar_mc(const PathEnsemble& ens, const PathIntegrand& u_bar,
                        double exponent, double confidence, int workers = 1);

} // namespace itosup
