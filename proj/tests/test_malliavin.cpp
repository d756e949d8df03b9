#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "itosup/bounds.hpp"
#include "itosup/malliavin.hpp"
#include "itosup/simulate.hpp"
#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>

using namespace itosup;

namespace {

KernelBound unit_kernel() {
    return {[](double, double) { return 1.0; }, nullptr};
}

KernelBound zero_kernel() {
    return {[](double, double) { return 0.0; }, nullptr};
}

// |D_r u_s| bound for the CIR integrand, no closed-form inner integral
KernelBound cir_kernel(double b, double sigma) {
    return {[b, sigma](double s, double r) {
                return 0.5 * sigma * sigma * std::exp(b * s) * std::exp(-0.5 * b * (s - r));
            },
            nullptr};
}

} // namespace

TEST_CASE("c for alpha < 0") {
    const GrowthSpec g{1.0, -1.0};
    CHECK(c_neg_alpha(unit_kernel(), g, 1.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(c_neg_alpha(zero_kernel(), g, 1.0) == doctest::Approx(0.0));
    // CIR kernel reproduces sigma^4 (e^{bT}-1)^2 / (8 b^2)
    CHECK(c_neg_alpha(cir_kernel(1.0, 1.0), g, 1.0)
          == doctest::Approx(cir_malliavin_c(1.0, 1.0, 1.0)).epsilon(1e-8));
    CHECK(c_neg_alpha(cir_kernel(0.7, 1.1), g, 1.3)
          == doctest::Approx(0.82288895770844138).epsilon(1e-8));
    CHECK_THROWS_AS(c_neg_alpha(unit_kernel(), {1.0, 0.5}, 1.0), std::invalid_argument);
}

TEST_CASE("c for alpha in [0,1)") {
    CHECK(c_mid_alpha(unit_kernel(), {2.0, 0.5}, 1.0)
          == doctest::Approx(2.3094010767585031).epsilon(1e-8));
    CHECK(c_mid_alpha(unit_kernel(), {1.0, 0.0}, 1.0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(c_mid_alpha(zero_kernel(), {1.0, 0.5}, 1.0) == doctest::Approx(0.0));
    // at alpha = 0 the formula collapses to the alpha < 0 double integral
    for (double T : {0.8, 1.0, 1.7}) {
        CHECK(c_mid_alpha(cir_kernel(0.9, 1.2), {1.3, 0.0}, T)
              == doctest::Approx(c_neg_alpha(cir_kernel(0.9, 1.2), {1.3, -1.0}, T))
                     .epsilon(1e-8));
    }
}

TEST_CASE("c for alpha = 1") {
    CHECK(c_alpha1(unit_kernel(), {1.0, 1.0}, 1.0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(c_alpha1(zero_kernel(), {1.0, 1.0}, 1.0) == doctest::Approx(0.0));
    const KernelBound root_r{[](double, double r) { return std::sqrt(r); }, nullptr};
    CHECK(c_alpha1(root_r, {1.0, 1.0}, 2.0) == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("c operations are homogeneous in kernel and L scalings") {
    std::mt19937 gen(3);
    std::uniform_real_distribution<double> up(0.3, 2.5);
    for (int i = 0; i < 5; ++i) {
        const double t = up(gen);
        const KernelBound base = cir_kernel(0.8, 1.0);
        const KernelBound scaled{[t, base](double s, double r) { return t * base.k(s, r); },
                                 nullptr};
        CHECK(c_neg_alpha(scaled, {1.0, -0.7}, 1.2)
              == doctest::Approx(t * t * c_neg_alpha(base, {1.0, -0.7}, 1.2)).epsilon(1e-9));
        CHECK(c_alpha1(scaled, {1.0, 1.0}, 1.2)
              == doctest::Approx(t * t * c_alpha1(base, {1.0, 1.0}, 1.2)).epsilon(1e-9));
        CHECK(c_mid_alpha(scaled, {1.0, 1.0 / 3.0}, 1.2)
              == doctest::Approx(t * t * c_mid_alpha(base, {1.0, 1.0 / 3.0}, 1.2))
                     .epsilon(1e-9));
        CHECK(c_mid_alpha(base, {t * 1.4, 0.25}, 1.2)
              == doctest::Approx(t * t * c_mid_alpha(base, {1.4, 0.25}, 1.2)).epsilon(1e-9));
    }
}

TEST_CASE("c for gaussian functionals") {
    CHECK(c_gaussian_functional({1, {1.0}}) == doctest::Approx(0.5));
    CHECK(c_gaussian_functional({2, {0.0, 1.0, 1.0, 0.0}}) == doctest::Approx(1.0));
    CHECK(c_gaussian_functional({3, std::vector<double>(9, 1.0)}) == doctest::Approx(4.5));
    CHECK_THROWS_AS(c_gaussian_functional({2, {0.0, 1.0, 0.5, 0.0}}), std::invalid_argument);
    CHECK_THROWS_AS(c_gaussian_functional({2, {0.0, -1.0, -1.0, 0.0}}), std::invalid_argument);

    // invariant under simultaneous row/column permutation
    std::mt19937 gen(29);
    std::uniform_real_distribution<double> up(0.0, 2.0);
    const int n = 4;
    HessianBounds h{n, std::vector<double>(16, 0.0)};
    for (int i = 0; i < n; ++i) {
        for (int k = i; k < n; ++k) {
            const double v = up(gen);
            h.lambda[static_cast<std::size_t>(i) * n + k] = v;
            h.lambda[static_cast<std::size_t>(k) * n + i] = v;
        }
    }
    const int perm[4] = {2, 0, 3, 1};
    HessianBounds hp{n, std::vector<double>(16, 0.0)};
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            hp.lambda[static_cast<std::size_t>(i) * n + k] = h.at(perm[i], perm[k]);
        }
    }
    CHECK(c_gaussian_functional(hp) == doctest::Approx(c_gaussian_functional(h)).epsilon(1e-14));
}

TEST_CASE("sigma_bar_mc on a constant integrand is exact with a zero-width interval") {
    const PathEnsemble ens = gen_brownian(7, 500, {1.0, 64});
    const double m = 1.7;
    const McEstimate e = sigma_bar_mc(ens, constant_integrand(m), 2.0, 0.99);
    CHECK(e.estimate == doctest::Approx(m * m).epsilon(1e-14));
    CHECK(e.upper_cl == e.estimate);
}

TEST_CASE("sigma_bar_mc recovers the running-max second moment integral") {
    // int_0^1 E[(max B)^2] ds = 1/2; the grid max runs ~0.58 sqrt(dt) low,
    // so leave a small bias allowance on top of the sampling band
    const PathEnsemble ens = gen_brownian(11, 5000, {1.0, 8192});
    const PathIntegrand u = running_max_integrand([](double m) { return m; });
    const McEstimate e = sigma_bar_mc(ens, u, 2.0, 0.99);
    const double se = (e.upper_cl - e.estimate) / 2.3263478740408408; // z_{0.99}
    CHECK(std::fabs(e.estimate - 0.5) < 4.0 * se + 0.01);
    CHECK(e.upper_cl > e.estimate);
}

TEST_CASE("sigma_bar_mc matches the closed-form CIR variance integral") {
    const double a = 2.0, b = 1.0, sg = 1.0, x0 = 1.0, T = 1.0;
    const PathEnsemble ens = gen_brownian(13, 20000, {T, 512});
    const McEstimate e = sigma_bar_mc(ens, cir_integrand(a, b, sg, x0), 2.0, 0.99);
    const double closed = cir_sigma_bar_sq(a, b, sg, x0, T);
    const double se = (e.upper_cl - e.estimate) / 2.3263478740408408;
    // 0.01 allowance for the Euler discretization bias at dt = 1/512
    CHECK(std::fabs(e.estimate - closed) < 4.0 * se + 0.01);
}

TEST_CASE("sigma_bar_mc rejects non-finite integrands") {
    const PathEnsemble ens = gen_brownian(3, 100, {1.0, 32});
    const PathIntegrand bad = [](const GridSpec&, std::span<const double>,
                                 std::span<double> u) {
        std::fill(u.begin(), u.end(), std::numeric_limits<double>::quiet_NaN());
    };
    CHECK_THROWS_AS(sigma_bar_mc(ens, bad, 2.0, 0.99), std::runtime_error);
}
