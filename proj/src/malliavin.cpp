#include "itosup/malliavin.hpp"

#include "itosup/quadrature.hpp"
#include "itosup/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace itosup {

namespace {

constexpr int kOuterPanels = 10000;
constexpr int kSupGridPoints = 10000;

void validate_growth(const GrowthSpec& g) {
    if (!(g.L > 0.0) || !std::isfinite(g.L)) {
        throw std::invalid_argument("GrowthSpec: L must be > 0");
    }
    if (!(g.alpha <= 1.0) || !std::isfinite(g.alpha)) {
        throw std::invalid_argument("GrowthSpec: alpha must be <= 1");
    }
}

void require_horizon(double T) {
    if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be > 0");
}

double finite_or_throw(double v) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument("invalid kernel: quadrature diverged");
    }
    return v;
}

} // namespace

double kernel_inner_sq(const KernelBound& kb, double s, double rel_tol) {
    if (kb.inner_sq) return finite_or_throw(kb.inner_sq(s));
    if (!kb.k) throw std::invalid_argument("kernel has no evaluation callback");
    if (s == 0.0) return 0.0;
    auto f = [&](double r) {
        const double v = kb.k(s, r);
        return v * v;
    };
    return finite_or_throw(adaptive_simpson(f, 0.0, s, rel_tol));
}

double c_neg_alpha(const KernelBound& kb, const GrowthSpec& g, double T) {
    validate_growth(g);
    require_horizon(T);
    if (g.alpha >= 0.0) throw std::invalid_argument("c_neg_alpha requires alpha < 0");
    const double integral = simpson(
        [&](double s) { return kernel_inner_sq(kb, s); }, 0.0, T, kOuterPanels);
    return finite_or_throw(g.L * g.L * integral);
}

double c_mid_alpha(const KernelBound& kb, const GrowthSpec& g, double T) {
    validate_growth(g);
    require_horizon(T);
    if (g.alpha < 0.0 || g.alpha >= 1.0) {
        throw std::invalid_argument("c_mid_alpha requires alpha in [0,1)");
    }
    const double p = 1.0 / (1.0 - g.alpha);
    const double integral = simpson(
        [&](double s) { return std::pow(kernel_inner_sq(kb, s), p); }, 0.0, T,
        kOuterPanels);
    return finite_or_throw(g.L * g.L * std::pow(integral, 1.0 - g.alpha));
}

double c_alpha1(const KernelBound& kb, const GrowthSpec& g, double T) {
    validate_growth(g);
    require_horizon(T);
    if (g.alpha != 1.0) throw std::invalid_argument("c_alpha1 requires alpha = 1");
    double best = 0.0;
    double best_s = 0.0;
    const double h = T / kSupGridPoints;
    for (int i = 0; i <= kSupGridPoints; ++i) {
        const double s = i * h;
        const double v = kernel_inner_sq(kb, s);
        if (v > best) {
            best = v;
            best_s = s;
        }
    }
    // 10x local refinement around the grid argmax
    const double lo = std::max(0.0, best_s - h);
    const double hi = std::min(T, best_s + h);
    for (int i = 0; i <= 20; ++i) {
        const double s = lo + (hi - lo) * i / 20.0;
        best = std::max(best, kernel_inner_sq(kb, s));
    }
    return finite_or_throw(g.L * g.L * best);
}

double c_gaussian_functional(const HessianBounds& h) {
    if (h.n < 1) throw std::invalid_argument("HessianBounds: n must be >= 1");
    if (h.lambda.size() != static_cast<std::size_t>(h.n) * h.n) {
        throw std::invalid_argument("HessianBounds: lambda must be n x n");
    }
    for (int i = 0; i < h.n; ++i) {
        for (int k = 0; k < h.n; ++k) {
            const double v = h.at(i, k);
            if (!(v >= 0.0) || !std::isfinite(v)) {
                throw std::invalid_argument("HessianBounds: entries must be finite and >= 0");
            }
            if (v != h.at(k, i)) {
                throw std::invalid_argument("HessianBounds: lambda must be symmetric");
            }
        }
    }
    double c = 0.0;
    for (int k = 0; k < h.n; ++k) {
        for (int i = 0; i < k; ++i) {
            c += h.at(i, k) * h.at(i, k);
        }
        c += 0.5 * h.at(k, k) * h.at(k, k);
    }
    return c;
}

McEstimate sigma_bar_mc(const PathEnsemble& ens, const PathIntegrand& u_bar,
                        double exponent, double confidence, int workers) {
    validate(ens.grid);
    if (!(exponent > 0.0)) throw std::invalid_argument("exponent must be > 0");
    if (!(confidence > 0.5 && confidence < 1.0)) {
        throw std::invalid_argument("confidence must lie in (0.5, 1)");
    }
    const int n = ens.grid.n_steps;
    const double dt = ens.grid.dt();
    std::vector<double> per_path(static_cast<std::size_t>(ens.n_paths));
    parallel_paths(ens.n_paths, workers, [&](int first, int last) {
        std::vector<double> db(static_cast<std::size_t>(n));
        std::vector<double> uv(static_cast<std::size_t>(n) + 1);
        for (int p = first; p < last; ++p) {
            brownian_increments(ens, p, db);
            u_bar(ens.grid, db, uv);
            double acc = 0.5 * (std::pow(std::fabs(uv[0]), exponent)
                                + std::pow(std::fabs(uv[static_cast<std::size_t>(n)]),
                                           exponent));
            for (int i = 1; i < n; ++i) {
                acc += std::pow(std::fabs(uv[static_cast<std::size_t>(i)]), exponent);
            }
            const double integral = acc * dt;
            if (!std::isfinite(integral)) {
                throw std::runtime_error("non-finite samples on path " + std::to_string(p));
            }
            per_path[static_cast<std::size_t>(p)] = integral;
        }
    });
    // a deterministic integrand yields bit-identical path integrals; the
    // interval is exactly zero-width then, not mean-rounding noise
    bool degenerate = true;
    for (double v : per_path) {
        if (v != per_path.front()) {
            degenerate = false;
            break;
        }
    }
    if (degenerate) return McEstimate{per_path.front(), per_path.front()};
    const double est = mean(per_path);
    const double se =
        std::sqrt(sample_variance(per_path) / static_cast<double>(per_path.size()));
    return McEstimate{est, est + normal_quantile(confidence) * se};
}

} // namespace itosup
