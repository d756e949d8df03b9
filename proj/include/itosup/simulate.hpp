#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace itosup {

// uniform grid t_i = i * horizon / n_steps, i = 0..n_steps
struct GridSpec {
    double horizon = 1.0;
    int n_steps = 4096;

    double dt() const { return horizon / n_steps; }
    double time(int i) const { return horizon * i / n_steps; }
};

void validate(const GridSpec& g);

// A seeded, lazily generated collection of Brownian paths. Increments are
// a pure function of (seed, stream, path index), so ensembles are
// reproducible bit-for-bit regardless of how paths are partitioned across
// workers; they are materialized one path at a time.
struct PathEnsemble {
    std::uint64_t seed = 42;
    int n_paths = 100000;
    GridSpec grid;
    std::uint32_t stream = 0;
};

PathEnsemble gen_brownian(std::uint64_t seed, int n_paths, const GridSpec& grid,
                          std::uint32_t stream = 0);

// fills out[0..n_steps-1] with dB_i ~ N(0, dt) for the given path
void brownian_increments(const PathEnsemble& ens, int path, std::span<double> out);

// Integrand evaluated at every grid point: u[i] is the value at t_i and
// may depend on dB[0..i-1] only (Ito / left-endpoint convention).
// u.size() == n_steps + 1; the final entry is used by time integrals, not
// by the stochastic integral itself.
using PathIntegrand =
    std::function<void(const GridSpec&, std::span<const double> dB, std::span<double> u)>;

// Per-path running supremum of the discretized integral
// sum_{i<m} u(t_i) dB_i over m = 0..n_steps (the value 0 at t = 0 is
// included). A sup over any sub-grid is at most the sup over the full
// grid, so grid suprema underestimate the continuous-time supremum and
// empirical tails are biased low - the conservative direction when
// certifying that tails stay below a bound. Throws std::runtime_error
// with the path index if the integrand produces non-finite values.
std::vector<double> ito_sup(const PathEnsemble& ens, const PathIntegrand& u,
                            int workers = 1);

// b[0] = 0, b[i] = sum of dB[0..i-1]; b.size() == dB.size() + 1
void brownian_path(std::span<const double> dB, std::span<double> b);

// m[i] = max of b[0..i]
void running_max_path(std::span<const double> b, std::span<double> m);

// Full-truncation Euler path of dX = (a - bX)dt + sigma sqrt(X) dB;
// x[i] = max(state_i, 0), x.size() == dB.size() + 1.
void cir_path(const GridSpec& grid, std::span<const double> dB, double a, double b,
              double sigma, double x0, std::span<double> x);

double cir_mean(double a, double b, double x0, double t);

PathIntegrand constant_integrand(double value);

// u(t_i) = transform(max_{j<=i} B_{t_j})
PathIntegrand running_max_integrand(std::function<double(double)> transform);

// u(t_i) = sigma e^{b t_i} sqrt(X_i) along the full-truncation CIR path
PathIntegrand cir_integrand(double a, double b, double sigma, double x0);

// per-path sup over grid points of e^{b t_i} (X_i - E[X_i])
std::vector<double> cir_deviation_sup(const PathEnsemble& ens, double a, double b,
                                      double sigma, double x0, int workers = 1);

// Symmetric kernel on [0,T]^2. When factor_s/factor_theta are set,
// g(s,theta) = factor_s(s) * factor_theta(theta) and the inner integral
// runs in O(n) per path; otherwise the generic O(n^2) route is used.
struct Kernel2D {
    std::string name;
    std::function<double(double, double)> g;
    std::function<double(double)> factor_s;
    std::function<double(double)> factor_theta;
    double l2_norm_sq = -1.0; // over [0,T]^2
};

// registered kernels: "one" (g = 1), "expsum" (g = e^{-(s+theta)})
Kernel2D make_kernel(const std::string& name, double T);

// Integrand u_s = sum_{theta_j < s} g(s, theta_j) dB_j of the iterated
// representation; the double integral itself is 2x its Ito integral.
PathIntegrand kernel_integrand(const Kernel2D& kernel);

// per-path running supremum of the double integral I_t over grid points
std::vector<double> double_integral_sup(const PathEnsemble& ens, const Kernel2D& kernel,
                                        int workers = 1);

// Centered samples of F = f(Z_1..Z_dim) for a standard Gaussian vector Z.
// The analytic mean is subtracted when supplied, the empirical mean
// otherwise.
std::vector<double> gaussian_functional_samples(
    std::uint64_t seed, long n_samples,
    const std::function<double(std::span<const double>)>& f, int dim,
    std::optional<double> analytic_mean = std::nullopt);

// Runs fn(first, last) over a partition of [0, n_paths); results must be
// written by path index. The partition does not affect any generated
// numbers.
void parallel_paths(int n_paths, int workers,
                    const std::function<void(int, int)>& fn);

} // namespace itosup
