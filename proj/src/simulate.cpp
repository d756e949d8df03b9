#include "itosup/simulate.hpp"

#include "itosup/rng.hpp"
#include "itosup/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace itosup {

void validate(const GridSpec& g) {
    if (!(g.horizon > 0.0) || !std::isfinite(g.horizon)) {
        throw std::invalid_argument("grid horizon must be > 0");
    }
    if (g.n_steps < 2) throw std::invalid_argument("grid needs n_steps >= 2");
}

PathEnsemble gen_brownian(std::uint64_t seed, int n_paths, const GridSpec& grid,
                          std::uint32_t stream) {
    validate(grid);
    if (n_paths < 1) throw std::invalid_argument("n_paths must be >= 1");
    return PathEnsemble{seed, n_paths, grid, stream};
}

void brownian_increments(const PathEnsemble& ens, int path, std::span<double> out) {
    if (static_cast<int>(out.size()) != ens.grid.n_steps) {
        throw std::invalid_argument("increment buffer size must equal n_steps");
    }
    PathRng rng(ens.seed, ens.stream, static_cast<std::uint64_t>(path));
    rng.fill_normals(out);
    const double scale = std::sqrt(ens.grid.dt());
    for (double& z : out) z *= scale;
}

void parallel_paths(int n_paths, int workers,
                    const std::function<void(int, int)>& fn) {
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
        if (workers <= 0) workers = 1;
    }
    workers = std::min(workers, n_paths);
    if (workers <= 1) {
        fn(0, n_paths);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr err;
    std::mutex err_mu;
    const int chunk = (n_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int first = w * chunk;
        const int last = std::min(n_paths, first + chunk);
        if (first >= last) break;
        pool.emplace_back([&, first, last] {
            try {
                fn(first, last);
            } catch (...) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (!err) err = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

std::vector<double> ito_sup(const PathEnsemble& ens, const PathIntegrand& u,
                            int workers) {
    validate(ens.grid);
    const int n = ens.grid.n_steps;
    std::vector<double> sups(static_cast<std::size_t>(ens.n_paths));
    parallel_paths(ens.n_paths, workers, [&](int first, int last) {
        std::vector<double> db(static_cast<std::size_t>(n));
        std::vector<double> uv(static_cast<std::size_t>(n) + 1);
        for (int p = first; p < last; ++p) {
            brownian_increments(ens, p, db);
            u(ens.grid, db, uv);
            double s = 0.0;
            double best = 0.0;
            for (int i = 0; i < n; ++i) {
                s += uv[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(i)];
                if (s > best) best = s;
            }
            if (!std::isfinite(s)) {
                throw std::runtime_error("non-finite integrand on path "
                                         + std::to_string(p));
            }
            sups[static_cast<std::size_t>(p)] = best;
        }
    });
    return sups;
}

void brownian_path(std::span<const double> dB, std::span<double> b) {
    if (b.size() != dB.size() + 1) throw std::invalid_argument("path buffer size mismatch");
    double s = 0.0;
    b[0] = 0.0;
    for (std::size_t i = 0; i < dB.size(); ++i) {
        s += dB[i];
        b[i + 1] = s;
    }
}

void running_max_path(std::span<const double> b, std::span<double> m) {
    if (m.size() != b.size()) throw std::invalid_argument("running max buffer size mismatch");
    double best = b[0];
    for (std::size_t i = 0; i < b.size(); ++i) {
        best = std::max(best, b[i]);
        m[i] = best;
    }
}

void cir_path(const GridSpec& grid, std::span<const double> dB, double a, double b,
              double sigma, double x0, std::span<double> x) {
    if (x.size() != dB.size() + 1) throw std::invalid_argument("CIR buffer size mismatch");
    if (2.0 * a <= sigma * sigma) {
        throw std::invalid_argument("Feller condition violated: need 2a > sigma^2");
    }
    const double dt = grid.dt();
    double state = x0;
    x[0] = std::max(state, 0.0);
    for (std::size_t i = 0; i < dB.size(); ++i) {
        const double pos = std::max(state, 0.0);
        state += (a - b * pos) * dt + sigma * std::sqrt(pos) * dB[i];
        x[i + 1] = std::max(state, 0.0);
    }
}

double cir_mean(double a, double b, double x0, double t) {
    const double e = std::exp(-b * t);
    return x0 * e + a / b * (1.0 - e);
}

PathIntegrand constant_integrand(double value) {
    return [value](const GridSpec&, std::span<const double>, std::span<double> u) {
        std::fill(u.begin(), u.end(), value);
    };
}

PathIntegrand running_max_integrand(std::function<double(double)> transform) {
    return [transform = std::move(transform)](const GridSpec&, std::span<const double> dB,
                                              std::span<double> u) {
        double b = 0.0;
        double m = 0.0;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            u[i] = transform(m);
            b += dB[i];
            m = std::max(m, b);
        }
        u[u.size() - 1] = transform(m);
    };
}

PathIntegrand cir_integrand(double a, double b, double sigma, double x0) {
    if (2.0 * a <= sigma * sigma) {
        throw std::invalid_argument("Feller condition violated: need 2a > sigma^2");
    }
    return [a, b, sigma, x0](const GridSpec& grid, std::span<const double> dB,
                             std::span<double> u) {
        const double dt = grid.dt();
        double state = x0;
        for (std::size_t i = 0; i + 1 < u.size(); ++i) {
            const double pos = std::max(state, 0.0);
            u[i] = sigma * std::exp(b * grid.time(static_cast<int>(i))) * std::sqrt(pos);
            state += (a - b * pos) * dt + sigma * std::sqrt(pos) * dB[i];
        }
        u[u.size() - 1] = sigma * std::exp(b * grid.horizon) * std::sqrt(std::max(state, 0.0));
    };
}

std::vector<double> cir_deviation_sup(const PathEnsemble& ens, double a, double b,
                                      double sigma, double x0, int workers) {
    validate(ens.grid);
    const int n = ens.grid.n_steps;
    // discount factors and means are path-independent
    std::vector<double> disc(static_cast<std::size_t>(n) + 1);
    std::vector<double> meanv(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        const double t = ens.grid.time(i);
        disc[static_cast<std::size_t>(i)] = std::exp(b * t);
        meanv[static_cast<std::size_t>(i)] = cir_mean(a, b, x0, t);
    }
    std::vector<double> sups(static_cast<std::size_t>(ens.n_paths));
    parallel_paths(ens.n_paths, workers, [&](int first, int last) {
        std::vector<double> db(static_cast<std::size_t>(n));
        std::vector<double> x(static_cast<std::size_t>(n) + 1);
        for (int p = first; p < last; ++p) {
            brownian_increments(ens, p, db);
            cir_path(ens.grid, db, a, b, sigma, x0, x);
            double best = 0.0;
            for (int i = 0; i <= n; ++i) {
                const double dev = disc[static_cast<std::size_t>(i)]
                                   * (x[static_cast<std::size_t>(i)]
                                      - meanv[static_cast<std::size_t>(i)]);
                if (dev > best) best = dev;
            }
            sups[static_cast<std::size_t>(p)] = best;
        }
    });
    return sups;
}

Kernel2D make_kernel(const std::string& name, double T) {
    if (T <= 0.0) throw std::invalid_argument("kernel horizon must be > 0");
    if (name == "one") {
        Kernel2D k;
        k.name = name;
        k.g = [](double, double) { return 1.0; };
        k.factor_s = [](double) { return 1.0; };
        k.factor_theta = [](double) { return 1.0; };
        k.l2_norm_sq = T * T;
        return k;
    }
    if (name == "expsum") {
        Kernel2D k;
        k.name = name;
        k.g = [](double s, double theta) { return std::exp(-(s + theta)); };
        k.factor_s = [](double s) { return std::exp(-s); };
        k.factor_theta = [](double theta) { return std::exp(-theta); };
        const double one_dim = 0.5 * (1.0 - std::exp(-2.0 * T));
        k.l2_norm_sq = one_dim * one_dim;
        return k;
    }
    throw std::invalid_argument("unknown kernel: " + name);
}

PathIntegrand kernel_integrand(const Kernel2D& kernel) {
    if (kernel.factor_s && kernel.factor_theta) {
        auto fs = kernel.factor_s;
        auto ft = kernel.factor_theta;
        return [fs, ft](const GridSpec& grid, std::span<const double> dB,
                        std::span<double> u) {
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < u.size(); ++i) {
                u[i] = fs(grid.time(static_cast<int>(i))) * acc;
                acc += ft(grid.time(static_cast<int>(i))) * dB[i];
            }
            u[u.size() - 1] = fs(grid.horizon) * acc;
        };
    }
    auto g = kernel.g;
    if (!g) throw std::invalid_argument("kernel has no evaluation callback");
    return [g](const GridSpec& grid, std::span<const double> dB, std::span<double> u) {
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double s = grid.time(static_cast<int>(i));
            double acc = 0.0;
            for (std::size_t j = 0; j < i && j < dB.size(); ++j) {
                acc += g(s, grid.time(static_cast<int>(j))) * dB[j];
            }
            u[i] = acc;
        }
    };
}

std::vector<double> double_integral_sup(const PathEnsemble& ens, const Kernel2D& kernel,
                                        int workers) {
    validate(ens.grid);
    const int n = ens.grid.n_steps;
    const PathIntegrand u = kernel_integrand(kernel);
    std::vector<double> sups(static_cast<std::size_t>(ens.n_paths));
    parallel_paths(ens.n_paths, workers, [&](int first, int last) {
        std::vector<double> db(static_cast<std::size_t>(n));
        std::vector<double> uv(static_cast<std::size_t>(n) + 1);
        for (int p = first; p < last; ++p) {
            brownian_increments(ens, p, db);
            u(ens.grid, db, uv);
            double s = 0.0;
            double best = 0.0;
            for (int i = 0; i < n; ++i) {
                // I_t is twice the iterated integral of u against dB
                s += 2.0 * uv[static_cast<std::size_t>(i)] * db[static_cast<std::size_t>(i)];
                if (s > best) best = s;
            }
            if (!std::isfinite(s)) {
                throw std::runtime_error("non-finite kernel integrand on path "
                                         + std::to_string(p));
            }
            sups[static_cast<std::size_t>(p)] = best;
        }
    });
    return sups;
}

std::vector<double> gaussian_functional_samples(
    std::uint64_t seed, long n_samples,
    const std::function<double(std::span<const double>)>& f, int dim,
    std::optional<double> analytic_mean) {
    if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n_samples));
    std::vector<double> z(static_cast<std::size_t>(dim));
    for (long i = 0; i < n_samples; ++i) {
        PathRng rng(seed, 2, static_cast<std::uint64_t>(i));
        rng.fill_normals(z);
        const double v = f(z);
        if (!std::isfinite(v)) {
            throw std::runtime_error("non-finite functional value on sample "
                                     + std::to_string(i));
        }
        out[static_cast<std::size_t>(i)] = v;
    }
    const double center = analytic_mean ? *analytic_mean : mean(out);
    for (double& v : out) v -= center;
    return out;
}

} // namespace itosup
