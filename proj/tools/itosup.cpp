#include "itosup/bounds.hpp"
#include "itosup/mc_verify.hpp"
#include "itosup/scenario.hpp"
#include "itosup/vsolver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

using itosup::BoundParams;
using itosup::BoundValue;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct BoundArgs {
    std::string family;
    std::vector<double> xs;
    double sigma = 1.0;
    double c = 1.0;
    double alpha = 0.0;
    double horizon = 1.0;
    double m = 1.0;
    double a = 2.0, b = 1.0, x0 = 1.0;
    double gnorm = 1.0;
    bool structured = false;
};

BoundValue eval_family(const BoundArgs& args, double x) {
    const std::string& f = args.family;
    if (f == "classical") return itosup::eval_gaussian_tail(x, args.m);
    if (f == "alpha0") return itosup::eval_alpha0(x, {args.sigma, args.c, 0.0, args.horizon});
    if (f == "explicit-lt1") {
        return itosup::eval_explicit_lt1(x, {args.sigma, args.c, args.alpha, args.horizon});
    }
    if (f == "explicit-eq1") {
        return itosup::eval_explicit_eq1(x, {args.sigma, args.c, 1.0, args.horizon});
    }
    if (f == "explicit-neg") {
        return itosup::eval_explicit_neg_alpha(x, {args.sigma, args.c, args.alpha, args.horizon});
    }
    if (f == "gaussian-functional") return itosup::eval_gaussian_functional(x, args.sigma, args.c);
    if (f == "double-integral") return itosup::eval_double_integral(x, args.gnorm);
    if (f == "cir") return itosup::eval_cir(x, args.a, args.b, args.sigma, args.x0, args.horizon);
    throw std::invalid_argument("unknown bound family: " + f);
}

int run_bound(const BoundArgs& args) {
    nlohmann::json out = nlohmann::json::array();
    if (!args.structured) std::printf("%16s %22s %22s\n", "x", "raw", "clamped");
    for (double x : args.xs) {
        const BoundValue b = eval_family(args, x);
        if (args.structured) {
            out.push_back({{"x", x}, {"log_raw", b.log_raw}, {"raw", b.raw},
                           {"clamped", b.clamped}});
        } else {
            std::printf("%16.8g %22.15g %22.15g\n", x, b.raw, b.clamped);
        }
    }
    if (args.structured) std::cout << out.dump(2) << "\n";
    return kExitPass;
}

int run_vsolve(double alpha, double sigma, double c, double horizon,
               const std::vector<double>& xs, bool structured) {
    const BoundParams p{sigma, c, alpha, horizon};
    nlohmann::json out = nlohmann::json::array();
    if (!structured) std::printf("%16s %22s %14s\n", "x", "v", "residual");
    for (double x : xs) {
        const itosup::VSolution s = (alpha == 1.0) ? itosup::solve_v_eq1(x, p)
                                                   : itosup::solve_v_lt1(x, p);
        if (structured) {
            out.push_back({{"x", s.x}, {"v", s.v}, {"residual", s.residual}});
        } else {
            std::printf("%16.8g %22.15g %14.3e\n", s.x, s.v, s.residual);
        }
    }
    if (structured) std::cout << out.dump(2) << "\n";
    return kExitPass;
}

int run_verify(const itosup::ScenarioConfig& cfg, const std::string& out_dir,
               bool structured) {
    const itosup::ScenarioReport rep = itosup::run_scenario(cfg);
    if (!out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const std::string base = out_dir + "/" + rep.scenario;
        std::ofstream(base + ".csv") << itosup::to_csv(rep);
        std::ofstream(base + ".json") << itosup::to_json(rep);
    }
    if (structured) {
        std::cout << itosup::to_json(rep);
    } else {
        std::printf("scenario %s  (seed %llu, %d paths, %d steps, T = %g)\n",
                    rep.scenario.c_str(),
                    static_cast<unsigned long long>(rep.seed), rep.n_paths,
                    rep.n_steps, rep.horizon);
        std::printf("bound %s  sigma_bar = %.6g [%s]  c = %.6g [%s]\n",
                    rep.provenance.family.c_str(), rep.provenance.sigma_bar,
                    rep.provenance.sigma_source.c_str(), rep.provenance.c,
                    rep.provenance.c_source.c_str());
        std::printf("%14s %10s %12s %12s %12s  %s\n", "x", "k", "p_hat",
                    "upper_cl", "bound", "verdict");
        for (const auto& row : rep.rows) {
            std::printf("%14.6g %10lld %12.4e %12.4e %12.4e  %s\n", row.est.x,
                        row.est.k, row.est.p_hat, row.est.upper_cl,
                        row.bound.clamped, std::string(to_string(row.verdict)).c_str());
        }
        std::printf("%s (%.1f s)\n", rep.pass ? "PASS" : "FAIL", rep.runtime_seconds);
    }
    return rep.pass ? kExitPass : kExitFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tail bounds for running suprema of Ito integrals, with Monte Carlo verification"};
    app.require_subcommand(1);
    // --config may appear after the subcommand name; verify options live in
    // a [verify] section of the file
    app.fallthrough();
    app.set_config("--config", "", "config file (key = value, flags win)");

    BoundArgs bargs;
    CLI::App* bound = app.add_subcommand("bound", "evaluate a closed-form tail bound");
    bound->add_option("family", bargs.family, "bound family")
        ->required()
        ->check(CLI::IsMember({"classical", "alpha0", "explicit-lt1", "explicit-eq1",
                               "explicit-neg", "gaussian-functional", "double-integral",
                               "cir"}));
    bound->add_option("--x", bargs.xs, "thresholds to evaluate")->required();
    bound->add_option("--sigma", bargs.sigma, "sigma_bar (or CIR diffusion sigma)");
    bound->add_option("--c", bargs.c, "Malliavin constant");
    bound->add_option("--alpha", bargs.alpha, "growth exponent");
    bound->add_option("--T", bargs.horizon, "horizon");
    bound->add_option("--m", bargs.m, "classical L2 bound M");
    bound->add_option("--a", bargs.a, "CIR drift level a");
    bound->add_option("--b", bargs.b, "CIR reversion b");
    bound->add_option("--x0", bargs.x0, "CIR initial value");
    bound->add_option("--gnorm", bargs.gnorm, "L2 norm of the double-integral kernel");
    bool bound_structured = false;
    bound->add_flag("--structured", bound_structured, "emit JSON");

    double vs_alpha = 0.0, vs_sigma = 1.0, vs_c = 1.0, vs_T = 1.0;
    std::vector<double> vs_xs;
    bool vs_structured = false;
    CLI::App* vsolve = app.add_subcommand("vsolve", "solve the balance equation for v(x)");
    vsolve->add_option("--alpha", vs_alpha, "growth exponent in [0,1]")->required();
    vsolve->add_option("--sigma", vs_sigma, "sigma_bar");
    vsolve->add_option("--c", vs_c, "Malliavin constant");
    vsolve->add_option("--T", vs_T, "horizon");
    vsolve->add_option("--x", vs_xs, "points to solve at")->required();
    vsolve->add_flag("--structured", vs_structured, "emit JSON");

    itosup::ScenarioConfig cfg;
    std::string out_dir;
    std::string format = "table";
    bool dump_config = false;
    CLI::App* verify = app.add_subcommand("verify", "run a Monte Carlo verification scenario");
    verify->configurable();
    verify->add_flag("--dump-config", dump_config, "print the effective config and exit")
        ->configurable(false);
    verify->add_option("--scenario", cfg.scenario, "scenario name")
        ->required()
        ->check(CLI::IsMember(itosup::scenario_names()));
    verify->add_option("--seed", cfg.seed, "RNG seed");
    verify->add_option("--paths", cfg.n_paths, "number of simulated paths");
    verify->add_option("--steps", cfg.n_steps, "grid steps");
    verify->add_option("--T", cfg.horizon, "horizon");
    verify->add_option("--confidence", cfg.confidence, "one-sided confidence level");
    verify->add_option("--workers", cfg.workers, "worker threads (0 = hardware)");
    verify->add_option("--x", cfg.x_list, "explicit thresholds (default: auto grid)");
    verify->add_option("--x-points", cfg.x_points, "auto grid size");
    verify->add_option("--sigma-source", cfg.sigma_source, "closed-form | mc-estimate")
        ->check(CLI::IsMember({"closed-form", "mc-estimate"}));
    verify->add_option("--m", cfg.m, "classical-constant M");
    verify->add_option("--a", cfg.cir_a, "CIR a");
    verify->add_option("--b", cfg.cir_b, "CIR b");
    verify->add_option("--sigma", cfg.cir_sigma, "CIR sigma");
    verify->add_option("--x0", cfg.cir_x0, "CIR x0");
    verify->add_option("--epsilon", cfg.epsilon, "running-max-sqrt shift");
    verify->add_option("--kernel", cfg.kernel, "double-wiener kernel name");
    verify->add_option("--out", out_dir, "report output directory");
    verify->add_option("--format", format, "table | structured")
        ->check(CLI::IsMember({"table", "structured"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*bound) {
            bargs.structured = bound_structured;
            return run_bound(bargs);
        }
        if (*vsolve) {
            if (vs_alpha < 0.0 || vs_alpha > 1.0) {
                throw std::invalid_argument("vsolve handles alpha in [0,1] only");
            }
            return run_vsolve(vs_alpha, vs_sigma, vs_c, vs_T, vs_xs, vs_structured);
        }
        if (dump_config) {
            std::cout << app.config_to_str(false, false);
            return kExitPass;
        }
        if (out_dir.empty()) {
            if (const char* env = std::getenv("ITOSUP_OUT_DIR")) out_dir = env;
        }
        return run_verify(cfg, out_dir, format == "structured");
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
