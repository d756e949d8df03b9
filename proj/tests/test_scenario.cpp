#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "itosup/scenario.hpp"
#include "oracles.hpp"

#include <cmath>

using namespace itosup;

namespace {

ScenarioConfig small_config(const std::string& name) {
    ScenarioConfig cfg;
    cfg.scenario = name;
    cfg.n_paths = 4000;
    cfg.n_steps = 256;
    cfg.x_points = 8;
    cfg.seed = 20240306;
    cfg.workers = 2;
    return cfg;
}

} // namespace

TEST_CASE("config validation") {
    CHECK_THROWS_AS(validate(small_config("no-such-scenario")), std::invalid_argument);
    ScenarioConfig feller = small_config("cir");
    feller.cir_a = 0.4;
    CHECK_THROWS_AS(validate(feller), std::invalid_argument);
    ScenarioConfig src = small_config("classical-constant");
    src.sigma_source = "guesswork";
    CHECK_THROWS_AS(validate(src), std::invalid_argument);
    ScenarioConfig conf = small_config("classical-constant");
    conf.confidence = 1.2;
    CHECK_THROWS_AS(validate(conf), std::invalid_argument);
    ScenarioConfig kern = small_config("double-wiener");
    kern.kernel = "mystery";
    CHECK_THROWS_AS(validate(kern), std::invalid_argument);
}

TEST_CASE("every registered scenario runs and certifies at desk scale") {
    for (const std::string& name : scenario_names()) {
        const ScenarioReport rep = run_scenario(small_config(name));
        INFO("scenario ", name);
        REQUIRE_FALSE(rep.rows.empty());
        CHECK(rep.pass);
        for (const auto& row : rep.rows) {
            if (row.verdict != Verdict::unresolvable) {
                CHECK(row.verdict == Verdict::pass);
            }
            CHECK(row.est.upper_cl <= row.bound.clamped);
        }
        CHECK_FALSE(rep.provenance.family.empty());
        CHECK_FALSE(rep.timestamp.empty());
    }
}

TEST_CASE("double-wiener reports the pathwise identity diagnostic") {
    ScenarioConfig cfg = small_config("double-wiener");
    cfg.n_steps = 1024;
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.diagnostics.count("ito_identity_mean_max_abs_err") == 1);
    CHECK(rep.diagnostics.at("ito_identity_mean_max_abs_err") < 0.12);
}

TEST_CASE("running-max-square reports both sigma constants") {
    const ScenarioReport rep = run_scenario(small_config("running-max-square"));
    REQUIRE(rep.diagnostics.count("sigma_pow_half_computed") == 1);
    REQUIRE(rep.diagnostics.count("sigma_pow_half_printed") == 1);
    CHECK(rep.diagnostics.at("sigma_pow_half_computed") == doctest::Approx(1.0));
    CHECK(rep.diagnostics.at("sigma_pow_half_printed")
          == doctest::Approx(0.84089641525371454).epsilon(1e-14));
}

TEST_CASE("reports are reproducible across runs and worker counts") {
    ScenarioConfig cfg = small_config("cir");
    const ScenarioReport a = run_scenario(cfg);
    const ScenarioReport b = run_scenario(cfg);
    CHECK(reports_equivalent(a, b));
    CHECK(to_csv(a) == to_csv(b));
    for (int workers : {1, 4}) {
        ScenarioConfig w = cfg;
        w.workers = workers;
        CHECK(reports_equivalent(a, run_scenario(w)));
    }
}

TEST_CASE("mc-estimate sigma source stays conservative and records provenance") {
    ScenarioConfig cfg = small_config("running-max-square");
    cfg.sigma_source = "mc-estimate";
    const ScenarioReport rep = run_scenario(cfg);
    CHECK(rep.pass);
    REQUIRE(rep.diagnostics.count("sigma_bar_sq_mc_estimate") == 1);
    REQUIRE(rep.diagnostics.count("sigma_bar_sq_mc_upper_cl") == 1);
    CHECK(rep.diagnostics.at("sigma_bar_sq_mc_upper_cl")
          >= rep.diagnostics.at("sigma_bar_sq_mc_estimate"));
    // the estimate should float near the closed form T^3 = 1
    CHECK(rep.diagnostics.at("sigma_bar_sq_mc_estimate") == doctest::Approx(1.0).epsilon(0.15));
    CHECK(rep.provenance.sigma_source.rfind("mc-estimate", 0) == 0);
}

TEST_CASE("explicit x grids flag unresolvable thresholds without failing the run") {
    ScenarioConfig cfg = small_config("classical-constant");
    cfg.x_list = {0.7, 1.2, 50.0};
    const ScenarioReport rep = run_scenario(cfg);
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[2].verdict == Verdict::unresolvable);
    CHECK(rep.pass);
}

TEST_CASE("closed-form sigma helpers") {
    CHECK(running_max_exp_sigma_sq(1.0) == doctest::Approx(5.9230695369046143).epsilon(1e-9));
    CHECK(running_max_exp_sigma_sq(0.7) == doctest::Approx(2.6965115420436639).epsilon(1e-9));
    CHECK(running_max_square_sigma_sq(1.3) == doctest::Approx(1.3 * 1.3 * 1.3));
    CHECK(running_max_sqrt_sigma_sq(1.0, 0.0) == doctest::Approx(0.5));
    const double eps = 0.2;
    CHECK(running_max_sqrt_sigma_sq(1.0, eps)
          == doctest::Approx(0.5 + (4.0 / 3.0) * eps * std::sqrt(2.0 / 3.14159265358979323846)
                             + eps * eps)
                 .epsilon(1e-12));
}
