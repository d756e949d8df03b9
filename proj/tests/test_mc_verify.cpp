#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "itosup/mc_verify.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>

using namespace itosup;

TEST_CASE("clopper-pearson upper limits") {
    CHECK(clopper_pearson_upper(0, 100, 0.95)
          == doctest::Approx(0.029513049607039934).epsilon(1e-12));
    CHECK(clopper_pearson_upper(100, 100, 0.95) == 1.0);
    CHECK(clopper_pearson_upper(50, 100000, 0.99)
          == doctest::Approx(0.0006906065059266389).epsilon(1e-9));
    // cross-check against a direct binomial-sum search
    CHECK(clopper_pearson_upper(50, 100000, 0.99)
          == doctest::Approx(oracle::clopper_pearson_upper(50, 100000, 0.99)).epsilon(1e-8));
    for (long long k : {0LL, 3LL, 17LL, 250LL}) {
        const long long n = 1000;
        CHECK(clopper_pearson_upper(k, n, 0.99)
              == doctest::Approx(oracle::clopper_pearson_upper(k, n, 0.99)).epsilon(1e-8));
    }
    CHECK_THROWS_AS(clopper_pearson_upper(1, 0, 0.95), std::invalid_argument);
    CHECK_THROWS_AS(clopper_pearson_upper(1, 10, 0.4), std::invalid_argument);
}

TEST_CASE("clopper-pearson coverage") {
    // upper limit must cover the true p in at least a gamma fraction
    const double p = 0.07, gamma = 0.95;
    const long long n = 400;
    std::mt19937 gen(1234);
    std::binomial_distribution<long long> bin(n, p);
    int covered = 0;
    const int reps = 10000;
    for (int i = 0; i < reps; ++i) {
        covered += clopper_pearson_upper(bin(gen), n, gamma) >= p;
    }
    const double se = std::sqrt(gamma * (1.0 - gamma) / reps);
    CHECK(static_cast<double>(covered) / reps >= gamma - 3.0 * se);
}

TEST_CASE("estimate_tail") {
    std::vector<double> samples(10);
    for (int i = 0; i < 10; ++i) samples[static_cast<std::size_t>(i)] = i + 1.0;
    const std::vector<double> grid = {0.0, 5.5, 9.5, 20.0};
    const auto est = estimate_tail(samples, grid, 0.95, 2);
    CHECK(est[0].k == 10);
    CHECK(est[0].p_hat == 1.0);
    CHECK(est[0].upper_cl == 1.0);
    CHECK(est[1].k == 5);
    CHECK(est[1].p_hat == doctest::Approx(0.5));
    CHECK(est[2].k == 1);
    CHECK_FALSE(est[2].resolvable);
    CHECK(est[3].k == 0);
    for (std::size_t i = 1; i < est.size(); ++i) {
        CHECK(est[i].upper_cl <= est[i - 1].upper_cl);
    }
    CHECK_THROWS_AS(estimate_tail({}, grid, 0.95), std::invalid_argument);
}

TEST_CASE("auto x grid") {
    const std::vector<double> constant(100, 2.5);
    CHECK(auto_x_grid(constant, 8) == std::vector<double>{2.5});

    std::mt19937 gen(4321);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<double> normal(100000);
    for (double& v : normal) v = nd(gen);
    CHECK(auto_x_grid(normal, 1).size() == 1);
    const auto grid = auto_x_grid(normal, 10);
    REQUIRE(grid.size() == 10);
    // median of a symmetric sample is near zero, so spacing falls back to
    // linear; the top point sits near the 0.9999 quantile of N(0,1)
    CHECK(std::fabs(grid.front()) < 0.02);
    CHECK(grid.back() == doctest::Approx(3.719).epsilon(0.05));
    const auto est = estimate_tail(normal, grid, 0.99);
    for (const auto& e : est) CHECK(e.resolvable);
    CHECK(est.back().k == 10);

    // positive samples get a geometric grid
    std::vector<double> folded(normal.size());
    for (std::size_t i = 0; i < normal.size(); ++i) folded[i] = std::fabs(normal[i]) + 0.5;
    const auto ggrid = auto_x_grid(folded, 6);
    const double r0 = ggrid[1] / ggrid[0];
    for (std::size_t i = 2; i < ggrid.size(); ++i) {
        CHECK(ggrid[i] / ggrid[i - 1] == doctest::Approx(r0).epsilon(1e-9));
    }
}

TEST_CASE("certify verdicts") {
    auto mk_est = [](double x, long long k, long long n, double conf) {
        TailEstimate e;
        e.x = x;
        e.n = n;
        e.k = k;
        e.p_hat = static_cast<double>(k) / n;
        e.upper_cl = clopper_pearson_upper(k, n, conf);
        e.resolvable = k >= 10;
        return e;
    };

    // bound = 1 passes everything resolvable
    std::vector<TailEstimate> est = {mk_est(1.0, 500, 1000, 0.99),
                                     mk_est(2.0, 100, 1000, 0.99)};
    std::vector<BoundValue> ones = {make_bound(0.5), make_bound(0.0)};
    auto rows = certify(est, ones);
    CHECK(rows[0].verdict == Verdict::pass);
    CHECK(rows[1].verdict == Verdict::pass);
    CHECK(rows_pass(rows));

    // p_hat = 0 with a permissive bound passes
    std::vector<TailEstimate> zero = {mk_est(3.0, 0, 1000, 0.99)};
    zero[0].resolvable = true;
    const std::vector<BoundValue> permissive = {make_bound(std::log(0.5))};
    CHECK(certify(zero, permissive)[0].verdict == Verdict::pass);

    // p_hat = 0.5 against a 0.1 bound fails
    std::vector<TailEstimate> bad = {mk_est(1.0, 500, 1000, 0.99)};
    const std::vector<BoundValue> tight = {make_bound(std::log(0.1))};
    auto frows = certify(bad, tight);
    CHECK(frows[0].verdict == Verdict::fail);
    CHECK_FALSE(rows_pass(frows));

    // k = 1 of 100: p_hat 0.01 < bound 0.02 < upper_cl ~ 0.065 is marginal
    std::vector<TailEstimate> mid = {mk_est(1.0, 1, 100, 0.99)};
    mid[0].resolvable = true;
    const std::vector<BoundValue> between = {make_bound(std::log(0.02))};
    auto mrows = certify(mid, between);
    CHECK(mrows[0].verdict == Verdict::marginal);
    CHECK_FALSE(rows_pass(mrows));

    // unresolvable rows carry no verdict weight
    std::vector<TailEstimate> unres = {mk_est(9.0, 2, 1000, 0.99)};
    auto urows = certify(unres, permissive);
    CHECK(urows[0].verdict == Verdict::unresolvable);
    CHECK_FALSE(rows_pass(urows)); // nothing resolvable either

    const std::vector<BoundValue> one_bound = {make_bound(0.0)};
    CHECK_THROWS_AS(certify(est, one_bound), std::invalid_argument);
}

TEST_CASE("certify is monotone in the bound") {
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> up(0.0, 1.0);
    auto rank = [](Verdict v) {
        switch (v) {
            case Verdict::pass: return 0;
            case Verdict::marginal: return 1;
            case Verdict::fail: return 2;
            default: return 3;
        }
    };
    for (int i = 0; i < 300; ++i) {
        TailEstimate e;
        e.x = 1.0;
        e.n = 500;
        e.k = static_cast<long long>(up(gen) * 400) + 10;
        e.p_hat = static_cast<double>(e.k) / e.n;
        e.upper_cl = clopper_pearson_upper(e.k, e.n, 0.99);
        e.resolvable = true;
        const double b1 = up(gen);
        const double b2 = b1 + (1.0 - b1) * up(gen); // b2 >= b1
        const std::vector<TailEstimate> est = {e};
        const std::vector<BoundValue> bv1 = {make_bound(std::log(b1))};
        const std::vector<BoundValue> bv2 = {make_bound(std::log(b2))};
        const auto r1 = certify(est, bv1);
        const auto r2 = certify(est, bv2);
        REQUIRE(rank(r2[0].verdict) <= rank(r1[0].verdict));
    }
}

TEST_CASE("report serialization round-trips losslessly") {
    ScenarioReport r;
    r.scenario = "classical-constant";
    r.provenance = {"classical", 1.25, "closed-form (M)", 0.0, "none", 0.0, 1.0};
    r.seed = 424242;
    r.n_paths = 1000;
    r.n_steps = 64;
    r.horizon = 1.0;
    r.confidence = 0.99;
    TailEstimate e;
    e.x = 1.1;
    e.n = 1000;
    e.k = 17;
    e.p_hat = 0.017;
    e.upper_cl = clopper_pearson_upper(17, 1000, 0.99);
    e.resolvable = true;
    const std::vector<TailEstimate> one_est = {e};
    const std::vector<BoundValue> one_bv = {make_bound(-0.605)};
    r.rows = certify(one_est, one_bv);
    r.pass = rows_pass(r.rows);
    r.diagnostics["example_diag"] = 0.123456789012345678;
    r.runtime_seconds = 1.5;
    r.timestamp = "2024-03-06T00:00:00Z";

    const std::string json = to_json(r);
    const ScenarioReport back = report_from_json(json);
    CHECK(to_json(back) == json);
    CHECK(back.rows.size() == 1);
    CHECK(back.rows[0].est.upper_cl == r.rows[0].est.upper_cl);
    CHECK(back.pass == r.pass);

    // equivalence ignores the volatile fields only
    ScenarioReport later = back;
    later.timestamp = "2030-01-01T00:00:00Z";
    later.runtime_seconds = 99.0;
    CHECK(reports_equivalent(r, later));
    later.seed = 1;
    CHECK_FALSE(reports_equivalent(r, later));

    const std::string csv = to_csv(r);
    CHECK(csv.rfind("scenario,x,n,k,p_hat,upper_cl,bound_raw,bound_clamped,verdict\n", 0) == 0);
    CHECK(csv.find("classical-constant,1.1000000000000001,1000,17,") != std::string::npos);
    CHECK(to_csv(back) == csv);
}
