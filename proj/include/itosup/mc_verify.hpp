#pragma once

#include "itosup/bounds.hpp"

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace itosup {

// Empirical exceedance probability at threshold x with an exact one-sided
// (Clopper-Pearson) upper confidence limit. Thresholds with fewer than
// k_min exceedances are flagged unresolvable and carry no verdict.
struct TailEstimate {
    double x = 0.0;
    long long n = 0;
    long long k = 0;
    double p_hat = 0.0;
    double upper_cl = 1.0;
    bool resolvable = true;
};

// exact one-sided upper binomial limit at the given confidence level
double clopper_pearson_upper(long long k, long long n, double confidence);

std::vector<TailEstimate> estimate_tail(std::span<const double> samples,
                                        std::span<const double> x_grid,
                                        double confidence, long long k_min = 10);

// Geometric grid from the empirical median to the (1 - k_min/n) quantile,
// so every point stays resolvable; falls back to linear spacing when the
// median is not positive.
std::vector<double> auto_x_grid(std::span<const double> samples, int n_points,
                                long long k_min = 10);

enum class Verdict { pass, marginal, fail, unresolvable };

std::string_view to_string(Verdict v);
Verdict verdict_from_string(std::string_view s);

struct ScenarioRow {
    TailEstimate est;
    BoundValue bound;
    Verdict verdict = Verdict::unresolvable;
};

// pass:      upper_cl <= clamped bound (statistically certified)
// marginal:  p_hat <= bound < upper_cl
// fail:      p_hat > bound
std::vector<ScenarioRow> certify(std::span<const TailEstimate> estimates,
                                 std::span<const BoundValue> bounds);

// A scenario passes when every resolvable row is a certified pass and at
// least one row is resolvable; marginal rows do not pass.
bool rows_pass(std::span<const ScenarioRow> rows);

// which constants fed the bound and where they came from
struct BoundProvenance {
    std::string family;
    double sigma_bar = 0.0;
    std::string sigma_source;
    double c = 0.0;
    std::string c_source;
    double alpha = 0.0;
    double horizon = 1.0;
};

struct ScenarioReport {
    std::string scenario;
    BoundProvenance provenance;
    std::uint64_t seed = 0;
    int n_paths = 0;
    int n_steps = 0;
    double horizon = 1.0;
    double confidence = 0.99;
    std::vector<ScenarioRow> rows;
    bool pass = false;
    std::map<std::string, double> diagnostics;
    double runtime_seconds = 0.0; // volatile, excluded from comparisons
    std::string timestamp;        // volatile, excluded from comparisons
};

std::string to_json(const ScenarioReport& r);
ScenarioReport report_from_json(const std::string& text);

// one row per x: scenario, x, n, k, p_hat, upper_cl, bound_raw,
// bound_clamped, verdict; '.' decimal point, round-trip precision
std::string to_csv(const ScenarioReport& r);

// equality on everything except the volatile timestamp/runtime fields
bool reports_equivalent(const ScenarioReport& a, const ScenarioReport& b);

} // namespace itosup
