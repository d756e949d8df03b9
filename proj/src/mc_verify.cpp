#include "itosup/mc_verify.hpp"

#include <json.hpp>

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace itosup {

namespace {

// round-trip formatting, '.' decimal point, no locale
std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void require_confidence(double confidence) {
    if (!(confidence > 0.5 && confidence < 1.0)) {
        throw std::invalid_argument("confidence must lie in (0.5, 1)");
    }
}

} // namespace

double clopper_pearson_upper(long long k, long long n, double confidence) {
    require_confidence(confidence);
    if (n <= 0) throw std::invalid_argument("n must be > 0");
    if (k < 0 || k > n) throw std::invalid_argument("k must lie in [0, n]");
    if (k >= n) return 1.0;
    return boost::math::ibeta_inv(static_cast<double>(k) + 1.0,
                                  static_cast<double>(n - k), confidence);
}

std::vector<TailEstimate> estimate_tail(std::span<const double> samples,
                                        std::span<const double> x_grid,
                                        double confidence, long long k_min) {
    if (samples.empty()) throw std::invalid_argument("estimate_tail: empty samples");
    require_confidence(confidence);
    for (double s : samples) {
        if (!std::isfinite(s)) throw std::invalid_argument("estimate_tail: non-finite sample");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const long long n = static_cast<long long>(sorted.size());
    std::vector<TailEstimate> out;
    out.reserve(x_grid.size());
    for (double x : x_grid) {
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
        const long long k = static_cast<long long>(sorted.end() - it);
        TailEstimate e;
        e.x = x;
        e.n = n;
        e.k = k;
        e.p_hat = static_cast<double>(k) / static_cast<double>(n);
        e.upper_cl = clopper_pearson_upper(k, n, confidence);
        e.resolvable = k >= k_min;
        out.push_back(e);
    }
    return out;
}

std::vector<double> auto_x_grid(std::span<const double> samples, int n_points,
                                long long k_min) {
    if (samples.empty()) throw std::invalid_argument("auto_x_grid: empty samples");
    if (n_points < 1) throw std::invalid_argument("auto_x_grid: n_points must be >= 1");
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double lo = sorted[n / 2];
    std::size_t hi_idx = 0;
    if (n > static_cast<std::size_t>(k_min)) hi_idx = n - static_cast<std::size_t>(k_min) - 1;
    const double hi = sorted[std::max(hi_idx, n / 2)];
    if (n_points == 1 || !(hi > lo)) {
        return {lo};
    }
    std::vector<double> grid(static_cast<std::size_t>(n_points));
    if (lo > 0.0) {
        const double llo = std::log(lo);
        const double lhi = std::log(hi);
        for (int j = 0; j < n_points; ++j) {
            grid[static_cast<std::size_t>(j)] =
                std::exp(llo + (lhi - llo) * j / (n_points - 1));
        }
    } else {
        for (int j = 0; j < n_points; ++j) {
            grid[static_cast<std::size_t>(j)] = lo + (hi - lo) * j / (n_points - 1);
        }
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::string_view to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "PASS";
        case Verdict::marginal: return "MARGINAL";
        case Verdict::fail: return "FAIL";
        case Verdict::unresolvable: return "UNRESOLVABLE";
    }
    return "UNRESOLVABLE";
}

Verdict verdict_from_string(std::string_view s) {
    if (s == "PASS") return Verdict::pass;
    if (s == "MARGINAL") return Verdict::marginal;
    if (s == "FAIL") return Verdict::fail;
    if (s == "UNRESOLVABLE") return Verdict::unresolvable;
    throw std::invalid_argument("unknown verdict: " + std::string(s));
}

std::vector<ScenarioRow> certify(std::span<const TailEstimate> estimates,
                                 std::span<const BoundValue> bounds) {
    if (estimates.size() != bounds.size()) {
        throw std::invalid_argument("certify: estimate and bound grids are misaligned");
    }
    std::vector<ScenarioRow> rows;
    rows.reserve(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        ScenarioRow row;
        row.est = estimates[i];
        row.bound = bounds[i];
        if (!row.est.resolvable) {
            row.verdict = Verdict::unresolvable;
        } else if (row.est.upper_cl <= row.bound.clamped) {
            row.verdict = Verdict::pass;
        } else if (row.est.p_hat <= row.bound.clamped) {
            row.verdict = Verdict::marginal;
        } else {
            row.verdict = Verdict::fail;
        }
        rows.push_back(row);
    }
    return rows;
}

bool rows_pass(std::span<const ScenarioRow> rows) {
    bool any_resolvable = false;
    for (const auto& r : rows) {
        if (r.verdict == Verdict::unresolvable) continue;
        any_resolvable = true;
        if (r.verdict != Verdict::pass) return false;
    }
    return any_resolvable;
}

namespace {

nlohmann::json row_to_json(const ScenarioRow& r) {
    return nlohmann::json{
        {"x", r.est.x},
        {"n", r.est.n},
        {"k", r.est.k},
        {"p_hat", r.est.p_hat},
        {"upper_cl", r.est.upper_cl},
        {"resolvable", r.est.resolvable},
        {"bound_log_raw", r.bound.log_raw},
        {"bound_raw", r.bound.raw},
        {"bound_clamped", r.bound.clamped},
        {"verdict", std::string(to_string(r.verdict))},
    };
}

ScenarioRow row_from_json(const nlohmann::json& j) {
    ScenarioRow r;
    r.est.x = j.at("x").get<double>();
    r.est.n = j.at("n").get<long long>();
    r.est.k = j.at("k").get<long long>();
    r.est.p_hat = j.at("p_hat").get<double>();
    r.est.upper_cl = j.at("upper_cl").get<double>();
    r.est.resolvable = j.at("resolvable").get<bool>();
    r.bound.log_raw = j.at("bound_log_raw").get<double>();
    r.bound.raw = j.at("bound_raw").get<double>();
    r.bound.clamped = j.at("bound_clamped").get<double>();
    r.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    return r;
}

} // namespace

std::string to_json(const ScenarioReport& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) rows.push_back(row_to_json(row));
    nlohmann::json j{
        {"scenario", r.scenario},
        {"provenance",
         {{"family", r.provenance.family},
          {"sigma_bar", r.provenance.sigma_bar},
          {"sigma_source", r.provenance.sigma_source},
          {"c", r.provenance.c},
          {"c_source", r.provenance.c_source},
          {"alpha", r.provenance.alpha},
          {"horizon", r.provenance.horizon}}},
        {"seed", r.seed},
        {"n_paths", r.n_paths},
        {"n_steps", r.n_steps},
        {"horizon", r.horizon},
        {"confidence", r.confidence},
        {"rows", rows},
        {"pass", r.pass},
        {"diagnostics", r.diagnostics},
        {"runtime_seconds", r.runtime_seconds},
        {"timestamp", r.timestamp},
    };
    return j.dump(2) + "\n";
}

ScenarioReport report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    ScenarioReport r;
    r.scenario = j.at("scenario").get<std::string>();
    const auto& p = j.at("provenance");
    r.provenance.family = p.at("family").get<std::string>();
    r.provenance.sigma_bar = p.at("sigma_bar").get<double>();
    r.provenance.sigma_source = p.at("sigma_source").get<std::string>();
    r.provenance.c = p.at("c").get<double>();
    r.provenance.c_source = p.at("c_source").get<std::string>();
    r.provenance.alpha = p.at("alpha").get<double>();
    r.provenance.horizon = p.at("horizon").get<double>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.n_paths = j.at("n_paths").get<int>();
    r.n_steps = j.at("n_steps").get<int>();
    r.horizon = j.at("horizon").get<double>();
    r.confidence = j.at("confidence").get<double>();
    for (const auto& row : j.at("rows")) r.rows.push_back(row_from_json(row));
    r.pass = j.at("pass").get<bool>();
    r.diagnostics = j.at("diagnostics").get<std::map<std::string, double>>();
    r.runtime_seconds = j.at("runtime_seconds").get<double>();
    r.timestamp = j.at("timestamp").get<std::string>();
    return r;
}

std::string to_csv(const ScenarioReport& r) {
    std::string out = "scenario,x,n,k,p_hat,upper_cl,bound_raw,bound_clamped,verdict\n";
    for (const auto& row : r.rows) {
        out += r.scenario;
        out += ',';
        out += fmt_double(row.est.x);
        out += ',';
        out += std::to_string(row.est.n);
        out += ',';
        out += std::to_string(row.est.k);
        out += ',';
        out += fmt_double(row.est.p_hat);
        out += ',';
        out += fmt_double(row.est.upper_cl);
        out += ',';
        out += fmt_double(row.bound.raw);
        out += ',';
        out += fmt_double(row.bound.clamped);
        out += ',';
        out += to_string(row.verdict);
        out += '\n';
    }
    return out;
}

bool reports_equivalent(const ScenarioReport& a, const ScenarioReport& b) {
    ScenarioReport ca = a;
    ScenarioReport cb = b;
    ca.runtime_seconds = cb.runtime_seconds = 0.0;
    ca.timestamp = cb.timestamp = "";
    return to_json(ca) == to_json(cb);
}

} // namespace itosup
