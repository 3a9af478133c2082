#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "cyclocopula/copula.hpp"
#include "cyclocopula/cyclo_sim.hpp"
#include "cyclocopula/experiment.hpp"
#include "cyclocopula/fbm.hpp"
#include "cyclocopula/gof.hpp"
#include "cyclocopula/rank.hpp"
#include "cyclocopula/spectral.hpp"

using namespace cyclocopula;

namespace {

using Clock = std::chrono::steady_clock;

constexpr std::uint64_t seed_base = 20200101;

struct Verdict {
    bool pass;
    std::string detail;
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

ExperimentConfig table_grid(double hurst) {
    auto c = profile_config("desk");
    c.H_list = {hurst};
    c.T_list = {1, 2};
    c.families = {CopulaFamily::gaussian};
    c.master_seed = seed_base;
    return c;
}

Verdict grid_at_least(double hurst, ErrorTerm error_term = ErrorTerm::increment) {
    const auto start = Clock::now();
    auto config = table_grid(hurst);
    config.error_term_mode = error_term;
    const auto results = run_experiment(config, RunOptions{std::max(1u, std::thread::hardware_concurrency())});
    const double elapsed = seconds_since(start);
    double min_r = 1.0;
    double min_wi = 1.0;
    double min_ns = 1.0;
    std::size_t below = 0;
    std::size_t failures = 0;
    for (const auto& r : results) {
        min_r = std::min(min_r, r.mean_r);
        min_wi = std::min(min_wi, r.mean_wi);
        min_ns = std::min(min_ns, r.mean_ns);
        below += (r.mean_r >= 0.9 && r.mean_wi >= 0.9 && r.mean_ns >= 0.9) ? 0 : 1;
        failures += r.failures;
    }
    const bool pass = below == 0 && failures < results.size() * config.replications && elapsed <= 600.0;
    return {pass, fmt("%zu/%zu cells below 0.90; min r=%.4f WI=%.4f NS=%.4f (bound 0.90); "
                      "failed replications %zu; runtime %.1f s (limit 600)",
                      below, results.size(), min_r, min_wi, min_ns, failures, elapsed)};
}

// zero-mean sample covariance of generated fBm paths at n = 8
Verdict fbm_covariance_check() {
    const auto start = Clock::now();
    const std::size_t n = 8;
    const std::size_t paths = 2000;
    double worst = 0.0;
    std::size_t outside = 0;
    Rng rng(seed_base + 3);
    for (double hv : {0.25, 0.5, 0.75}) {
        const HurstParameter h(hv);
        for (auto gen : {FbmGenerator::exact_cholesky, FbmGenerator::circulant_embedding}) {
            std::vector<double> sum(n * n, 0.0);
            for (std::size_t p = 0; p < paths; ++p) {
                const auto path = gen == FbmGenerator::exact_cholesky ? generate_fbm_cholesky(n, h, rng)
                                                                      : generate_fbm_circulant(n, h, rng);
                const auto x = path.values();
                for (std::size_t i = 0; i < n; ++i) {
                    for (std::size_t j = 0; j < n; ++j) {
                        sum[i * n + j] += x[i] * x[j];
                    }
                }
            }
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    const long s = static_cast<long>(i + 1);
                    const long t = static_cast<long>(j + 1);
                    const double g = fbm_covariance(s, t, h);
                    const double se =
                        std::sqrt((fbm_covariance(s, s, h) * fbm_covariance(t, t, h) + g * g) / paths);
                    const double z = std::abs(sum[i * n + j] / paths - g) / se;
                    worst = std::max(worst, z);
                    outside += z > 3.0 ? 1 : 0;
                }
            }
        }
    }
    bool exact = true;
    const auto bm = fbm_covariance_matrix(n, HurstParameter(0.5));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            exact = exact && bm(i, j) == static_cast<double>(std::min(i, j) + 1);
        }
    }
    const double elapsed = seconds_since(start);
    return {outside == 0 && exact && elapsed <= 30.0,
            fmt("%zu/384 entries beyond 3 SE (worst %.2f SE); H=0.5 matrix equals min(s,t): %s; runtime %.2f s "
                "(limit 30)",
                outside, worst, exact ? "yes" : "no", elapsed)};
}

Verdict generator_equivalence() {
    const std::size_t n = 32;
    const std::size_t paths = 2000;
    double worst = 0.0;
    std::size_t outside = 0;
    Rng rng(seed_base + 4);
    for (double hv : {0.25, 0.75}) {
        const HurstParameter h(hv);
        std::vector<double> var_chol(n, 0.0);
        std::vector<double> var_circ(n, 0.0);
        for (std::size_t p = 0; p < paths; ++p) {
            const auto a = generate_fbm_cholesky(n, h, rng);
            const auto b = generate_fbm_circulant(n, h, rng);
            for (std::size_t i = 0; i < n; ++i) {
                var_chol[i] += a.values()[i] * a.values()[i] / paths;
                var_circ[i] += b.values()[i] * b.values()[i] / paths;
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const double se = std::sqrt(2.0 / paths * (var_chol[i] * var_chol[i] + var_circ[i] * var_circ[i]));
            const double z = std::abs(var_chol[i] - var_circ[i]) / se;
            worst = std::max(worst, z);
            outside += z > 3.0 ? 1 : 0;
        }
    }
    return {outside == 0, fmt("%zu/64 indices beyond 3 combined SE (worst %.2f SE)", outside, worst)};
}

Verdict tau_oracles() {
    struct Case {
        CopulaFamily family;
        CopulaParams params;
    };
    const std::vector<Case> cases{
        {CopulaFamily::clayton, make_params(CopulaFamily::clayton, 1.0)},
        {CopulaFamily::clayton, make_params(CopulaFamily::clayton, 2.0)},
        {CopulaFamily::gumbel, make_params(CopulaFamily::gumbel, 1.5)},
        {CopulaFamily::gumbel, make_params(CopulaFamily::gumbel, 2.0)},
        {CopulaFamily::frank, make_params(CopulaFamily::frank, 1.0)},
        {CopulaFamily::frank, make_params(CopulaFamily::frank, 5.0)},
        {CopulaFamily::gaussian, make_params(CopulaFamily::gaussian, 0.3)},
        {CopulaFamily::gaussian, make_params(CopulaFamily::gaussian, 0.8)},
        {CopulaFamily::student_t, make_params(CopulaFamily::student_t, 0.5, 4.0)},
    };
    Rng rng(seed_base + 5);
    double worst = 0.0;
    std::string worst_case;
    for (const auto& c : cases) {
        const auto pairs = sample_copula(c.family, c.params, 100000, rng);
        std::vector<double> u(pairs.size());
        std::vector<double> v(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            u[i] = pairs[i].first;
            v[i] = pairs[i].second;
        }
        const double err = std::abs(kendall_tau(u, v) - tau_from_theta(c.family, c.params));
        if (err >= worst) {
            worst = err;
            worst_case = fmt("%s theta=%g", std::string(to_string(c.family)).c_str(), c.params.theta);
        }
    }
    return {worst <= 0.01, fmt("worst |tau_hat - tau| = %.5f at %s (limit 0.01, 9 settings)", worst,
                               worst_case.c_str())};
}

Verdict parameter_recovery() {
    Rng rng(seed_base + 6);
    const auto fitted = [&](CopulaFamily family, double theta) {
        const auto pairs = sample_copula(family, make_params(family, theta), 5000, rng);
        std::vector<double> u(pairs.size());
        std::vector<double> v(pairs.size());
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            u[i] = pairs[i].first;
            v[i] = pairs[i].second;
        }
        return fit_copula(u, v, family).params.theta;
    };
    const double clayton = fitted(CopulaFamily::clayton, 2.0);
    const double gumbel = fitted(CopulaFamily::gumbel, 2.0);
    const double frank = fitted(CopulaFamily::frank, 1.0);
    const double rel_c = std::abs(clayton - 2.0) / 2.0;
    const double rel_g = std::abs(gumbel - 2.0) / 2.0;
    const double abs_f = std::abs(frank - 1.0);
    return {rel_c <= 0.075 && rel_g <= 0.075 && abs_f <= 0.1,
            fmt("Clayton %.4f (rel err %.4f, limit 0.075); Gumbel %.4f (rel err %.4f, limit 0.075); "
                "Frank %.4f (abs err %.4f, limit 0.1)",
                clayton, rel_c, gumbel, rel_g, frank, abs_f)};
}

struct LawCase {
    CopulaFamily family;
    CopulaParams params;
};

std::vector<LawCase> law_cases() {
    return {
        {CopulaFamily::gaussian, make_params(CopulaFamily::gaussian, -0.7)},
        {CopulaFamily::gaussian, make_params(CopulaFamily::gaussian, 0.8)},
        {CopulaFamily::student_t, make_params(CopulaFamily::student_t, 0.5, 4.0)},
        {CopulaFamily::student_t, make_params(CopulaFamily::student_t, -0.3, 2.5)},
        {CopulaFamily::clayton, make_params(CopulaFamily::clayton, 2.0)},
        {CopulaFamily::clayton, make_params(CopulaFamily::clayton, -0.5)},
        {CopulaFamily::gumbel, make_params(CopulaFamily::gumbel, 1.5)},
        {CopulaFamily::gumbel, make_params(CopulaFamily::gumbel, 4.0)},
        {CopulaFamily::frank, make_params(CopulaFamily::frank, 5.0)},
        {CopulaFamily::frank, make_params(CopulaFamily::frank, -8.0)},
    };
}

Verdict copula_laws() {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) {
        grid.push_back(i / 10.0);
    }
    double worst = 0.0;
    std::size_t violations = 0;
    const auto check = [&](double excess) {
        worst = std::max(worst, excess);
        violations += excess > 1e-9 ? 1 : 0;
    };
    for (const auto& c : law_cases()) {
        const auto cdf = [&](double a, double b) { return copula_cdf(c.family, c.params, a, b); };
        for (double a : grid) {
            check(std::abs(cdf(a, 0.0)));
            check(std::abs(cdf(0.0, a)));
            check(std::abs(cdf(a, 1.0) - a));
            check(std::abs(cdf(1.0, a) - a));
            for (double b : grid) {
                const double v = cdf(a, b);
                check(std::max(a + b - 1.0, 0.0) - v);
                check(v - std::min(a, b));
            }
        }
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            for (std::size_t j = 0; j + 1 < grid.size(); ++j) {
                check(-(cdf(grid[i + 1], grid[j + 1]) - cdf(grid[i + 1], grid[j]) - cdf(grid[i], grid[j + 1]) +
                        cdf(grid[i], grid[j])));
            }
        }
    }
    return {violations == 0,
            fmt("%zu violations beyond 1e-9 over 10 settings (worst excess %.3g)", violations, worst)};
}

Verdict conditional_h_consistency() {
    double worst = 0.0;
    const double step = 1e-5;
    for (const auto& c : law_cases()) {
        for (double u : {0.1, 0.3, 0.5, 0.7, 0.9}) {
            for (double v : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const double fd =
                    (copula_cdf(c.family, c.params, u + step, v) - copula_cdf(c.family, c.params, u - step, v)) /
                    (2.0 * step);
                worst = std::max(worst, std::abs(conditional_h(c.family, c.params, v, u) - fd));
            }
        }
    }
    return {worst <= 1e-5, fmt("worst |h - dC/du| = %.3g over 25 points x 10 settings (limit 1e-5)", worst)};
}

Verdict cycle_detection() {
    ParfbmConfig planted;
    planted.n = 1200;
    planted.period = 4;
    planted.phi = 0.7;
    planted.hurst = 0.25;
    int hits = 0;
    int none = 0;
    for (int run = 0; run < 100; ++run) {
        Rng rng(derive_seed(seed_base + 9, 0, static_cast<std::uint64_t>(run)));
        const auto [x, y] = simulate_parfbm(planted, rng);
        hits += detect_period(x).period == std::optional<std::size_t>(4) ? 1 : 0;

        Rng ar_rng(derive_seed(seed_base + 9, 1, static_cast<std::uint64_t>(run)));
        std::vector<double> ar(1200);
        double prev = 0.0;
        for (int burn = 0; burn < 100; ++burn) {
            prev = 0.5 * prev + standard_normal(ar_rng);
        }
        for (auto& v : ar) {
            prev = 0.5 * prev + standard_normal(ar_rng);
            v = prev;
        }
        none += detect_period(TimeSeries(ar)).period ? 0 : 1;
    }
    return {hits >= 95 && none >= 90,
            fmt("planted T=4 detected %d/100 (need 95); AR(1) control none %d/100 (need 90)", hits, none)};
}

Verdict metric_oracles() {
    const std::vector<double> y{1, 2, 3};
    const std::vector<double> y_hat{1, 2, 4};
    const auto perfect = evaluate(y, y, MetricVariant::standard);
    const auto m = evaluate(y, y_hat, MetricVariant::standard);
    const bool ok = perfect.r == 1.0 && perfect.wi == 1.0 && perfect.ns == 1.0 &&
                    std::abs(m.r - 0.98198) <= 1e-5 && std::abs(m.wi - 12.0 / 13.0) <= 1e-5 &&
                    std::abs(m.ns - 0.5) <= 1e-5;
    return {ok, fmt("perfect (%.17g, %.17g, %.17g); hand case r=%.6f WI=%.6f NS=%.6f (want 0.98198, 0.923077, 0.5)",
                    perfect.r, perfect.wi, perfect.ns, m.r, m.wi, m.ns)};
}

Verdict determinism() {
    const auto start = Clock::now();
    auto config = profile_config("desk");
    config.master_seed = seed_base;
    const auto a = emit_table(run_experiment(config, RunOptions{1}), TableFormat::csv);
    const auto b = emit_table(run_experiment(config, RunOptions{4}), TableFormat::csv);
    return {a == b, fmt("desk CSV with 1 and 4 workers: %s (%zu bytes); runtime %.1f s",
                        a == b ? "byte-identical" : "DIFFERENT", a.size(), seconds_since(start))};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"desk Table 1 reproduction, Gaussian, H=0.25", [] { return grid_at_least(0.25); }},
        {"desk H=0.75 robustness, Gaussian", [] { return grid_at_least(0.75); }},
        {"fBm covariance", fbm_covariance_check},
        {"generator equivalence", generator_equivalence},
        {"tau relations", tau_oracles},
        {"parameter recovery", parameter_recovery},
        {"copula laws", copula_laws},
        {"conditional h consistency", conditional_h_consistency},
        {"cycle detection", cycle_detection},
        {"metrics", metric_oracles},
        {"determinism", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Verdict v{false, {}};
        try {
            v = criteria[i].second();
        } catch (const std::exception& e) {
            v = {false, std::string("error: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        std::printf("%s criterion %zu (%s): %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    v.detail.c_str());
        std::fflush(stdout);
    }
    for (double h : {0.25, 0.75}) {
        const auto level = grid_at_least(h, ErrorTerm::level);
        std::printf("info: criterion %d grid with level error term: %s\n", h == 0.25 ? 1 : 2, level.detail.c_str());
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
