#include "cyclocopula/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <tuple>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

using nlohmann::json;

void ExperimentConfig::validate() const {
    if (n_list.empty() || H_list.empty() || T_list.empty() || phi_list.empty() || alpha_list.empty() ||
        families.empty()) {
        throw UsageError("experiment config: every parameter list must be nonempty");
    }
    if (replications == 0) {
        throw UsageError("experiment config: replications must be >= 1");
    }
    for (double h : H_list) {
        HurstParameter{h};
    }
    for (std::size_t n : n_list) {
        for (std::size_t t : T_list) {
            if (t == 0 || n % t != 0 || n / t < min_fit_sample) {
                throw UsageError("experiment config: (n=" + std::to_string(n) + ", T=" + std::to_string(t) +
                                 ") needs T | n and n/T >= " + std::to_string(min_fit_sample));
            }
        }
    }
}

ExperimentConfig profile_config(std::string_view profile) {
    ExperimentConfig config;
    if (profile == "desk") {
        config.replications = 100;
        config.n_list = {120, 240};
    } else if (profile != "full") {
        throw UsageError("unknown profile '" + std::string(profile) + "' (expected desk|full)");
    }
    return config;
}

namespace {

ErrorTerm parse_error_term(const std::string& s) {
    if (s == "increment") {
        return ErrorTerm::increment;
    }
    if (s == "level") {
        return ErrorTerm::level;
    }
    throw UsageError("unknown error term '" + s + "' (expected increment|level)");
}

std::string fixed(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string plain(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

} // namespace

ExperimentConfig config_from_json(const json& doc, ExperimentConfig base) {
    try {
        if (doc.contains("n_list")) {
            base.n_list = doc.at("n_list").get<std::vector<std::size_t>>();
        }
        if (doc.contains("H_list")) {
            base.H_list = doc.at("H_list").get<std::vector<double>>();
        }
        if (doc.contains("T_list")) {
            base.T_list = doc.at("T_list").get<std::vector<std::size_t>>();
        }
        if (doc.contains("phi_list")) {
            base.phi_list = doc.at("phi_list").get<std::vector<double>>();
        }
        if (doc.contains("alpha_list")) {
            base.alpha_list = doc.at("alpha_list").get<std::vector<double>>();
        }
        if (doc.contains("families")) {
            base.families.clear();
            for (const auto& f : doc.at("families")) {
                base.families.push_back(parse_family(f.get<std::string>()));
            }
        }
        if (doc.contains("replications")) {
            base.replications = doc.at("replications").get<std::size_t>();
        }
        if (doc.contains("master_seed")) {
            base.master_seed = doc.at("master_seed").get<std::uint64_t>();
        }
        if (doc.contains("metric_variant")) {
            base.metric_variant = parse_metric_variant(doc.at("metric_variant").get<std::string>());
        }
        if (doc.contains("error_term_mode")) {
            base.error_term_mode = parse_error_term(doc.at("error_term_mode").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw UsageError(std::string("experiment config: ") + e.what());
    }
    base.validate();
    return base;
}

json config_to_json(const ExperimentConfig& c) {
    std::vector<std::string> families;
    for (auto f : c.families) {
        families.emplace_back(to_string(f));
    }
    return json{{"n_list", c.n_list},
                {"H_list", c.H_list},
                {"T_list", c.T_list},
                {"phi_list", c.phi_list},
                {"alpha_list", c.alpha_list},
                {"families", families},
                {"replications", c.replications},
                {"master_seed", c.master_seed},
                {"metric_variant", std::string(to_string(c.metric_variant))},
                {"error_term_mode", c.error_term_mode == ErrorTerm::increment ? "increment" : "level"}};
}

bool CellResult::flagged() const noexcept {
    const auto total = successes + failures;
    return total > 0 && static_cast<double>(failures) > 0.05 * static_cast<double>(total);
}

std::vector<CellCoords> enumerate_cells(const ExperimentConfig& config) {
    std::vector<CellCoords> cells;
    for (double h : config.H_list) {
        for (auto family : config.families) {
            for (auto t : config.T_list) {
                for (double phi : config.phi_list) {
                    for (double alpha : config.alpha_list) {
                        for (auto n : config.n_list) {
                            cells.push_back({family, t, phi, alpha, h, n});
                        }
                    }
                }
            }
        }
    }
    return cells;
}

FitMetrics run_replication(const CellCoords& coords, std::uint64_t seed, MetricVariant variant,
                           ErrorTerm error_term, const RunOptions& options) {
    Rng rng(seed);
    ParfbmConfig sim;
    sim.n = coords.n;
    sim.period = coords.period;
    sim.phi = coords.phi;
    sim.alpha = coords.alpha;
    sim.hurst = coords.hurst;
    sim.error_term = error_term;
    const auto [x, y] = simulate_parfbm(sim, rng);
    const auto model = fit_cyclo_model(x, y, coords.period, coords.family, options.nu);
    const auto y_hat = predict_series(model, x.values(), options.regression);
    return evaluate(y.values(), y_hat, variant);
}

namespace {

struct Outcome {
    std::optional<FitMetrics> metrics;
    std::string error;
};

Outcome run_guarded(const CellCoords& coords, std::uint64_t seed, const ExperimentConfig& config,
                    const RunOptions& options) {
    try {
        return {run_replication(coords, seed, config.metric_variant, config.error_term_mode, options), {}};
    } catch (const Error& e) {
        return {std::nullopt, e.what()};
    }
}

CellResult reduce_cell(const CellCoords& coords, std::span<const Outcome> outcomes) {
    std::vector<double> r;
    std::vector<double> wi;
    std::vector<double> ns;
    CellResult result{coords, std::nan(""), std::nan(""), std::nan(""), 0, 0, {}};
    for (const auto& o : outcomes) {
        if (o.metrics) {
            r.push_back(o.metrics->r);
            wi.push_back(o.metrics->wi);
            ns.push_back(o.metrics->ns);
        } else {
            if (result.failures == 0) {
                result.first_failure = o.error;
            }
            ++result.failures;
        }
    }
    result.successes = r.size();
    if (!r.empty()) {
        const auto k = static_cast<double>(r.size());
        result.mean_r = pairwise_sum(r) / k;
        result.mean_wi = pairwise_sum(wi) / k;
        result.mean_ns = pairwise_sum(ns) / k;
    }
    return result;
}

} // namespace

CellResult run_cell(const ExperimentConfig& config, std::size_t cell_ordinal, const RunOptions& options) {
    config.validate();
    const auto cells = enumerate_cells(config);
    const auto& coords = cells.at(cell_ordinal);
    std::vector<Outcome> outcomes;
    outcomes.reserve(config.replications);
    for (std::size_t rep = 0; rep < config.replications; ++rep) {
        outcomes.push_back(run_guarded(coords, derive_seed(config.master_seed, cell_ordinal, rep), config, options));
    }
    return reduce_cell(coords, outcomes);
}

std::vector<CellResult> run_experiment(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    const auto cells = enumerate_cells(config);
    const std::size_t reps = config.replications;
    const std::size_t total = cells.size() * reps;
    std::vector<Outcome> outcomes(total);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t task = next.fetch_add(1); task < total; task = next.fetch_add(1)) {
            const std::size_t cell = task / reps;
            const std::size_t rep = task % reps;
            outcomes[task] = run_guarded(cells[cell], derive_seed(config.master_seed, cell, rep), config, options);
        }
    };
    const std::size_t workers = std::max<std::size_t>(1, options.workers);
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(worker);
        }
    }

    std::vector<CellResult> results;
    results.reserve(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        results.push_back(reduce_cell(cells[c], std::span<const Outcome>(outcomes).subspan(c * reps, reps)));
    }
    return results;
}

TableFormat parse_table_format(std::string_view name) {
    if (name == "csv") {
        return TableFormat::csv;
    }
    if (name == "json") {
        return TableFormat::json;
    }
    if (name == "markdown" || name == "md") {
        return TableFormat::markdown;
    }
    throw UsageError("unknown format '" + std::string(name) + "' (expected csv|json|markdown)");
}

namespace {

using RowKey = std::tuple<double, std::string, std::size_t, double, double>;

std::vector<std::vector<std::string>> table_rows(const std::vector<CellResult>& results,
                                                 std::vector<std::string>& header) {
    std::vector<std::size_t> ns;
    for (const auto& r : results) {
        if (std::find(ns.begin(), ns.end(), r.coords.n) == ns.end()) {
            ns.push_back(r.coords.n);
        }
    }
    std::sort(ns.begin(), ns.end());

    header = {"H", "family", "T", "phi", "alpha"};
    for (auto n : ns) {
        const auto p = "n" + std::to_string(n) + "_";
        for (const char* col : {"r", "wi", "ns", "failures", "flagged"}) {
            header.push_back(p + col);
        }
    }

    std::vector<RowKey> order;
    std::map<RowKey, std::vector<std::string>> rows;
    for (const auto& r : results) {
        const RowKey key{r.coords.hurst, std::string(to_string(r.coords.family)), r.coords.period, r.coords.phi,
                         r.coords.alpha};
        auto it = rows.find(key);
        if (it == rows.end()) {
            std::vector<std::string> row{plain(r.coords.hurst), std::string(to_string(r.coords.family)),
                                         std::to_string(r.coords.period), plain(r.coords.phi),
                                         plain(r.coords.alpha)};
            row.resize(header.size(), "");
            it = rows.emplace(key, std::move(row)).first;
            order.push_back(key);
        }
        const auto col = 5 + 5 * static_cast<std::size_t>(std::find(ns.begin(), ns.end(), r.coords.n) - ns.begin());
        auto& row = it->second;
        row[col] = fixed(r.mean_r);
        row[col + 1] = fixed(r.mean_wi);
        row[col + 2] = fixed(r.mean_ns);
        row[col + 3] = std::to_string(r.failures);
        row[col + 4] = r.flagged() ? "1" : "0";
    }
    std::vector<std::vector<std::string>> out;
    for (const auto& key : order) {
        out.push_back(rows.at(key));
    }
    return out;
}

} // namespace

std::string emit_table(const std::vector<CellResult>& results, TableFormat format) {
    if (results.empty()) {
        throw UsageError("emit_table: no results");
    }
    std::ostringstream out;
    if (format == TableFormat::json) {
        json cells = json::array();
        for (const auto& r : results) {
            const auto num = [](double v) { return std::isnan(v) ? json(nullptr) : json(v); };
            cells.push_back(json{{"family", std::string(to_string(r.coords.family))},
                                 {"T", r.coords.period},
                                 {"phi", r.coords.phi},
                                 {"alpha", r.coords.alpha},
                                 {"H", r.coords.hurst},
                                 {"n", r.coords.n},
                                 {"r", num(r.mean_r)},
                                 {"WI", num(r.mean_wi)},
                                 {"NS", num(r.mean_ns)},
                                 {"successes", r.successes},
                                 {"failures", r.failures},
                                 {"flagged", r.flagged()},
                                 {"first_failure", r.first_failure}});
        }
        out << json{{"cells", cells}}.dump(2) << '\n';
        return out.str();
    }

    std::vector<std::string> header;
    const auto rows = table_rows(results, header);
    if (format == TableFormat::csv) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            out << (i ? "," : "") << header[i];
        }
        out << '\n';
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                out << (i ? "," : "") << row[i];
            }
            out << '\n';
        }
        return out.str();
    }

    const auto line = [&](const std::vector<std::string>& cells) {
        out << "|";
        for (const auto& c : cells) {
            out << ' ' << c << " |";
        }
        out << '\n';
    };
    line(header);
    out << "|";
    for (std::size_t i = 0; i < header.size(); ++i) {
        out << (i < 5 ? " --- |" : " ---: |");
    }
    out << '\n';
    for (const auto& row : rows) {
        line(row);
    }
    return out.str();
}

} // namespace cyclocopula
