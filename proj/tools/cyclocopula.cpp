#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyclocopula/copula.hpp"
#include "cyclocopula/csv.hpp"
#include "cyclocopula/cyclo_sim.hpp"
#include "cyclocopula/error.hpp"
#include "cyclocopula/experiment.hpp"
#include "cyclocopula/gof.hpp"
#include "cyclocopula/model_io.hpp"
#include "cyclocopula/regression.hpp"
#include "cyclocopula/spectral.hpp"

using namespace cyclocopula;
using nlohmann::json;

namespace {

class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty() && path != "-") {
            file_.open(path);
            if (!file_) {
                throw UsageError("cannot open '" + path + "' for writing");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

CsvTable load_csv(const std::string& path) {
    if (path.empty() || path == "-") {
        return read_csv(std::cin);
    }
    return read_csv_file(path);
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError("'" + path + "': " + e.what());
    }
}

ErrorTerm parse_error_term(const std::string& s) {
    if (s == "increment") {
        return ErrorTerm::increment;
    }
    if (s == "level") {
        return ErrorTerm::level;
    }
    throw UsageError("unknown error term '" + s + "' (expected increment|level)");
}

std::vector<double> column_copy(const CsvTable& table, const std::string& name) {
    auto c = table.column(name);
    return {c.begin(), c.end()};
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cyclostationary copula regression toolkit"};
    app.require_subcommand(1);

    std::string out_path;
    std::uint64_t seed = 20200101;

    auto* simulate = app.add_subcommand("simulate", "Simulate a PARFBM(1) pair; CSV t,x,y");
    ParfbmConfig sim;
    std::string sim_error_term = "increment";
    std::string sim_generator = "circulant";
    simulate->add_option("--n", sim.n, "Series length")->capture_default_str();
    simulate->add_option("--period,-T", sim.period, "Period T")->capture_default_str();
    simulate->add_option("--phi", sim.phi, "Periodic AR amplitude")->capture_default_str();
    simulate->add_option("--alpha", sim.alpha, "Coupling of y to x")->capture_default_str();
    simulate->add_option("--hurst,-H", sim.hurst, "Hurst exponent")->capture_default_str();
    simulate->add_option("--noise-sd", sim.noise_sd, "Standard deviation of W")->capture_default_str();
    simulate->add_option("--error-term", sim_error_term, "increment|level")->capture_default_str();
    simulate->add_option("--generator", sim_generator, "circulant|cholesky")->capture_default_str();
    simulate->add_option("--seed", seed, "RNG seed")->capture_default_str();
    simulate->add_option("--out,-o", out_path, "Output path (default stdout)");

    auto* detect = app.add_subcommand("detect-cycle", "Estimate the period from spectral coherence");
    std::string in_path;
    std::string column = "x";
    DetectOptions detect_options;
    std::string map_out;
    detect->add_option("input", in_path, "CSV file (default stdin)");
    detect->add_option("--column", column, "Column to analyse")->capture_default_str();
    detect->add_option("--span,-M", detect_options.span, "Smoothing span (0: floor(sqrt(n)))")
        ->capture_default_str();
    detect->add_option("--max-period", detect_options.max_period, "Largest candidate (0: min(12, n/4))")
        ->capture_default_str();
    detect->add_option("--threshold", detect_options.threshold, "Minimum score to report a cycle (default 6/sqrt(nM))");
    detect->add_option("--map-out", map_out, "Write the coherence map as CSV p,q,coherence");
    detect->add_option("--out,-o", out_path, "Output path (default stdout)");

    auto* fit = app.add_subcommand("fit", "Fit a copula to x,y (or one per phase with --period)");
    std::string family_name = "gaussian";
    double nu = default_student_nu;
    std::optional<std::size_t> fit_period;
    std::string model_out;
    fit->add_option("input", in_path, "CSV file with x and y columns (default stdin)");
    fit->add_option("--family", family_name, "gaussian|t|clayton|gumbel|frank")->capture_default_str();
    fit->add_option("--nu", nu, "Degrees of freedom of the t copula")->capture_default_str();
    fit->add_option("--period,-T", fit_period, "Fit a periodic model with this period");
    fit->add_option("--model-out", model_out, "Write the periodic model JSON here");
    fit->add_option("--out,-o", out_path, "Output path (default stdout)");

    auto* pred = app.add_subcommand("predict", "Predict y from a model and a t,x CSV");
    std::string model_path;
    std::string regression_name = "linear";
    pred->add_option("--model", model_path, "Model JSON from fit --model-out")->required();
    pred->add_option("input", in_path, "CSV file with t and x columns (default stdin)");
    pred->add_option("--regression", regression_name, "linear|curve")->capture_default_str();
    pred->add_option("--out,-o", out_path, "Output path (default stdout)");

    auto* eval = app.add_subcommand("evaluate", "Goodness-of-fit metrics of y_hat against y");
    std::string variant_name = "standard";
    std::string y_col = "y";
    std::string yhat_col = "y_hat";
    eval->add_option("input", in_path, "CSV file (default stdin)");
    eval->add_option("--y", y_col, "Observed column")->capture_default_str();
    eval->add_option("--y-hat", yhat_col, "Predicted column")->capture_default_str();
    eval->add_option("--variant", variant_name, "standard|paper-printed")->capture_default_str();
    eval->add_option("--out,-o", out_path, "Output path (default stdout)");

    auto* exp = app.add_subcommand("experiment", "Monte-Carlo grid experiment");
    std::string config_path;
    std::string profile = "desk";
    std::optional<std::uint64_t> exp_seed;
    std::string format_name = "csv";
    std::optional<std::string> exp_variant;
    std::optional<std::string> exp_error_term;
    std::optional<std::size_t> replications;
    RunOptions run_options;
    run_options.workers = std::max(1u, std::thread::hardware_concurrency());
    exp->add_option("--config", config_path, "JSON config overriding the profile");
    exp->add_option("--profile", profile, "desk|full")->capture_default_str();
    exp->add_option("--seed", exp_seed, "Master seed");
    exp->add_option("--replications", replications, "Replications per cell");
    exp->add_option("--format", format_name, "csv|json|markdown")->capture_default_str();
    exp->add_option("--variant", exp_variant, "standard|paper-printed");
    exp->add_option("--error-term", exp_error_term, "increment|level");
    exp->add_option("--regression", regression_name, "linear|curve")->capture_default_str();
    exp->add_option("--workers", run_options.workers, "Worker threads")->capture_default_str();
    exp->add_option("--out,-o", out_path, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed()) {
            sim.error_term = parse_error_term(sim_error_term);
            if (sim_generator == "circulant") {
                sim.generator = FbmGenerator::circulant_embedding;
            } else if (sim_generator == "cholesky") {
                sim.generator = FbmGenerator::exact_cholesky;
            } else {
                throw UsageError("unknown generator '" + sim_generator + "' (expected circulant|cholesky)");
            }
            sim.validate();
            for (const auto& w : sim.warnings()) {
                std::cerr << "warning: " << w << '\n';
            }
            Rng rng(seed);
            const auto [x, y] = simulate_parfbm(sim, rng);
            std::vector<double> t(sim.n);
            for (std::size_t i = 0; i < sim.n; ++i) {
                t[i] = static_cast<double>(i + 1);
            }
            Output out(out_path);
            write_csv(out.stream(), {"t", "x", "y"}, {t, x.values(), y.values()});
        } else if (detect->parsed()) {
            const auto table = load_csv(in_path);
            const TimeSeries series(column_copy(table, column));
            const auto estimate = detect_period(series, detect_options);
            json scores = json::array();
            for (const auto& s : estimate.line_scores) {
                scores.push_back(json::array({s.period, s.score}));
            }
            json doc{{"estimated_T", estimate.period ? json(*estimate.period) : json(nullptr)},
                     {"line_scores", scores},
                     {"skipped", estimate.skipped}};
            Output out(out_path);
            out.stream() << doc.dump(2) << '\n';
            if (!map_out.empty()) {
                const std::size_t span =
                    detect_options.span ? detect_options.span
                                        : static_cast<std::size_t>(std::sqrt(static_cast<double>(series.size())));
                const auto map = coherence_map(series, span);
                const std::size_t n = map.size();
                std::vector<double> p;
                std::vector<double> q;
                std::vector<double> g;
                p.reserve(n * n);
                q.reserve(n * n);
                g.reserve(n * n);
                for (std::size_t i = 1; i <= n; ++i) {
                    for (std::size_t j = 1; j <= n; ++j) {
                        p.push_back(static_cast<double>(i));
                        q.push_back(static_cast<double>(j));
                        g.push_back(map(i, j));
                    }
                }
                Output map_file(map_out);
                write_csv(map_file.stream(), {"p", "q", "coherence"}, {p, q, g});
            }
        } else if (fit->parsed()) {
            const auto family = parse_family(family_name);
            const auto table = load_csv(in_path);
            const auto x = table.column("x");
            const auto y = table.column("y");
            Output out(out_path);
            if (fit_period) {
                const auto model = fit_cyclo_model(x, y, *fit_period, family, nu);
                const auto doc = model_to_json(model);
                if (!model_out.empty()) {
                    Output model_file(model_out);
                    model_file.stream() << doc.dump(2) << '\n';
                }
                json summary{{"family", std::string(to_string(family))}, {"T", *fit_period}};
                json phases = json::array();
                for (const auto& p : model.phases) {
                    auto s = copula_summary_json(p.fitted);
                    s["phase"] = p.phase;
                    s["b0"] = p.b0;
                    s["b1"] = p.b1;
                    phases.push_back(s);
                }
                summary["phases"] = phases;
                out.stream() << summary.dump(2) << '\n';
            } else {
                if (!model_out.empty()) {
                    const auto model = fit_cyclo_model(x, y, 1, family, nu);
                    Output model_file(model_out);
                    model_file.stream() << model_to_json(model).dump(2) << '\n';
                }
                out.stream() << copula_summary_json(fit_copula(x, y, family, nu)).dump(2) << '\n';
            }
        } else if (pred->parsed()) {
            const auto mode = parse_regression_mode(regression_name);
            const auto model = model_from_json(load_json(model_path));
            const auto table = load_csv(in_path);
            const auto t = table.column("t");
            const auto x = table.column("x");
            std::vector<double> y_hat(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) {
                const double ti = t[i];
                if (ti < 1 || ti != std::floor(ti)) {
                    throw DataError("row " + std::to_string(i + 1) + ": t must be a positive integer");
                }
                y_hat[i] = predict(model, x[i], static_cast<long>(ti), mode);
            }
            Output out(out_path);
            write_csv(out.stream(), {"t", "x", "y_hat"}, {t, x, y_hat});
        } else if (eval->parsed()) {
            const auto variant = parse_metric_variant(variant_name);
            const auto table = load_csv(in_path);
            const auto m = evaluate(table.column(y_col), table.column(yhat_col), variant);
            json doc{{"r", m.r}, {"WI", m.wi}, {"NS", m.ns}, {"variant", std::string(to_string(m.variant))}};
            Output out(out_path);
            out.stream() << doc.dump(2) << '\n';
        } else if (exp->parsed()) {
            auto config = profile_config(profile);
            if (!config_path.empty()) {
                config = config_from_json(load_json(config_path), config);
            }
            if (exp_seed) {
                config.master_seed = *exp_seed;
            }
            if (replications) {
                config.replications = *replications;
            }
            if (exp_variant) {
                config.metric_variant = parse_metric_variant(*exp_variant);
            }
            if (exp_error_term) {
                config.error_term_mode = parse_error_term(*exp_error_term);
            }
            config.validate();
            run_options.regression = parse_regression_mode(regression_name);
            const auto format = parse_table_format(format_name);
            const auto results = run_experiment(config, run_options);
            Output out(out_path);
            out.stream() << emit_table(results, format);
            std::size_t flagged = 0;
            for (const auto& r : results) {
                flagged += r.flagged() ? 1 : 0;
            }
            if (flagged > 0) {
                std::cerr << "warning: " << flagged << " cell(s) with more than 5% failed replications\n";
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
