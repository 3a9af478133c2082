#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cyclocopula/copula.hpp"
#include "cyclocopula/cyclo_sim.hpp"
#include "cyclocopula/gof.hpp"
#include "cyclocopula/regression.hpp"

namespace cyclocopula {

/// Field names mirror the JSON config file.
struct ExperimentConfig {
    std::vector<std::size_t> n_list{120, 240, 480, 1200};
    std::vector<double> H_list{0.25, 0.75};
    std::vector<std::size_t> T_list{1, 2, 3, 4};
    std::vector<double> phi_list{0.3, 0.7};
    std::vector<double> alpha_list{0.3, 0.7};
    std::vector<CopulaFamily> families{std::begin(all_families), std::end(all_families)};
    std::size_t replications = 1000;
    std::uint64_t master_seed = 20200101;
    MetricVariant metric_variant = MetricVariant::standard;
    ErrorTerm error_term_mode = ErrorTerm::increment;

    /// Throws UsageError on empty lists, zero replications, or an (n, T)
    /// pair with T not dividing n or n/T < 8.
    void validate() const;
};

/// "desk": 100 replications, n in {120, 240}. "full": the defaults above.
ExperimentConfig profile_config(std::string_view profile);

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
nlohmann::json config_to_json(const ExperimentConfig& config);

struct CellCoords {
    CopulaFamily family;
    std::size_t period;
    double phi;
    double alpha;
    double hurst;
    std::size_t n;
};

struct CellResult {
    CellCoords coords;
    double mean_r;
    double mean_wi;
    double mean_ns;
    std::size_t successes;
    std::size_t failures;
    std::string first_failure; ///< message of the lowest-ordinal failed replication

    bool flagged() const noexcept;
};

struct RunOptions {
    std::size_t workers = 1;
    RegressionMode regression = RegressionMode::linear;
    double nu = default_student_nu;
};

/// Every grid cell in canonical order: H, family, T, phi, alpha, n
/// (outermost first). The position in this list is the cell ordinal.
std::vector<CellCoords> enumerate_cells(const ExperimentConfig& config);

/// Simulate, fit, predict at every observed (x_t, t), evaluate.
FitMetrics run_replication(const CellCoords& coords, std::uint64_t seed, MetricVariant variant,
                           ErrorTerm error_term = ErrorTerm::increment, const RunOptions& options = {});

/// Runs one cell on its derived seeds, independent of any other cell.
CellResult run_cell(const ExperimentConfig& config, std::size_t cell_ordinal, const RunOptions& options = {});

std::vector<CellResult> run_experiment(const ExperimentConfig& config, const RunOptions& options = {});

enum class TableFormat { csv, json, markdown };
TableFormat parse_table_format(std::string_view name);

/// Rows keyed (H, family, T, phi, alpha); for each n the columns
/// n<N>_r, n<N>_wi, n<N>_ns, n<N>_failures, n<N>_flagged.
std::string emit_table(const std::vector<CellResult>& results, TableFormat format);

} // namespace cyclocopula
