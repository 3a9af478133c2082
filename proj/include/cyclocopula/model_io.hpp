#pragma once

#include <json.hpp>

#include "cyclocopula/copula.hpp"
#include "cyclocopula/regression.hpp"

namespace cyclocopula {

/// {family, theta, nu, tau_hat, m}; nu is null except for the t copula.
nlohmann::json copula_summary_json(const FittedCopula& fitted);

/// {family, T, phases: [{phase, b0, b1, theta, nu, tau_hat, x_sample, y_sample}]}.
nlohmann::json model_to_json(const CycloModel& model);

/// Rebuilds a model from model_to_json output. The conditional-mean curves
/// are recomputed from the stored marginal samples. Throws DataError on a
/// malformed document.
CycloModel model_from_json(const nlohmann::json& doc);

} // namespace cyclocopula
