#include "cyclocopula/model_io.hpp"

#include <algorithm>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

using nlohmann::json;

namespace {

json nu_json(const CopulaParams& p) {
    return p.nu ? json(*p.nu) : json(nullptr);
}

} // namespace

json copula_summary_json(const FittedCopula& fitted) {
    return json{{"family", std::string(to_string(fitted.family))},
                {"theta", fitted.params.theta},
                {"nu", nu_json(fitted.params)},
                {"tau_hat", fitted.tau_hat},
                {"m", fitted.x_marginal.size()}};
}

json model_to_json(const CycloModel& model) {
    json phases = json::array();
    for (const auto& p : model.phases) {
        const auto xs = p.fitted.x_marginal.sorted();
        const auto ys = p.fitted.y_marginal.sorted();
        phases.push_back(json{{"phase", p.phase},
                              {"b0", p.b0},
                              {"b1", p.b1},
                              {"theta", p.fitted.params.theta},
                              {"nu", nu_json(p.fitted.params)},
                              {"tau_hat", p.fitted.tau_hat},
                              {"x_sample", std::vector<double>(xs.begin(), xs.end())},
                              {"y_sample", std::vector<double>(ys.begin(), ys.end())}});
    }
    return json{{"family", std::string(to_string(model.family))}, {"T", model.period}, {"phases", phases}};
}

CycloModel model_from_json(const json& doc) {
    try {
        CycloModel model{};
        model.family = parse_family(doc.at("family").get<std::string>());
        model.period = doc.at("T").get<std::size_t>();
        const auto& phases = doc.at("phases");
        if (model.period == 0 || phases.size() != model.period) {
            throw DataError("model json: expected T phase records");
        }
        for (std::size_t i = 0; i < phases.size(); ++i) {
            const auto& p = phases[i];
            const auto xs = p.at("x_sample").get<std::vector<double>>();
            const auto ys = p.at("y_sample").get<std::vector<double>>();
            CopulaParams params{p.at("theta").get<double>(), std::nullopt};
            if (!p.at("nu").is_null()) {
                params.nu = p.at("nu").get<double>();
            }
            validate(model.family, params);
            FittedCopula fitted{model.family, params, p.at("tau_hat").get<double>(), EmpiricalMarginal(xs),
                                EmpiricalMarginal(ys)};
            std::vector<double> grid(fitted.x_marginal.sorted().begin(), fitted.x_marginal.sorted().end());
            grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
            auto curve = conditional_mean_curve(fitted, grid);
            model.phases.push_back(PhaseModel{p.at("phase").get<std::size_t>(), p.at("b0").get<double>(),
                                              p.at("b1").get<double>(), std::move(fitted), std::move(curve)});
            if (model.phases.back().phase != i + 1) {
                throw DataError("model json: phases must be listed in order 1..T");
            }
        }
        return model;
    } catch (const json::exception& e) {
        throw DataError(std::string("model json: ") + e.what());
    } catch (const UsageError& e) {
        throw DataError(std::string("model json: ") + e.what());
    }
}

} // namespace cyclocopula
