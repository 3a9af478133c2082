#pragma once

#include <span>
#include <string_view>

namespace cyclocopula {

/// `standard` is the classical Willmott index / Nash-Sutcliffe efficiency;
/// `paper_printed` transcribes the alternative published forms (WI without
/// the leading "1 -" and centred on the mean prediction; NS normalised by
/// the prediction variance).
enum class MetricVariant { standard, paper_printed };

MetricVariant parse_metric_variant(std::string_view name);
std::string_view to_string(MetricVariant variant);

struct FitMetrics {
    double r;
    double wi;
    double ns;
    MetricVariant variant;
};

double pearson_r(std::span<const double> y, std::span<const double> y_hat);
double willmott_index(std::span<const double> y, std::span<const double> y_hat,
                      MetricVariant variant = MetricVariant::standard);
double nash_sutcliffe(std::span<const double> y, std::span<const double> y_hat,
                      MetricVariant variant = MetricVariant::standard);

FitMetrics evaluate(std::span<const double> y, std::span<const double> y_hat,
                    MetricVariant variant = MetricVariant::standard);

/// Pairwise (cascade) summation; the result depends only on element order.
double pairwise_sum(std::span<const double> values);

} // namespace cyclocopula
