#include "cyclocopula/gof.hpp"

#include <cmath>
#include <string>

#include "cyclocopula/error.hpp"

namespace cyclocopula {

namespace {

void check_pair(std::span<const double> y, std::span<const double> y_hat, const char* metric) {
    if (y.size() != y_hat.size()) {
        throw UsageError(std::string(metric) + ": observed and predicted lengths differ");
    }
    if (y.size() < 2) {
        throw DataError(std::string(metric) + ": need at least 2 observations");
    }
}

double mean(std::span<const double> v) {
    return pairwise_sum(v) / static_cast<double>(v.size());
}

} // namespace

MetricVariant parse_metric_variant(std::string_view name) {
    if (name == "standard") {
        return MetricVariant::standard;
    }
    if (name == "paper-printed" || name == "paper_printed") {
        return MetricVariant::paper_printed;
    }
    throw UsageError("unknown metric variant '" + std::string(name) + "' (expected standard|paper-printed)");
}

std::string_view to_string(MetricVariant variant) {
    return variant == MetricVariant::standard ? "standard" : "paper-printed";
}

double pairwise_sum(std::span<const double> values) {
    if (values.size() <= 8) {
        double s = 0.0;
        for (double v : values) {
            s += v;
        }
        return s;
    }
    const std::size_t half = values.size() / 2;
    return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

double pearson_r(std::span<const double> y, std::span<const double> y_hat) {
    check_pair(y, y_hat, "pearson_r");
    const double my = mean(y);
    const double mh = mean(y_hat);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double dy = y[i] - my;
        const double dh = y_hat[i] - mh;
        sxy += dy * dh;
        sxx += dy * dy;
        syy += dh * dh;
    }
    if (sxx == 0.0) {
        throw DataError("pearson_r: observed series is constant");
    }
    if (syy == 0.0) {
        throw DataError("pearson_r: predicted series is constant");
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return std::fmax(-1.0, std::fmin(1.0, r));
}

double willmott_index(std::span<const double> y, std::span<const double> y_hat, MetricVariant variant) {
    check_pair(y, y_hat, "willmott_index");
    const double my = mean(y);
    const double centre = variant == MetricVariant::standard ? my : mean(y_hat);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - y_hat[i];
        const double d = std::abs(y[i] - my) + std::abs(y_hat[i] - centre);
        num += e * e;
        den += d * d;
    }
    if (den == 0.0) {
        throw DataError("willmott_index: zero denominator");
    }
    return variant == MetricVariant::standard ? std::fmax(0.0, 1.0 - num / den) : num / den;
}

double nash_sutcliffe(std::span<const double> y, std::span<const double> y_hat, MetricVariant variant) {
    check_pair(y, y_hat, "nash_sutcliffe");
    const auto reference = variant == MetricVariant::standard ? y : y_hat;
    const double mr = mean(reference);
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double e = y[i] - y_hat[i];
        const double d = reference[i] - mr;
        num += e * e;
        den += d * d;
    }
    if (den == 0.0) {
        throw DataError(variant == MetricVariant::standard ? "nash_sutcliffe: observed series has zero variance"
                                                           : "nash_sutcliffe: predicted series has zero variance");
    }
    return 1.0 - num / den;
}

FitMetrics evaluate(std::span<const double> y, std::span<const double> y_hat, MetricVariant variant) {
    const auto tagged = [](const char* metric, auto&& fn) {
        try {
            return fn();
        } catch (const DataError& e) {
            throw DataError(std::string(metric) + ": " + e.what());
        }
    };
    FitMetrics m{};
    m.variant = variant;
    m.r = tagged("r", [&] { return pearson_r(y, y_hat); });
    m.wi = tagged("WI", [&] { return willmott_index(y, y_hat, variant); });
    m.ns = tagged("NS", [&] { return nash_sutcliffe(y, y_hat, variant); });
    return m;
}

} // namespace cyclocopula
