#pragma once

#include "yieldcast/metrics.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yieldcast::reports {

struct MetricsRow {
    std::string crop;
    int forecast_month = 0;
    std::string config_id;
    metrics::MetricsReport m;
};

// Reads metrics.csv; "NA" cells become NaN.
std::vector<MetricsRow> parse_metrics_csv(std::string_view text);

// 100 * (# configs strictly better) / (# configs).
double percentile_rank(double value, std::span<const double> config_values);

struct PercentileRow {
    std::string crop;
    int forecast_month = 0;
    std::string benchmark;
    double rrmse = 0.0;
    double rank = 0.0;
    std::size_t n_configs = 0;
};

// Per (crop, forecast month) rank of each benchmark's rRMSE_p among the ML
// configurations. Groups with fewer than 2 configurations are skipped.
std::vector<PercentileRow> percentile_ranks(const std::vector<MetricsRow>& rows);
std::string percentile_csv(const std::vector<PercentileRow>& rows);

enum class EffectOption { Ohe, Mrmr };
enum class EffectGroup { Algorithm, FeatureSet };

struct BoxSummary {
    std::size_t n = 0;
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;   // smallest value >= q1 - 1.5 IQR
    double whisker_high = 0.0;  // largest value <= q3 + 1.5 IQR
    double mean = 0.0;
};

BoxSummary box_summary(std::vector<double> values);

struct EffectRow {
    std::string crop;
    int forecast_month = 0;
    std::string group;
    BoxSummary deltas;  // rRMSE_p(option off) - rRMSE_p(option on)
};

// Pairs configurations that differ only in the studied option. Throws
// UnpairedConfigs when no pair exists.
std::vector<EffectRow> effects(const std::vector<MetricsRow>& rows, EffectOption option, EffectGroup group);
std::string effects_csv(const std::vector<EffectRow>& rows, EffectOption option);

}  // namespace yieldcast::reports
