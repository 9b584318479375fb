#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace yieldcast::metrics {

struct PredictionRecord {
    std::string unit;
    int year = 0;
    double y_obs = 0.0;
    double y_pred = 0.0;
};

struct FoldMetrics {
    int year = 0;
    std::size_t n = 0;
    double rmse = 0.0;          // t/ha
    double rrmse = 0.0;         // % of the crop mean yield
    double me = 0.0;            // mean of (pred - obs)
    std::optional<double> r2;   // missing when the fold's observations have no variance
};

// Metrics of one held-out year across units. `crop_mean` is the mean of all
// observed yields of the crop.
FoldMetrics fold_metrics(std::span<const PredictionRecord> records, double crop_mean);

// One FoldMetrics per year, sorted by year.
std::vector<FoldMetrics> per_fold_metrics(std::span<const PredictionRecord> records, double crop_mean);

struct ProvincialMetrics {
    double r2_foldavg = 0.0;  // NaN when every fold is degenerate
    double rmse = 0.0;
    double rrmse = 0.0;
    double me = 0.0;
    double r2_temporal = 0.0;  // mean over units of the across-years R^2
    std::vector<FoldMetrics> folds;
};

ProvincialMetrics provincial_metrics(std::span<const PredictionRecord> records, double crop_mean);

struct NationalPoint {
    int year = 0;
    double obs = 0.0;
    double pred = 0.0;
};

// Production-weighted mean over the units reporting each year. Throws
// MissingWeight when a unit has no weight or a year's weights sum to zero.
std::vector<NationalPoint> national_series(std::span<const PredictionRecord> records,
                                           const std::map<std::string, double>& weights);

struct SeriesMetrics {
    double r2 = 0.0;
    double rmse = 0.0;
    double rrmse = 0.0;
    double me = 0.0;
};

SeriesMetrics series_metrics(std::span<const NationalPoint> series, double crop_mean);

// Linear-interpolation percentile on sorted data: h = (n - 1) p + 1 (1-based).
double percentile(std::vector<double> values, double p);

struct LowYieldMetrics {
    std::vector<int> years;  // first-quartile years, observed national yield <= P25
    double rmse = 0.0;
    double rrmse = 0.0;
    double d_rrmse = 0.0;  // rrmse(first quartile) - rrmse(all years)
};

// Throws TooFewYears below 4 years.
LowYieldMetrics low_yield_metrics(std::span<const NationalPoint> series, double crop_mean);

// One metrics.csv row.
struct MetricsReport {
    double r2p_foldavg = 0.0;
    double rmsep = 0.0;
    double rrmsep = 0.0;
    double mep = 0.0;
    double r2p_temporal = 0.0;
    double r2p_nat = 0.0;
    double rmsep_nat = 0.0;
    double rrmsep_nat = 0.0;
    double mep_nat = 0.0;
    double rmsep_fq = 0.0;
    double rrmsep_fq = 0.0;
    double d_rrmsep_fq = 0.0;
};

MetricsReport compute_report(std::span<const PredictionRecord> records, double crop_mean,
                             const std::map<std::string, double>& weights);

}  // namespace yieldcast::metrics
