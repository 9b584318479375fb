#include "yieldcast/metrics.hpp"

#include "yieldcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace yieldcast::metrics {

namespace {

struct Sums {
    double rmse = 0.0;
    double me = 0.0;
    std::optional<double> r2;
};

template <class Obs, class Pred>
Sums basic(std::size_t n, Obs obs, Pred pred) {
    Sums s;
    double se = 0.0;
    double e = 0.0;
    double mean_obs = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_obs += obs(i);
    mean_obs /= static_cast<double>(n);
    double ss_tot = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = pred(i) - obs(i);
        se += d * d;
        e += d;
        ss_tot += (obs(i) - mean_obs) * (obs(i) - mean_obs);
    }
    s.rmse = std::sqrt(se / static_cast<double>(n));
    s.me = e / static_cast<double>(n);
    if (n >= 2 && ss_tot > 0.0) s.r2 = 1.0 - se / ss_tot;
    return s;
}

}  // namespace

FoldMetrics fold_metrics(std::span<const PredictionRecord> records, double crop_mean) {
    if (records.empty()) fail(ErrorCode::DegenerateFold, "empty fold");
    const auto s = basic(
        records.size(), [&](std::size_t i) { return records[i].y_obs; }, [&](std::size_t i) { return records[i].y_pred; });
    FoldMetrics f;
    f.year = records.front().year;
    f.n = records.size();
    f.rmse = s.rmse;
    f.rrmse = 100.0 * s.rmse / crop_mean;
    f.me = s.me;
    f.r2 = s.r2;
    return f;
}

std::vector<FoldMetrics> per_fold_metrics(std::span<const PredictionRecord> records, double crop_mean) {
    std::map<int, std::vector<PredictionRecord>> by_year;
    for (const auto& r : records) by_year[r.year].push_back(r);
    std::vector<FoldMetrics> out;
    for (const auto& [year, recs] : by_year) out.push_back(fold_metrics(recs, crop_mean));
    return out;
}

ProvincialMetrics provincial_metrics(std::span<const PredictionRecord> records, double crop_mean) {
    ProvincialMetrics p;
    p.folds = per_fold_metrics(records, crop_mean);
    double r2_sum = 0.0;
    int r2_n = 0;
    for (const auto& f : p.folds) {
        p.rmse += f.rmse;
        p.rrmse += f.rrmse;
        p.me += f.me;
        if (f.r2) {
            r2_sum += *f.r2;
            ++r2_n;
        }
    }
    const double k = static_cast<double>(p.folds.size());
    p.rmse /= k;
    p.rrmse /= k;
    p.me /= k;
    p.r2_foldavg = r2_n > 0 ? r2_sum / r2_n : std::numeric_limits<double>::quiet_NaN();

    std::map<std::string, std::vector<PredictionRecord>> by_unit;
    for (const auto& r : records) by_unit[r.unit].push_back(r);
    double t_sum = 0.0;
    int t_n = 0;
    for (const auto& [unit, recs] : by_unit) {
        const auto s = basic(
            recs.size(), [&](std::size_t i) { return recs[i].y_obs; }, [&](std::size_t i) { return recs[i].y_pred; });
        if (s.r2) {
            t_sum += *s.r2;
            ++t_n;
        }
    }
    p.r2_temporal = t_n > 0 ? t_sum / t_n : std::numeric_limits<double>::quiet_NaN();
    return p;
}

std::vector<NationalPoint> national_series(std::span<const PredictionRecord> records,
                                           const std::map<std::string, double>& weights) {
    struct Acc {
        double w = 0.0;
        double obs = 0.0;
        double pred = 0.0;
    };
    std::map<int, Acc> by_year;
    for (const auto& r : records) {
        const auto it = weights.find(r.unit);
        if (it == weights.end()) fail(ErrorCode::MissingWeight, "no production weight for unit '" + r.unit + "'");
        auto& a = by_year[r.year];
        a.w += it->second;
        a.obs += it->second * r.y_obs;
        a.pred += it->second * r.y_pred;
    }
    std::vector<NationalPoint> out;
    for (const auto& [year, a] : by_year) {
        if (!(a.w > 0.0)) {
            fail(ErrorCode::MissingWeight, "production weights sum to zero in " + std::to_string(year));
        }
        out.push_back(NationalPoint{year, a.obs / a.w, a.pred / a.w});
    }
    return out;
}

SeriesMetrics series_metrics(std::span<const NationalPoint> series, double crop_mean) {
    if (series.empty()) fail(ErrorCode::DegenerateFold, "empty national series");
    const auto s = basic(
        series.size(), [&](std::size_t i) { return series[i].obs; }, [&](std::size_t i) { return series[i].pred; });
    SeriesMetrics m;
    m.r2 = s.r2.value_or(std::numeric_limits<double>::quiet_NaN());
    m.rmse = s.rmse;
    m.rrmse = 100.0 * s.rmse / crop_mean;
    m.me = s.me;
    return m;
}

double percentile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * p + 1.0;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo >= values.size()) return values.back();
    return values[lo - 1] + (h - static_cast<double>(lo)) * (values[lo] - values[lo - 1]);
}

LowYieldMetrics low_yield_metrics(std::span<const NationalPoint> series, double crop_mean) {
    if (series.size() < 4) {
        fail(ErrorCode::TooFewYears, "first-quartile analysis needs at least 4 years, got " +
                                         std::to_string(series.size()));
    }
    std::vector<double> obs;
    for (const auto& p : series) obs.push_back(p.obs);
    const double p25 = percentile(obs, 0.25);
    std::vector<NationalPoint> low;
    LowYieldMetrics out;
    for (const auto& p : series) {
        if (p.obs <= p25) {
            low.push_back(p);
            out.years.push_back(p.year);
        }
    }
    const auto fq = series_metrics(low, crop_mean);
    const auto all = series_metrics(series, crop_mean);
    out.rmse = fq.rmse;
    out.rrmse = fq.rrmse;
    out.d_rrmse = fq.rrmse - all.rrmse;
    return out;
}

MetricsReport compute_report(std::span<const PredictionRecord> records, double crop_mean,
                             const std::map<std::string, double>& weights) {
    MetricsReport r;
    const auto prov = provincial_metrics(records, crop_mean);
    r.r2p_foldavg = prov.r2_foldavg;
    r.rmsep = prov.rmse;
    r.rrmsep = prov.rrmse;
    r.mep = prov.me;
    r.r2p_temporal = prov.r2_temporal;
    const auto nat = national_series(records, weights);
    const auto nm = series_metrics(nat, crop_mean);
    r.r2p_nat = nm.r2;
    r.rmsep_nat = nm.rmse;
    r.rrmsep_nat = nm.rrmse;
    r.mep_nat = nm.me;
    if (nat.size() >= 4) {
        const auto low = low_yield_metrics(nat, crop_mean);
        r.rmsep_fq = low.rmse;
        r.rrmsep_fq = low.rrmse;
        r.d_rrmsep_fq = low.d_rrmse;
    } else {
        r.rmsep_fq = r.rrmsep_fq = r.d_rrmsep_fq = std::numeric_limits<double>::quiet_NaN();
    }
    return r;
}

}  // namespace yieldcast::metrics
