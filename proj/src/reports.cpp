#include "yieldcast/reports.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/cv_engine.hpp"
#include "yieldcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace yieldcast::reports {

namespace {

double cell(const std::string& s, std::size_t line) {
    if (s == "NA") return std::numeric_limits<double>::quiet_NaN();
    return csv::parse_double(s, line);
}

std::string num(double v) { return std::isnan(v) ? "NA" : csv::format_number(v, 10); }

}  // namespace

std::vector<MetricsRow> parse_metrics_csv(std::string_view text) {
    const auto rows = csv::read(text, {"crop", "forecast_month", "config_id", "R2p_foldavg", "RMSEp", "rRMSEp",
                                       "MEp", "R2p_temporal", "R2p_nat", "RMSEp_nat", "rRMSEp_nat", "MEp_nat",
                                       "RMSEp_FQ", "rRMSEp_FQ", "dRMSEp_FQ"});
    std::vector<MetricsRow> out;
    for (const auto& row : rows) {
        const auto& f = row.fields;
        MetricsRow r;
        r.crop = f[0];
        r.forecast_month = csv::parse_int(f[1], row.line);
        r.config_id = f[2];
        double* dst[] = {&r.m.r2p_foldavg, &r.m.rmsep,   &r.m.rrmsep,     &r.m.mep,       &r.m.r2p_temporal,
                         &r.m.r2p_nat,     &r.m.rmsep_nat, &r.m.rrmsep_nat, &r.m.mep_nat, &r.m.rmsep_fq,
                         &r.m.rrmsep_fq,   &r.m.d_rrmsep_fq};
        for (std::size_t i = 0; i < std::size(dst); ++i) *dst[i] = cell(f[3 + i], row.line);
        out.push_back(std::move(r));
    }
    return out;
}

double percentile_rank(double value, std::span<const double> config_values) {
    if (config_values.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::size_t better = 0;
    for (double v : config_values) better += v < value ? 1 : 0;
    return 100.0 * static_cast<double>(better) / static_cast<double>(config_values.size());
}

std::vector<PercentileRow> percentile_ranks(const std::vector<MetricsRow>& rows) {
    std::map<std::pair<std::string, int>, std::vector<const MetricsRow*>> groups;
    for (const auto& r : rows) groups[{r.crop, r.forecast_month}].push_back(&r);
    std::vector<PercentileRow> out;
    for (const auto& [key, rs] : groups) {
        std::vector<double> values;
        std::vector<const MetricsRow*> bench;
        for (const auto* r : rs) {
            const auto c = cv::ModelConfiguration::parse(r->config_id);
            if (models::is_benchmark(c.algorithm)) {
                bench.push_back(r);
            } else {
                values.push_back(r->m.rrmsep);
            }
        }
        if (values.size() < 2) continue;
        for (const auto* b : bench) {
            out.push_back(PercentileRow{key.first, key.second, b->config_id, b->m.rrmsep,
                                        percentile_rank(b->m.rrmsep, values), values.size()});
        }
    }
    return out;
}

std::string percentile_csv(const std::vector<PercentileRow>& rows) {
    std::ostringstream os;
    os << "crop,forecast_month,benchmark,rRMSEp,percentile_rank,n_configs\n";
    for (const auto& r : rows) {
        os << r.crop << ',' << r.forecast_month << ',' << r.benchmark << ',' << num(r.rrmse) << ',' << num(r.rank)
           << ',' << r.n_configs << '\n';
    }
    return os.str();
}

BoxSummary box_summary(std::vector<double> values) {
    BoxSummary b;
    b.n = values.size();
    if (values.empty()) return b;
    std::sort(values.begin(), values.end());
    b.q1 = metrics::percentile(values, 0.25);
    b.median = metrics::percentile(values, 0.5);
    b.q3 = metrics::percentile(values, 0.75);
    const double iqr = b.q3 - b.q1;
    b.whisker_low = b.q1;
    b.whisker_high = b.q3;
    for (double v : values) {
        if (v >= b.q1 - 1.5 * iqr) b.whisker_low = std::min(b.whisker_low, v);
        if (v <= b.q3 + 1.5 * iqr) b.whisker_high = std::max(b.whisker_high, v);
        b.mean += v;
    }
    b.mean /= static_cast<double>(values.size());
    return b;
}

std::vector<EffectRow> effects(const std::vector<MetricsRow>& rows, EffectOption option, EffectGroup group) {
    struct Key {
        std::string crop;
        int month;
        std::string twin;  // config_id with the studied option off
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::pair<const MetricsRow*, const MetricsRow*>> pairs;  // (off, on)
    for (const auto& r : rows) {
        auto c = cv::ModelConfiguration::parse(r.config_id);
        if (models::is_benchmark(c.algorithm)) continue;
        bool& flag = option == EffectOption::Ohe ? c.ohe : c.mrmr;
        const bool on = flag;
        flag = false;
        auto& slot = pairs[Key{r.crop, r.forecast_month, c.config_id()}];
        (on ? slot.second : slot.first) = &r;
    }

    std::map<std::tuple<std::string, int, std::string>, std::vector<double>> deltas;
    for (const auto& [key, pr] : pairs) {
        if (!pr.first || !pr.second) continue;
        const auto c = cv::ModelConfiguration::parse(key.twin);
        const std::string g = group == EffectGroup::Algorithm ? std::string(models::to_string(c.algorithm))
                                                              : std::string(features::to_string(c.feature_set));
        deltas[{key.crop, key.month, g}].push_back(pr.first->m.rrmsep - pr.second->m.rrmsep);
    }
    if (deltas.empty()) {
        fail(ErrorCode::UnpairedConfigs, std::string("no configuration pairs differ only in ") +
                                             (option == EffectOption::Ohe ? "OHE" : "mRMR"));
    }
    std::vector<EffectRow> out;
    for (const auto& [key, d] : deltas) {
        out.push_back(EffectRow{std::get<0>(key), std::get<1>(key), std::get<2>(key), box_summary(d)});
    }
    return out;
}

std::string effects_csv(const std::vector<EffectRow>& rows, EffectOption option) {
    std::ostringstream os;
    os << "crop,forecast_month,option,group,n,q1,median,q3,whisker_low,whisker_high,mean\n";
    for (const auto& r : rows) {
        const auto& b = r.deltas;
        os << r.crop << ',' << r.forecast_month << ',' << (option == EffectOption::Ohe ? "ohe" : "mrmr") << ','
           << r.group << ',' << b.n << ',' << num(b.q1) << ',' << num(b.median) << ',' << num(b.q3) << ','
           << num(b.whisker_low) << ',' << num(b.whisker_high) << ',' << num(b.mean) << '\n';
    }
    return os.str();
}

}  // namespace yieldcast::reports
