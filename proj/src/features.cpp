#include "yieldcast/features.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace yieldcast::features {

namespace {

struct Binding {
    Variable source;
    enum { Avg, Max, Min, Sum } op;
};

Binding binding(MonthlyVar v) {
    switch (v) {
    case MonthlyVar::ND: return {Variable::NDVI, Binding::Avg};
    case MonthlyVar::ND_max: return {Variable::NDVI, Binding::Max};
    case MonthlyVar::Rad: return {Variable::Rad, Binding::Sum};
    case MonthlyVar::Rain: return {Variable::Rain, Binding::Sum};
    case MonthlyVar::T: return {Variable::T, Binding::Avg};
    case MonthlyVar::T_min: return {Variable::Tmin, Binding::Min};
    case MonthlyVar::T_max: return {Variable::Tmax, Binding::Max};
    }
    return {Variable::NDVI, Binding::Avg};
}

double reduce_values(decltype(Binding::op) op, const std::vector<double>& v) {
    switch (op) {
    case Binding::Avg: {
        double s = 0.0;
        for (double x : v) s += x;
        return s / static_cast<double>(v.size());
    }
    case Binding::Max: return *std::max_element(v.begin(), v.end());
    case Binding::Min: return *std::min_element(v.begin(), v.end());
    case Binding::Sum: {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    }
    return 0.0;
}

void check_forecast_month(const Dataset& ds, int forecast_month) {
    if (forecast_month < 1 || forecast_month > ds.season().n_months()) {
        fail(ErrorCode::InvalidConfig, "forecast month " + std::to_string(forecast_month) + " outside 1.." +
                                           std::to_string(ds.season().n_months()));
    }
}

}  // namespace

std::string_view to_string(MonthlyVar v) {
    switch (v) {
    case MonthlyVar::ND: return "ND";
    case MonthlyVar::ND_max: return "ND_max";
    case MonthlyVar::Rad: return "Rad";
    case MonthlyVar::Rain: return "Rain";
    case MonthlyVar::T: return "T";
    case MonthlyVar::T_min: return "T_min";
    case MonthlyVar::T_max: return "T_max";
    }
    return "?";
}

std::string_view to_string(FeatureSetId id) {
    switch (id) {
    case FeatureSetId::RSMet: return "RS&Met";
    case FeatureSetId::RS: return "RS";
    case FeatureSetId::Met: return "Met";
    case FeatureSetId::RSMetMinus: return "RS&Met-";
    case FeatureSetId::RSMinus: return "RS-";
    case FeatureSetId::MetMinus: return "Met-";
    }
    return "?";
}

std::optional<FeatureSetId> parse_feature_set(std::string_view name) {
    for (auto id : kAllFeatureSets) {
        if (to_string(id) == name) return id;
    }
    return std::nullopt;
}

const std::vector<MonthlyVar>& members(FeatureSetId id) {
    using V = MonthlyVar;
    static const std::vector<V> rs_met{V::ND, V::ND_max, V::Rad, V::Rain, V::T, V::T_min, V::T_max};
    static const std::vector<V> rs{V::ND, V::ND_max};
    static const std::vector<V> met{V::Rad, V::Rain, V::T, V::T_min, V::T_max};
    static const std::vector<V> rs_met_minus{V::ND, V::Rain, V::T};
    static const std::vector<V> rs_minus{V::ND};
    static const std::vector<V> met_minus{V::Rad, V::Rain, V::T};
    switch (id) {
    case FeatureSetId::RSMet: return rs_met;
    case FeatureSetId::RS: return rs;
    case FeatureSetId::Met: return met;
    case FeatureSetId::RSMetMinus: return rs_met_minus;
    case FeatureSetId::RSMinus: return rs_minus;
    case FeatureSetId::MetMinus: return met_minus;
    }
    return rs_met;
}

std::map<MonthlyFeature, double> aggregate_monthly(const Dataset& ds, std::string_view unit, int harvest_year,
                                                   int n_months) {
    std::map<MonthlyFeature, double> out;
    const auto& season = ds.season();
    std::map<Variable, std::vector<std::vector<double>>> per_month;
    for (auto v : kAllMonthlyVars) {
        const auto [source, op] = binding(v);
        auto& months = per_month[source];
        if (months.empty()) {
            const auto& series = ds.series_for(unit, source);
            for (int k = 1; k <= n_months; ++k) {
                const auto first = season.month_first_dekad(harvest_year, k);
                months.push_back(slice_range(series, first, DekadIndex::from_ordinal(first.ordinal() + 2)));
            }
        }
        for (int k = 1; k <= n_months; ++k) {
            out[MonthlyFeature{v, k}] = reduce_values(op, months[static_cast<std::size_t>(k - 1)]);
        }
    }
    return out;
}

Eigen::Index FeatureMatrix::n_continuous() const {
    return static_cast<Eigen::Index>(std::count(kinds.begin(), kinds.end(), ColumnKind::Continuous));
}

FeatureMatrix build_feature_matrix(const Dataset& ds, FeatureSetId set, int forecast_month, bool ohe) {
    check_forecast_month(ds, forecast_month);
    const auto& season = ds.season();
    const auto& vars = members(set);
    const auto units = ds.yield_units();

    FeatureMatrix fm;
    for (auto v : vars) {
        for (int k = 1; k <= forecast_month; ++k) {
            fm.columns.push_back(std::string(to_string(v)) + "_" + month_abbrev(season.calendar_month(k)));
            fm.kinds.push_back(ColumnKind::Continuous);
        }
    }
    if (ohe) {
        for (const auto& u : units) {
            fm.columns.push_back("OHE_" + u);
            fm.kinds.push_back(ColumnKind::OneHot);
        }
    }

    const auto& records = ds.yields().records;  // sorted by (unit, year)
    const auto n_rows = static_cast<Eigen::Index>(records.size());
    fm.x.setZero(n_rows, static_cast<Eigen::Index>(fm.columns.size()));
    fm.y.resize(n_rows);
    for (Eigen::Index i = 0; i < n_rows; ++i) {
        const auto& r = records[static_cast<std::size_t>(i)];
        fm.rows.push_back(RowKey{r.unit, r.year});
        fm.y[i] = r.yield;
        const auto agg = aggregate_monthly(ds, r.unit, r.year, forecast_month);
        Eigen::Index col = 0;
        for (auto v : vars) {
            for (int k = 1; k <= forecast_month; ++k) fm.x(i, col++) = agg.at(MonthlyFeature{v, k});
        }
        if (ohe) {
            const auto pos = std::lower_bound(units.begin(), units.end(), r.unit) - units.begin();
            fm.x(i, col + pos) = 1.0;
        }
    }
    return fm;
}

Eigen::VectorXd peak_ndvi(const Dataset& ds, const std::vector<RowKey>& rows, int forecast_month) {
    check_forecast_month(ds, forecast_month);
    const auto& season = ds.season();
    Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto first = season.month_first_dekad(rows[i].year, 1);
        const auto last = DekadIndex::from_ordinal(season.month_first_dekad(rows[i].year, forecast_month).ordinal() + 2);
        const auto values = slice_range(ds.series_for(rows[i].unit, Variable::NDVI), first, last);
        out[static_cast<Eigen::Index>(i)] = *std::max_element(values.begin(), values.end());
    }
    return out;
}

std::string features_csv(const FeatureMatrix& fm) {
    std::ostringstream os;
    os << "unit_id,year";
    for (const auto& c : fm.columns) os << ',' << c;
    os << ",yield\n";
    for (Eigen::Index i = 0; i < fm.x.rows(); ++i) {
        const auto& r = fm.rows[static_cast<std::size_t>(i)];
        os << r.unit << ',' << r.year;
        for (Eigen::Index j = 0; j < fm.x.cols(); ++j) os << ',' << csv::format_number(fm.x(i, j), 10);
        os << ',' << csv::format_number(fm.y[i], 10) << '\n';
    }
    return os.str();
}

ScalerParams zscore_fit(const Eigen::MatrixXd& x, Eigen::Index n_continuous) {
    if (x.rows() < 2) fail(ErrorCode::DegenerateColumn, "z-score fit needs at least 2 rows");
    ScalerParams p;
    p.mean.resize(n_continuous);
    p.sd.resize(n_continuous);
    const double n = static_cast<double>(x.rows());
    for (Eigen::Index j = 0; j < n_continuous; ++j) {
        const double mean = x.col(j).sum() / n;
        const double var = (x.col(j).array() - mean).square().sum() / n;
        const double sd = std::sqrt(var);
        if (!(sd >= 1e-12)) {
            fail(ErrorCode::DegenerateColumn, "column " + std::to_string(j) + " is constant on the training rows");
        }
        p.mean[j] = mean;
        p.sd[j] = sd;
    }
    return p;
}

Eigen::MatrixXd zscore_apply(const ScalerParams& p, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < p.mean.size(); ++j) {
        out.col(j) = (x.col(j).array() - p.mean[j]) / p.sd[j];
    }
    return out;
}

Eigen::MatrixXd zscore_inverse(const ScalerParams& p, const Eigen::MatrixXd& x) {
    Eigen::MatrixXd out = x;
    for (Eigen::Index j = 0; j < p.mean.size(); ++j) {
        out.col(j) = x.col(j).array() * p.sd[j] + p.mean[j];
    }
    return out;
}

double abs_pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b) {
    const double n = static_cast<double>(a.size());
    const Eigen::ArrayXd da = a.array() - a.sum() / n;
    const Eigen::ArrayXd db = b.array() - b.sum() / n;
    const double saa = da.square().sum();
    const double sbb = db.square().sum();
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return std::min(1.0, std::abs((da * db).sum()) / std::sqrt(saa * sbb));
}

std::vector<Eigen::Index> mrmr_select(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::Index k) {
    const Eigen::Index n = x.cols();
    std::vector<Eigen::Index> selected;
    if (n == 0) return selected;
    k = std::clamp<Eigen::Index>(k, 1, n);

    std::vector<double> relevance(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j) relevance[static_cast<std::size_t>(j)] = abs_pearson(x.col(j), y);
    std::vector<double> redundancy(static_cast<std::size_t>(n), 0.0);
    std::vector<bool> taken(static_cast<std::size_t>(n), false);

    while (static_cast<Eigen::Index>(selected.size()) < k) {
        Eigen::Index best = -1;
        double best_score = -std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto uj = static_cast<std::size_t>(j);
            if (taken[uj]) continue;
            const double score = selected.empty()
                                     ? relevance[uj]
                                     : relevance[uj] - redundancy[uj] / static_cast<double>(selected.size());
            if (score > best_score) {
                best_score = score;
                best = j;
            }
        }
        selected.push_back(best);
        taken[static_cast<std::size_t>(best)] = true;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!taken[static_cast<std::size_t>(j)]) {
                redundancy[static_cast<std::size_t>(j)] += abs_pearson(x.col(j), x.col(best));
            }
        }
    }
    return selected;
}

int fraction_to_count(int percent, int n_columns) {
    return std::max(1, (percent * n_columns + 50) / 100);
}

}  // namespace yieldcast::features
