#pragma once

#include "yieldcast/timeseries.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yieldcast::features {

// Monthly predictors in Table order; each is bound to one aggregation operator.
enum class MonthlyVar { ND, ND_max, Rad, Rain, T, T_min, T_max };
inline constexpr MonthlyVar kAllMonthlyVars[] = {MonthlyVar::ND,   MonthlyVar::ND_max, MonthlyVar::Rad,
                                                 MonthlyVar::Rain, MonthlyVar::T,      MonthlyVar::T_min,
                                                 MonthlyVar::T_max};

std::string_view to_string(MonthlyVar v);

struct MonthlyFeature {
    MonthlyVar variable = MonthlyVar::ND;
    int month = 1;  // season-axis month, 1 = first month of the season

    auto operator<=>(const MonthlyFeature&) const = default;
};

enum class FeatureSetId { RSMet, RS, Met, RSMetMinus, RSMinus, MetMinus };
inline constexpr FeatureSetId kAllFeatureSets[] = {FeatureSetId::RSMet,      FeatureSetId::RS,
                                                   FeatureSetId::Met,        FeatureSetId::RSMetMinus,
                                                   FeatureSetId::RSMinus,    FeatureSetId::MetMinus};

std::string_view to_string(FeatureSetId id);
std::optional<FeatureSetId> parse_feature_set(std::string_view name);
const std::vector<MonthlyVar>& members(FeatureSetId id);

// One value per (variable, month) for months 1..n_months. Throws CoverageGap.
std::map<MonthlyFeature, double> aggregate_monthly(const Dataset& ds, std::string_view unit, int harvest_year,
                                                   int n_months);

enum class ColumnKind { Continuous, OneHot };

struct RowKey {
    std::string unit;
    int year = 0;

    auto operator<=>(const RowKey&) const = default;
};

struct FeatureMatrix {
    std::vector<RowKey> rows;          // sorted by (unit, year)
    std::vector<std::string> columns;  // continuous block first, then one-hot
    std::vector<ColumnKind> kinds;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;

    Eigen::Index n_continuous() const;
    Eigen::Index n_onehot() const { return static_cast<Eigen::Index>(columns.size()) - n_continuous(); }
};

// Forecast month index k in 1..n_months uses season months 1..k.
FeatureMatrix build_feature_matrix(const Dataset& ds, FeatureSetId set, int forecast_month, bool ohe);

// Seasonal NDVI maximum over the dekads of months 1..k, aligned with `rows`.
Eigen::VectorXd peak_ndvi(const Dataset& ds, const std::vector<RowKey>& rows, int forecast_month);

std::string features_csv(const FeatureMatrix& fm);

struct ScalerParams {
    Eigen::VectorXd mean;
    Eigen::VectorXd sd;  // population sd
};

// Fit on the first `n_continuous` columns of the given rows. Throws
// DegenerateColumn when a column's sd is below 1e-12.
ScalerParams zscore_fit(const Eigen::MatrixXd& x, Eigen::Index n_continuous);
// Scales the leading continuous block; trailing columns pass through.
Eigen::MatrixXd zscore_apply(const ScalerParams& p, const Eigen::MatrixXd& x);
Eigen::MatrixXd zscore_inverse(const ScalerParams& p, const Eigen::MatrixXd& x);

// |Pearson r|; 0 when either side has no variance.
double abs_pearson(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b);

// Greedy MID selection: relevance |r(f, y)| minus mean |r(f, g)| over the
// selected set; ties go to the lower column index. k is clamped to [1, n].
std::vector<Eigen::Index> mrmr_select(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::Index k);

inline constexpr int kMrmrFractions[] = {5, 10, 25, 50, 75, 100};

// Round-half-up of percent * n / 100 with a floor of 1.
int fraction_to_count(int percent, int n_columns);

}  // namespace yieldcast::features
