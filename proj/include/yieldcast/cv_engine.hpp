#pragma once

#include "yieldcast/features.hpp"
#include "yieldcast/metrics.hpp"
#include "yieldcast/models.hpp"
#include "yieldcast/timeseries.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace yieldcast::cv {

using features::FeatureSetId;
using models::AlgorithmId;

struct ModelConfiguration {
    AlgorithmId algorithm = AlgorithmId::LASSO;
    FeatureSetId feature_set = FeatureSetId::RSMet;
    bool mrmr = false;
    bool ohe = false;

    // e.g. "LASSO/RS&Met-/mrmr/ohe", "SVR_rbf/RS/all/noohe"; benchmarks are
    // their bare names.
    std::string config_id() const;
    static ModelConfiguration parse(const std::string& config_id);

    bool operator==(const ModelConfiguration&) const = default;
};

// Algorithm-major cartesian product. Benchmarks appear once each, ignoring
// the feature options.
std::vector<ModelConfiguration> enumerate_configurations(const std::vector<AlgorithmId>& algorithms,
                                                         const std::vector<FeatureSetId>& sets,
                                                         const std::vector<bool>& mrmr_options,
                                                         const std::vector<bool>& ohe_options);

// Feature combinations per algorithm when every mRMR fraction counts as its
// own option (6 sets x 7 x 2 = 84 with the defaults).
int expanded_configuration_count(const std::vector<FeatureSetId>& sets, const std::vector<bool>& mrmr_options,
                                 const std::vector<bool>& ohe_options);

// Calendar label of forecast index k: the month after the last month used.
std::string forecast_month_name(const SeasonWindow& season, int k);

struct InnerFold {
    int val_year = 0;
    std::vector<int> fit_years;
};

struct OuterFold {
    int test_year = 0;
    std::vector<int> train_years;
    std::vector<InnerFold> inner;
};

struct FoldPlan {
    std::vector<int> years;
    std::vector<OuterFold> outer;
};

// Throws TooFewYears below 3 years.
FoldPlan plan_nested_loyo(std::vector<int> years);

enum class FitStage { Inner, Refit, Benchmark };

// Every fit reports the years of the rows it trained on and predicted.
struct FitEvent {
    std::string config_id;
    FitStage stage = FitStage::Inner;
    int test_year = 0;
    std::vector<int> fit_years;
    std::vector<int> predict_years;
};

enum class Scaler { ZScore, None };

struct RunOptions {
    std::uint64_t seed = 42;
    int workers = 1;
    Scaler scaler = Scaler::ZScore;
    models::GbrGrid gbr_grid = models::GbrGrid::Explicit;
    models::ModelDefaults defaults = models::builtin_defaults();
    // Replaces the search grid of an algorithm, e.g. to shrink test runs.
    std::map<AlgorithmId, std::vector<models::Assignment>> grid_override;
    // Called under a lock for every fit.
    std::function<void(const FitEvent&)> observer;
};

const std::vector<models::Assignment>& grid_for(AlgorithmId a, const RunOptions& options);

struct InnerSelection {
    models::Assignment hyperparameters;
    std::size_t grid_index = 0;
    std::optional<int> mrmr_fraction;  // percent
    double rmse = 0.0;                 // pooled over all inner predictions
    std::size_t fits = 0;
    std::vector<std::string> skipped;  // "grid_index[/fraction]: reason"
};

// Grid search over leave-one-year-out folds of `train_years`. Throws
// AllGridPointsFailed when no candidate completes every fold.
InnerSelection run_inner_selection(const ModelConfiguration& config, const features::FeatureMatrix& fm,
                                   const std::vector<int>& train_years, std::uint64_t seed,
                                   const RunOptions& options, int outer_test_year = 0);

struct OuterFoldResult {
    int test_year = 0;
    models::Assignment hyperparameters;
    std::optional<int> mrmr_fraction;
    std::vector<std::string> selected_features;
    std::vector<std::string> skipped;
    bool converged = true;
};

struct RunResult {
    std::string crop;
    int forecast_month = 0;
    ModelConfiguration config;
    std::string config_id;
    std::vector<metrics::PredictionRecord> records;  // sorted by (unit, year)
    std::vector<OuterFoldResult> folds;              // sorted by test year
    std::uint64_t seed = 0;
    std::size_t grid_size = 0;
    std::size_t inner_fits = 0;
    std::size_t refits = 0;
    double wall_seconds = 0.0;
};

// Nested leave-one-year-out hindcast of every configuration at forecast
// index k. Benchmarks use the simple leave-one-year-out loop. Results come
// back in configuration order and do not depend on the worker count.
std::vector<RunResult> run_hindcast(const Dataset& ds, int forecast_month,
                                    const std::vector<ModelConfiguration>& configs, const RunOptions& options);

// Argmin of the fold-averaged provincial rRMSE_p, ties by config_id.
// Benchmarks compete only when `admit_benchmarks` is set.
std::string select_best_configuration(const std::vector<RunResult>& results, double crop_mean,
                                      bool admit_benchmarks = false);

struct FinalModel {
    ModelConfiguration config;
    int forecast_month = 0;
    models::Assignment hyperparameters;
    std::optional<int> mrmr_fraction;
    std::vector<std::string> selected_features;
    features::ScalerParams scaler;
    models::TrainedModel model;
    std::vector<int> years;
};

// Hyperparameters chosen by leave-one-year-out over all years, then one fit
// on everything. No accuracy is claimed for the artifact.
FinalModel fit_final(const Dataset& ds, int forecast_month, const ModelConfiguration& config,
                     const RunOptions& options);

}  // namespace yieldcast::cv
