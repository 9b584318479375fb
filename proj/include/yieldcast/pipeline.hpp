#pragma once

#include "yieldcast/bayes.hpp"
#include "yieldcast/cv_engine.hpp"
#include "yieldcast/metrics.hpp"
#include "yieldcast/phenology.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace yieldcast::pipeline {

struct RunConfig {
    std::string timeseries_path;
    std::string yields_path;
    std::string units_path;
    std::string crop;
    std::vector<int> months;  // empty: every forecast month of the season
    std::vector<models::AlgorithmId> algorithms{std::begin(models::kMlAlgorithms), std::end(models::kMlAlgorithms)};
    std::vector<features::FeatureSetId> sets{std::begin(features::kAllFeatureSets),
                                             std::end(features::kAllFeatureSets)};
    std::vector<bool> mrmr{false, true};
    std::vector<bool> ohe{false, true};
    std::optional<SeasonWindow> season;  // skips phenology detection when set
    cv::RunOptions options;
    bayes::CompareOptions compare;
    std::string out_dir = "out";
};

// Hindcasts of one dataset: every ML configuration plus both benchmarks,
// for each forecast month.
struct RunOutputs {
    SeasonWindow season;
    std::optional<phenology::DetectResult> phenology;
    std::vector<int> months;
    std::vector<cv::RunResult> results;  // month-major, configuration order
    std::map<int, std::string> best;     // forecast month -> config_id
    std::vector<std::pair<int, bayes::Decision>> decisions;
};

RunOutputs run(const Dataset& ds, const RunConfig& config);

// Artifact renderers. Numbers use 10 significant digits.
std::string predictions_csv(const std::vector<cv::RunResult>& results);
std::string metrics_csv(const std::vector<cv::RunResult>& results, double crop_mean,
                        const std::map<std::string, double>& weights);
std::string comparison_csv(const std::string& crop, const std::vector<std::pair<int, bayes::Decision>>& decisions);
std::string best_models_csv(const RunOutputs& out, double crop_mean);
std::string manifest_json(const RunOutputs& out, const RunConfig& config, const std::string& created_utc);
std::string summary_md(const RunOutputs& out, double crop_mean, const std::map<std::string, double>& weights);

// Rebuilds results (records only) from a predictions.csv text.
std::vector<cv::RunResult> parse_predictions_csv(std::string_view text);

// Best ML configuration per month against the benchmarks and the best
// configuration of every other algorithm present.
std::vector<std::pair<int, bayes::Decision>> compare_results(const std::vector<cv::RunResult>& results,
                                                             double crop_mean, const bayes::CompareOptions& options,
                                                             std::map<int, std::string>* best = nullptr);

// Loads the dataset, runs, and writes predictions.csv, metrics.csv,
// comparison.csv, best_models.csv, run_manifest.json and summary.md.
RunOutputs cmd_run(const RunConfig& config);

std::map<std::string, double> production_weights(const Dataset& ds);

}  // namespace yieldcast::pipeline
