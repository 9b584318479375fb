#include "yieldcast/pipeline.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <set>
#include <sstream>

namespace yieldcast::pipeline {

namespace {

std::string num(double v) { return std::isnan(v) ? "NA" : csv::format_number(v, 10); }

double json_num(double v) { return std::isfinite(v) ? v : 0.0; }

std::map<int, double> fold_rrmse(const cv::RunResult& r, double crop_mean) {
    std::map<int, double> out;
    for (const auto& f : metrics::per_fold_metrics(r.records, crop_mean)) out[f.year] = f.rrmse;
    return out;
}

const cv::RunResult* find(const std::vector<const cv::RunResult*>& rs, const std::string& id) {
    for (const auto* r : rs) {
        if (r->config_id == id) return r;
    }
    return nullptr;
}

std::string utc_now() {
    const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

std::map<std::string, double> production_weights(const Dataset& ds) {
    std::map<std::string, double> w;
    for (const auto& u : ds.units()) w[u.id] = u.production_weight;
    return w;
}

std::vector<std::pair<int, bayes::Decision>> compare_results(const std::vector<cv::RunResult>& results,
                                                             double crop_mean, const bayes::CompareOptions& options,
                                                             std::map<int, std::string>* best_out) {
    std::map<int, std::vector<const cv::RunResult*>> by_month;
    for (const auto& r : results) by_month[r.forecast_month].push_back(&r);

    std::vector<std::pair<int, bayes::Decision>> out;
    for (const auto& [month, rs] : by_month) {
        std::vector<cv::RunResult> pool;
        for (const auto* r : rs) pool.push_back(*r);
        bool any_ml = false;
        for (const auto* r : rs) any_ml = any_ml || !models::is_benchmark(r->config.algorithm);
        if (!any_ml) continue;
        const auto best_id = cv::select_best_configuration(pool, crop_mean);
        if (best_out) (*best_out)[month] = best_id;
        const auto* best = find(rs, best_id);
        const bayes::FoldSeries best_series{best_id, fold_rrmse(*best, crop_mean)};

        std::vector<bayes::FoldSeries> rivals;
        for (auto b : {models::AlgorithmId::Null, models::AlgorithmId::PeakNdvi}) {
            if (const auto* r = find(rs, std::string(models::to_string(b)))) {
                rivals.push_back({r->config_id, fold_rrmse(*r, crop_mean)});
            }
        }
        for (auto a : models::kMlAlgorithms) {
            if (a == best->config.algorithm) continue;
            std::vector<cv::RunResult> same;
            for (const auto* r : rs) {
                if (r->config.algorithm == a) same.push_back(*r);
            }
            if (same.empty()) continue;
            const auto id = cv::select_best_configuration(same, crop_mean);
            rivals.push_back({id, fold_rrmse(*find(rs, id), crop_mean)});
        }
        for (auto& d : bayes::comparison_matrix(best_series, rivals, options)) out.emplace_back(month, std::move(d));
    }
    return out;
}

RunOutputs run(const Dataset& input, const RunConfig& config) {
    input.require_complete();
    RunOutputs out;
    Dataset ds;
    if (config.season) {
        ds = input.with_season(*config.season);
    } else {
        out.phenology = phenology::detect_season(input);
        ds = input.with_season(out.phenology->window);
    }
    out.season = ds.season();
    const int n_months = out.season.n_months();
    out.months = config.months;
    if (out.months.empty()) {
        for (int k = 1; k <= n_months; ++k) out.months.push_back(k);
    }
    std::sort(out.months.begin(), out.months.end());
    out.months.erase(std::unique(out.months.begin(), out.months.end()), out.months.end());
    for (int k : out.months) {
        if (k < 1 || k > n_months) {
            fail(ErrorCode::InvalidConfig, "forecast month " + std::to_string(k) + " outside 1.." +
                                               std::to_string(n_months));
        }
    }

    std::vector<models::AlgorithmId> ml;
    for (auto a : config.algorithms) {
        if (!models::is_benchmark(a) && std::find(ml.begin(), ml.end(), a) == ml.end()) ml.push_back(a);
    }
    if (ml.empty() || config.sets.empty() || config.mrmr.empty() || config.ohe.empty()) {
        fail(ErrorCode::InvalidConfig, "algorithms, feature sets, mRMR and OHE options must be nonempty");
    }
    auto configs = cv::enumerate_configurations(ml, config.sets, config.mrmr, config.ohe);
    const auto benchmarks =
        cv::enumerate_configurations({models::AlgorithmId::Null, models::AlgorithmId::PeakNdvi}, {}, {}, {});
    configs.insert(configs.end(), benchmarks.begin(), benchmarks.end());

    for (int k : out.months) {
        auto rs = cv::run_hindcast(ds, k, configs, config.options);
        for (auto& r : rs) out.results.push_back(std::move(r));
    }
    const double crop_mean = ds.yields().mean_yield();
    out.decisions = compare_results(out.results, crop_mean, config.compare, &out.best);
    return out;
}

std::string predictions_csv(const std::vector<cv::RunResult>& results) {
    std::ostringstream os;
    os << "crop,forecast_month,config_id,unit_id,year,y_obs,y_pred\n";
    for (const auto& r : results) {
        for (const auto& p : r.records) {
            os << r.crop << ',' << r.forecast_month << ',' << r.config_id << ',' << p.unit << ',' << p.year << ','
               << num(p.y_obs) << ',' << num(p.y_pred) << '\n';
        }
    }
    return os.str();
}

std::vector<cv::RunResult> parse_predictions_csv(std::string_view text) {
    const auto rows = csv::read(text, {"crop", "forecast_month", "config_id", "unit_id", "year", "y_obs", "y_pred"});
    std::vector<cv::RunResult> out;
    std::map<std::tuple<std::string, int, std::string>, std::size_t> index;
    for (const auto& row : rows) {
        const auto& f = row.fields;
        const int month = csv::parse_int(f[1], row.line);
        const auto key = std::make_tuple(f[0], month, f[2]);
        auto it = index.find(key);
        if (it == index.end()) {
            cv::RunResult r;
            r.crop = f[0];
            r.forecast_month = month;
            r.config = cv::ModelConfiguration::parse(f[2]);
            r.config_id = f[2];
            it = index.emplace(key, out.size()).first;
            out.push_back(std::move(r));
        }
        out[it->second].records.push_back(metrics::PredictionRecord{
            f[3], csv::parse_int(f[4], row.line), csv::parse_double(f[5], row.line), csv::parse_double(f[6], row.line)});
    }
    return out;
}

std::string metrics_csv(const std::vector<cv::RunResult>& results, double crop_mean,
                        const std::map<std::string, double>& weights) {
    std::ostringstream os;
    os << "crop,forecast_month,config_id,R2p_foldavg,RMSEp,rRMSEp,MEp,R2p_temporal,R2p_nat,RMSEp_nat,rRMSEp_nat,"
          "MEp_nat,RMSEp_FQ,rRMSEp_FQ,dRMSEp_FQ\n";
    for (const auto& r : results) {
        const auto m = metrics::compute_report(r.records, crop_mean, weights);
        os << r.crop << ',' << r.forecast_month << ',' << r.config_id << ',' << num(m.r2p_foldavg) << ','
           << num(m.rmsep) << ',' << num(m.rrmsep) << ',' << num(m.mep) << ',' << num(m.r2p_temporal) << ','
           << num(m.r2p_nat) << ',' << num(m.rmsep_nat) << ',' << num(m.rrmsep_nat) << ',' << num(m.mep_nat) << ','
           << num(m.rmsep_fq) << ',' << num(m.rrmsep_fq) << ',' << num(m.d_rrmsep_fq) << '\n';
    }
    return os.str();
}

std::string comparison_csv(const std::string& crop, const std::vector<std::pair<int, bayes::Decision>>& decisions) {
    std::ostringstream os;
    os << "crop,forecast_month,model_a,model_b,p_smaller,p_equivalent,p_larger,verdict\n";
    for (const auto& [month, d] : decisions) {
        os << crop << ',' << month << ',' << d.model_a << ',' << d.model_b << ',' << num(d.probabilities.p_smaller)
           << ',' << num(d.probabilities.p_equivalent) << ',' << num(d.probabilities.p_larger) << ','
           << bayes::to_string(d.verdict) << '\n';
    }
    return os.str();
}

std::string best_models_csv(const RunOutputs& out, double crop_mean) {
    std::ostringstream os;
    os << "crop,forecast_month,month,config_id,rRMSEp,RMSEp,null_rRMSEp,peak_ndvi_rRMSEp\n";
    for (const auto& [month, id] : out.best) {
        double best = NAN, best_rmse = NAN, null_v = NAN, peak_v = NAN;
        std::string crop;
        for (const auto& r : out.results) {
            if (r.forecast_month != month) continue;
            crop = r.crop;
            if (r.config_id != id && !models::is_benchmark(r.config.algorithm)) continue;
            const auto p = metrics::provincial_metrics(r.records, crop_mean);
            if (r.config_id == id) {
                best = p.rrmse;
                best_rmse = p.rmse;
            } else if (r.config.algorithm == models::AlgorithmId::Null) {
                null_v = p.rrmse;
            } else {
                peak_v = p.rrmse;
            }
        }
        os << crop << ',' << month << ',' << cv::forecast_month_name(out.season, month) << ',' << id << ','
           << num(best) << ',' << num(best_rmse) << ',' << num(null_v) << ',' << num(peak_v) << '\n';
    }
    return os.str();
}

std::string manifest_json(const RunOutputs& out, const RunConfig& config, const std::string& created_utc) {
    nlohmann::ordered_json j;
    j["created_utc"] = created_utc;
    j["crop"] = out.results.empty() ? std::string() : out.results.front().crop;
    j["seed"] = config.options.seed;
    j["workers"] = config.options.workers;
    j["scaler"] = config.options.scaler == cv::Scaler::ZScore ? "zscore" : "none";
    j["gbr_grid"] = config.options.gbr_grid == models::GbrGrid::Compact ? "compact" : "explicit";
    j["season"] = {{"sos", out.season.sos},
                   {"eos", out.season.eos},
                   {"sos_sd", out.season.sos_sd},
                   {"eos_sd", out.season.eos_sd},
                   {"source", out.phenology ? "phenology" : "override"}};
    j["months"] = out.months;

    std::set<int> years;
    for (const auto& r : out.results) {
        for (const auto& p : r.records) years.insert(p.year);
    }
    const auto n = years.size();
    j["fold_plan"] = {{"years", std::vector<int>(years.begin(), years.end())},
                      {"outer_folds", n},
                      {"inner_folds_per_outer", n > 0 ? n - 1 : 0},
                      {"inner_fit_years", n > 1 ? n - 2 : 0}};

    nlohmann::ordered_json grids;
    for (auto a : config.algorithms) {
        if (!models::is_benchmark(a)) grids[std::string(models::to_string(a))] = cv::grid_for(a, config.options).size();
    }
    j["grid_sizes"] = grids;
    j["expanded_configuration_count"] = cv::expanded_configuration_count(config.sets, config.mrmr, config.ohe);
    j["comparison"] = {{"rope_delta", config.compare.delta},
                       {"confidence", config.compare.confidence},
                       {"rho", config.compare.rho ? nlohmann::ordered_json(*config.compare.rho)
                                                  : nlohmann::ordered_json("1/n")},
                       {"statistic", "per-fold rRMSE_p, rival minus best"}};

    nlohmann::ordered_json runs = nlohmann::ordered_json::array();
    for (const auto& r : out.results) {
        nlohmann::ordered_json run;
        run["forecast_month"] = r.forecast_month;
        run["config_id"] = r.config_id;
        run["grid_size"] = r.grid_size;
        run["inner_fits"] = r.inner_fits;
        run["refits"] = r.refits;
        run["wall_seconds"] = json_num(r.wall_seconds);
        nlohmann::ordered_json folds = nlohmann::ordered_json::array();
        for (const auto& f : r.folds) {
            nlohmann::ordered_json fj;
            fj["test_year"] = f.test_year;
            if (!models::is_benchmark(r.config.algorithm)) {
                fj["hyperparameters"] = f.hyperparameters.to_string();
                if (f.mrmr_fraction) fj["mrmr_fraction"] = *f.mrmr_fraction;
                fj["selected_features"] = f.selected_features;
                fj["converged"] = f.converged;
                if (!f.skipped.empty()) fj["skipped"] = f.skipped;
            }
            folds.push_back(fj);
        }
        run["folds"] = folds;
        runs.push_back(run);
    }
    j["runs"] = runs;
    return j.dump(2) + "\n";
}

std::string summary_md(const RunOutputs& out, double crop_mean, const std::map<std::string, double>& weights) {
    std::ostringstream os;
    const std::string crop = out.results.empty() ? std::string() : out.results.front().crop;
    os << "# Hindcast summary: " << crop << "\n\n";
    os << "Season window: dekad " << out.season.sos << " to dekad " << out.season.eos
       << (out.phenology ? " (detected)" : " (override)") << ".\n\n";
    os << "| Forecast | Best configuration | rRMSE_p % | Null rRMSE_p % | Peak NDVI rRMSE_p % | National R2_p |\n";
    os << "|---|---|---|---|---|---|\n";
    for (const auto& [month, id] : out.best) {
        double best = NAN, null_v = NAN, peak_v = NAN, nat = NAN;
        for (const auto& r : out.results) {
            if (r.forecast_month != month) continue;
            if (r.config_id == id) {
                const auto m = metrics::compute_report(r.records, crop_mean, weights);
                best = m.rrmsep;
                nat = m.r2p_nat;
            } else if (r.config.algorithm == models::AlgorithmId::Null) {
                null_v = metrics::provincial_metrics(r.records, crop_mean).rrmse;
            } else if (r.config.algorithm == models::AlgorithmId::PeakNdvi) {
                peak_v = metrics::provincial_metrics(r.records, crop_mean).rrmse;
            }
        }
        os << "| " << cv::forecast_month_name(out.season, month) << " | " << id << " | "
           << csv::format_number(best, 4) << " | " << csv::format_number(null_v, 4) << " | "
           << csv::format_number(peak_v, 4) << " | " << csv::format_number(nat, 3) << " |\n";
    }
    if (!out.decisions.empty()) {
        os << "\n## Bayesian comparison against the best configuration\n\n";
        os << "| Forecast | Rival | P(rival better) | P(equivalent) | P(rival worse) | Verdict |\n";
        os << "|---|---|---|---|---|---|\n";
        for (const auto& [month, d] : out.decisions) {
            os << "| " << cv::forecast_month_name(out.season, month) << " | " << d.model_a << " | "
               << csv::format_number(d.probabilities.p_smaller, 3) << " | "
               << csv::format_number(d.probabilities.p_equivalent, 3) << " | "
               << csv::format_number(d.probabilities.p_larger, 3) << " | " << bayes::to_string(d.verdict) << " |\n";
        }
    }
    return os.str();
}

RunOutputs cmd_run(const RunConfig& config) {
    const auto ts = csv::read_file(config.timeseries_path);
    const auto ys = csv::read_file(config.yields_path);
    const auto us = csv::read_file(config.units_path);
    const auto ds = parse_dataset(ts, ys, us, config.season.value_or(SeasonWindow{}), config.crop);
    auto out = run(ds, config);

    const double crop_mean = ds.yields().mean_yield();
    const auto weights = production_weights(ds);
    std::filesystem::create_directories(config.out_dir);
    const std::filesystem::path dir(config.out_dir);
    csv::write_file((dir / "predictions.csv").string(), predictions_csv(out.results));
    csv::write_file((dir / "metrics.csv").string(), metrics_csv(out.results, crop_mean, weights));
    csv::write_file((dir / "comparison.csv").string(), comparison_csv(ds.yields().crop, out.decisions));
    csv::write_file((dir / "best_models.csv").string(), best_models_csv(out, crop_mean));
    csv::write_file((dir / "run_manifest.json").string(), manifest_json(out, config, utc_now()));
    csv::write_file((dir / "summary.md").string(), summary_md(out, crop_mean, weights));
    if (out.phenology) csv::write_file((dir / "phenology.csv").string(), phenology::phenology_csv(out.phenology->records));
    return out;
}

}  // namespace yieldcast::pipeline
