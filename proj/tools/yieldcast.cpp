#include "yieldcast/csv.hpp"
#include "yieldcast/cv_engine.hpp"
#include "yieldcast/error.hpp"
#include "yieldcast/features.hpp"
#include "yieldcast/model_defaults.hpp"
#include "yieldcast/phenology.hpp"
#include "yieldcast/pipeline.hpp"
#include "yieldcast/reports.hpp"
#include "yieldcast/synthgen.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <thread>

using namespace yieldcast;

namespace {

struct DataArgs {
    std::string timeseries = "timeseries.csv";
    std::string yields = "yields.csv";
    std::string units = "units.csv";
    std::string crop;
    std::vector<int> season;  // {sos, eos}
};

void add_data_options(CLI::App* cmd, DataArgs& d) {
    cmd->add_option("--timeseries", d.timeseries, "Dekadal series CSV")->capture_default_str();
    cmd->add_option("--yields", d.yields, "Yield statistics CSV")->capture_default_str();
    cmd->add_option("--units", d.units, "Administrative units CSV")->capture_default_str();
    cmd->add_option("--crop", d.crop, "Crop to analyse (required when the yields file has several)");
    cmd->add_option("--season", d.season, "Season window override as SOS,EOS dekads of year (skips detection)")
        ->delimiter(',')
        ->expected(2);
}

std::optional<SeasonWindow> season_override(const DataArgs& d) {
    if (d.season.empty()) return std::nullopt;
    SeasonWindow w;
    w.sos = d.season[0];
    w.eos = d.season[1];
    if (w.sos < 1 || w.sos > 36 || w.eos < 1 || w.eos > 36) fail(ErrorCode::InvalidConfig, "season dekads must lie in 1..36");
    return w;
}

Dataset load(const DataArgs& d) {
    const auto ts = csv::read_file(d.timeseries);
    const auto ys = csv::read_file(d.yields);
    const auto us = csv::read_file(d.units);
    return parse_dataset(ts, ys, us, season_override(d).value_or(SeasonWindow{}), d.crop);
}

// Dataset with the season window applied: the override, or detected.
Dataset seasoned(const Dataset& ds, const DataArgs& d) {
    if (const auto w = season_override(d)) return ds.with_season(*w);
    ds.require_complete();
    return ds.with_season(phenology::detect_season(ds).window);
}

std::filesystem::path out_path(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return std::filesystem::path(dir) / name;
}

std::vector<bool> toggle(const std::string& v, const std::string& flag) {
    if (v == "both") return {false, true};
    if (v == "on") return {true};
    if (v == "off") return {false};
    fail(ErrorCode::InvalidConfig, flag + " must be one of both, on, off");
}

std::vector<models::AlgorithmId> parse_algorithms(const std::vector<std::string>& names) {
    std::vector<models::AlgorithmId> out;
    for (const auto& n : names) {
        const auto a = models::parse_algorithm(n);
        if (!a) fail(ErrorCode::InvalidConfig, "unknown algorithm '" + n + "'");
        out.push_back(*a);
    }
    return out;
}

std::vector<features::FeatureSetId> parse_sets(const std::vector<std::string>& names) {
    std::vector<features::FeatureSetId> out;
    for (const auto& n : names) {
        const auto s = features::parse_feature_set(n);
        if (!s) fail(ErrorCode::InvalidConfig, "unknown feature set '" + n + "'");
        out.push_back(*s);
    }
    return out;
}

struct EngineArgs {
    std::uint64_t seed = 42;
    int workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    std::string scaler = "zscore";
    std::string gbr_grid = "explicit";
    std::string defaults_file;
};

void add_engine_options(CLI::App* cmd, EngineArgs& e) {
    cmd->add_option("--seed", e.seed, "Global seed")->capture_default_str();
    cmd->add_option("--workers", e.workers, "Worker threads")->capture_default_str();
    cmd->add_option("--scaler", e.scaler, "Feature scaling: zscore or none")->capture_default_str();
    cmd->add_option("--gbr-grid", e.gbr_grid, "GBR grid: explicit (162) or compact (54)")->capture_default_str();
    cmd->add_option("--defaults", e.defaults_file, "Model defaults file overriding the built-in values");
}

cv::RunOptions engine_options(const EngineArgs& e) {
    cv::RunOptions o;
    o.seed = e.seed;
    if (e.workers < 1) fail(ErrorCode::InvalidConfig, "--workers must be positive");
    o.workers = e.workers;
    if (e.scaler == "zscore") {
        o.scaler = cv::Scaler::ZScore;
    } else if (e.scaler == "none") {
        o.scaler = cv::Scaler::None;
    } else {
        fail(ErrorCode::InvalidConfig, "--scaler must be zscore or none");
    }
    if (e.gbr_grid == "explicit") {
        o.gbr_grid = models::GbrGrid::Explicit;
    } else if (e.gbr_grid == "compact") {
        o.gbr_grid = models::GbrGrid::Compact;
    } else {
        fail(ErrorCode::InvalidConfig, "--gbr-grid must be explicit or compact");
    }
    if (!e.defaults_file.empty()) o.defaults = models::load_defaults(e.defaults_file);
    return o;
}

struct CompareArgs {
    double rope_delta = 5.0;
    double confidence = 0.9;
    double rho = -1.0;  // negative: 1/n
};

void add_compare_options(CLI::App* cmd, CompareArgs& c) {
    cmd->add_option("--rope-delta", c.rope_delta, "ROPE half-width in rRMSE points")->capture_default_str();
    cmd->add_option("--confidence", c.confidence, "Posterior probability needed for a verdict")->capture_default_str();
    cmd->add_option("--rho", c.rho, "Fold correlation (default 1/n)");
}

bayes::CompareOptions compare_options(const CompareArgs& c) {
    if (!(c.rope_delta > 0.0)) fail(ErrorCode::InvalidConfig, "--rope-delta must be positive");
    if (!(c.confidence > 0.0 && c.confidence <= 1.0)) fail(ErrorCode::InvalidConfig, "--confidence must lie in (0, 1]");
    bayes::CompareOptions o;
    o.delta = c.rope_delta;
    o.confidence = c.confidence;
    if (c.rho >= 0.0) {
        if (c.rho >= 1.0) fail(ErrorCode::InvalidConfig, "--rho must lie in [0, 1)");
        o.rho = c.rho;
    }
    return o;
}

int report_error(const std::string& code, const std::string& message, int exit_code) {
    nlohmann::ordered_json j;
    j["error"] = {{"code", code}, {"message", message}, {"exit_code", exit_code}};
    std::cerr << j.dump() << std::endl;
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Crop yield hindcasting from dekadal NDVI and meteorological series"};
    app.require_subcommand(1);
    app.set_config("--config", "", "INI configuration file; [section] names match subcommands");

    DataArgs data;
    EngineArgs engine;
    CompareArgs cmp;
    std::string out_dir = "out";

    // phenology
    auto* phen = app.add_subcommand("phenology", "Fit double logistics and derive the average season window");
    double threshold = 0.2;
    add_data_options(phen, data);
    phen->add_option("--threshold", threshold, "Amplitude fraction defining SOS/EOS")->capture_default_str();
    phen->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // features
    auto* feat = app.add_subcommand("features", "Build the monthly feature matrix for one forecast month");
    std::string set_name = "RS&Met";
    int feature_month = 0;
    bool feature_ohe = false;
    add_data_options(feat, data);
    feat->add_option("--set", set_name, "Feature set")->capture_default_str();
    feat->add_option("--months", feature_month, "Forecast month index (default: last)");
    feat->add_flag("--ohe", feature_ohe, "Append one-hot unit columns");
    feat->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // run
    auto* run = app.add_subcommand("run", "Nested leave-one-year-out hindcast of all configurations");
    std::vector<int> months;
    std::vector<std::string> algorithms{"lasso", "rf", "svr_lin", "svr_rbf", "gbr", "mlp"};
    std::vector<std::string> sets{"RS&Met", "RS", "Met", "RS&Met-", "RS-", "Met-"};
    std::string mrmr = "both";
    std::string ohe = "both";
    add_data_options(run, data);
    add_engine_options(run, engine);
    add_compare_options(run, cmp);
    run->add_option("--months", months, "Forecast month indices (default: all)")->delimiter(',');
    run->add_option("--algorithms", algorithms, "Algorithms")->delimiter(',')->capture_default_str();
    run->add_option("--sets", sets, "Feature sets")->delimiter(',')->capture_default_str();
    run->add_option("--mrmr", mrmr, "mRMR options: both, on, off")->capture_default_str();
    run->add_option("--ohe", ohe, "One-hot unit options: both, on, off")->capture_default_str();
    run->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // compare
    auto* compare = app.add_subcommand("compare", "Bayesian comparison from predictions.csv");
    std::string predictions = "out/predictions.csv";
    add_compare_options(compare, cmp);
    compare->add_option("--predictions", predictions, "predictions.csv of a run")->capture_default_str();
    compare->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "Percentile ranks or option effects from metrics.csv");
    std::string metrics_path = "out/metrics.csv";
    std::string kind = "percentile";
    std::string option = "ohe";
    std::string by = "algorithm";
    report->add_option("--metrics", metrics_path, "metrics.csv of a run")->capture_default_str();
    report->add_option("--kind", kind, "percentile or effects")->capture_default_str();
    report->add_option("--option", option, "Effect option: ohe or mrmr")->capture_default_str();
    report->add_option("--by", by, "Effect grouping: algorithm or feature_set")->capture_default_str();
    report->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset with a known yield law");
    synth::ScenarioSpec spec;
    std::string law = "PEAK_LINEAR";
    std::vector<int> synth_season;
    synth_cmd->add_option("--law", law, "PEAK_LINEAR, METEO_MODULATED or PURE_NOISE")->capture_default_str();
    synth_cmd->add_option("--n-units", spec.n_units, "Administrative units")->capture_default_str();
    synth_cmd->add_option("--first-year", spec.first_year, "First harvest year")->capture_default_str();
    synth_cmd->add_option("--last-year", spec.last_year, "Last harvest year")->capture_default_str();
    synth_cmd->add_option("--noise-sd", spec.noise_sd, "Yield noise sd, t/ha")->capture_default_str();
    synth_cmd->add_option("--offset-sd", spec.unit_offset_sd, "Unit offset sd, t/ha")->capture_default_str();
    synth_cmd->add_option("--ndvi-noise", spec.ndvi_noise, "NDVI noise half-width")->capture_default_str();
    synth_cmd->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    synth_cmd->add_option("--crop", spec.crop, "Crop name")->capture_default_str();
    synth_cmd->add_option("--season", synth_season, "Season window SOS,EOS")->delimiter(',')->expected(2);
    synth_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();

    // fit-final
    auto* final_cmd = app.add_subcommand("fit-final", "Fit one configuration on all years and save it");
    std::string config_id;
    int final_month = 0;
    add_data_options(final_cmd, data);
    add_engine_options(final_cmd, engine);
    final_cmd->add_option("--config-id", config_id, "Configuration, e.g. LASSO/RS&Met/mrmr/ohe")->required();
    final_cmd->add_option("--months", final_month, "Forecast month index")->required();
    final_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return report_error(std::string(to_string(ErrorCode::InvalidConfig)), e.what(), 4);
    }

    try {
        if (*phen) {
            const auto ds = load(data);
            ds.require_complete();
            phenology::DetectOptions opts;
            opts.threshold = threshold;
            const auto res = phenology::detect_season(ds, opts);
            csv::write_file(out_path(out_dir, "phenology.csv").string(), phenology::phenology_csv(res.records));
            nlohmann::ordered_json j;
            j["sos"] = res.window.sos;
            j["eos"] = res.window.eos;
            j["sos_sd"] = res.window.sos_sd;
            j["eos_sd"] = res.window.eos_sd;
            int ok = 0;
            for (const auto& r : res.records) ok += r.ok ? 1 : 0;
            j["fits_ok"] = ok;
            j["fits_skipped"] = static_cast<int>(res.records.size()) - ok;
            csv::write_file(out_path(out_dir, "season.json").string(), j.dump(2) + "\n");
        } else if (*feat) {
            const auto ds = seasoned(load(data), data);
            const auto set = parse_sets({set_name});
            const int k = feature_month > 0 ? feature_month : ds.season().n_months();
            const auto fm = features::build_feature_matrix(ds, set.front(), k, feature_ohe);
            csv::write_file(out_path(out_dir, "features.csv").string(), features::features_csv(fm));
        } else if (*run) {
            pipeline::RunConfig rc;
            rc.timeseries_path = data.timeseries;
            rc.yields_path = data.yields;
            rc.units_path = data.units;
            rc.crop = data.crop;
            rc.months = months;
            rc.algorithms = parse_algorithms(algorithms);
            rc.sets = parse_sets(sets);
            rc.mrmr = toggle(mrmr, "--mrmr");
            rc.ohe = toggle(ohe, "--ohe");
            rc.season = season_override(data);
            rc.options = engine_options(engine);
            rc.compare = compare_options(cmp);
            rc.out_dir = out_dir;
            pipeline::cmd_run(rc);
        } else if (*compare) {
            const auto results = pipeline::parse_predictions_csv(csv::read_file(predictions));
            std::map<std::string, std::vector<cv::RunResult>> by_crop;
            for (const auto& r : results) by_crop[r.crop].push_back(r);
            std::string text;
            for (const auto& [crop, rs] : by_crop) {
                double sum = 0.0;
                std::size_t n = 0;
                for (const auto& p : rs.front().records) {
                    sum += p.y_obs;
                    ++n;
                }
                const auto decisions = pipeline::compare_results(rs, sum / static_cast<double>(n), compare_options(cmp));
                auto part = pipeline::comparison_csv(crop, decisions);
                text += text.empty() ? part : part.substr(part.find('\n') + 1);
            }
            if (text.empty()) text = pipeline::comparison_csv("", {});
            csv::write_file(out_path(out_dir, "comparison.csv").string(), text);
        } else if (*report) {
            const auto rows = reports::parse_metrics_csv(csv::read_file(metrics_path));
            if (kind == "percentile") {
                csv::write_file(out_path(out_dir, "percentile_ranks.csv").string(),
                                reports::percentile_csv(reports::percentile_ranks(rows)));
            } else if (kind == "effects") {
                reports::EffectOption opt;
                if (option == "ohe") {
                    opt = reports::EffectOption::Ohe;
                } else if (option == "mrmr") {
                    opt = reports::EffectOption::Mrmr;
                } else {
                    fail(ErrorCode::InvalidConfig, "--option must be ohe or mrmr");
                }
                reports::EffectGroup group;
                if (by == "algorithm") {
                    group = reports::EffectGroup::Algorithm;
                } else if (by == "feature_set") {
                    group = reports::EffectGroup::FeatureSet;
                } else {
                    fail(ErrorCode::InvalidConfig, "--by must be algorithm or feature_set");
                }
                csv::write_file(out_path(out_dir, "effects_" + option + "_by_" + by + ".csv").string(),
                                reports::effects_csv(reports::effects(rows, opt, group), opt));
            } else {
                fail(ErrorCode::InvalidConfig, "--kind must be percentile or effects");
            }
        } else if (*synth_cmd) {
            const auto l = synth::parse_law(law);
            if (!l) fail(ErrorCode::InvalidConfig, "unknown law '" + law + "'");
            spec.law = *l;
            if (!synth_season.empty()) {
                spec.season.sos = synth_season[0];
                spec.season.eos = synth_season[1];
            }
            const auto sc = synth::generate(spec);
            csv::write_file(out_path(out_dir, "timeseries.csv").string(), sc.csv.timeseries);
            csv::write_file(out_path(out_dir, "yields.csv").string(), sc.csv.yields);
            csv::write_file(out_path(out_dir, "units.csv").string(), sc.csv.units);
            csv::write_file(out_path(out_dir, "truth.json").string(), sc.truth_json);
        } else if (*final_cmd) {
            const auto ds = seasoned(load(data), data);
            const auto config = cv::ModelConfiguration::parse(config_id);
            const auto fm = cv::fit_final(ds, final_month, config, engine_options(engine));
            nlohmann::ordered_json j;
            j["config_id"] = config.config_id();
            j["crop"] = ds.yields().crop;
            j["forecast_month"] = final_month;
            j["forecast_month_name"] = cv::forecast_month_name(ds.season(), final_month);
            j["season"] = {{"sos", ds.season().sos}, {"eos", ds.season().eos}};
            j["years"] = fm.years;
            j["hyperparameters"] = fm.hyperparameters.to_string();
            if (fm.mrmr_fraction) j["mrmr_fraction"] = *fm.mrmr_fraction;
            j["selected_features"] = fm.selected_features;
            j["scaler"] = {{"mean", std::vector<double>(fm.scaler.mean.data(), fm.scaler.mean.data() + fm.scaler.mean.size())},
                           {"sd", std::vector<double>(fm.scaler.sd.data(), fm.scaler.sd.data() + fm.scaler.sd.size())}};
            j["converged"] = fm.model.converged;
            nlohmann::ordered_json summary;
            for (const auto& [k, v] : fm.model.model->summary()) summary[k] = v;
            j["model"] = summary;
            j["note"] = "fitted on all years; no accuracy estimate attached";
            csv::write_file(out_path(out_dir, "final_model.json").string(), j.dump(2) + "\n");
        }
    } catch (const Error& e) {
        return report_error(std::string(to_string(e.code())), e.what(), exit_code_for(e.code()));
    } catch (const std::exception& e) {
        return report_error("InternalError", e.what(), 3);
    }
    return 0;
}
