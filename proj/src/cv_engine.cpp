#include "yieldcast/cv_engine.hpp"

#include "yieldcast/error.hpp"
#include "yieldcast/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace yieldcast::cv {

using Eigen::Index;

std::string ModelConfiguration::config_id() const {
    std::string id(models::to_string(algorithm));
    if (models::is_benchmark(algorithm)) return id;
    id += "/";
    id += features::to_string(feature_set);
    id += mrmr ? "/mrmr" : "/all";
    id += ohe ? "/ohe" : "/noohe";
    return id;
}

ModelConfiguration ModelConfiguration::parse(const std::string& config_id) {
    std::vector<std::string> parts;
    std::stringstream ss(config_id);
    for (std::string p; std::getline(ss, p, '/');) parts.push_back(p);
    ModelConfiguration c;
    const auto a = parts.empty() ? std::nullopt : models::parse_algorithm(parts[0]);
    if (!a) fail(ErrorCode::InvalidConfig, "unknown configuration '" + config_id + "'");
    c.algorithm = *a;
    if (models::is_benchmark(c.algorithm)) {
        if (parts.size() != 1) fail(ErrorCode::InvalidConfig, "unknown configuration '" + config_id + "'");
        return c;
    }
    if (parts.size() != 4) fail(ErrorCode::InvalidConfig, "unknown configuration '" + config_id + "'");
    const auto set = features::parse_feature_set(parts[1]);
    if (!set || (parts[2] != "mrmr" && parts[2] != "all") || (parts[3] != "ohe" && parts[3] != "noohe")) {
        fail(ErrorCode::InvalidConfig, "unknown configuration '" + config_id + "'");
    }
    c.feature_set = *set;
    c.mrmr = parts[2] == "mrmr";
    c.ohe = parts[3] == "ohe";
    return c;
}

std::vector<ModelConfiguration> enumerate_configurations(const std::vector<AlgorithmId>& algorithms,
                                                         const std::vector<FeatureSetId>& sets,
                                                         const std::vector<bool>& mrmr_options,
                                                         const std::vector<bool>& ohe_options) {
    std::vector<ModelConfiguration> out;
    for (auto a : algorithms) {
        if (models::is_benchmark(a)) {
            ModelConfiguration c;
            c.algorithm = a;
            if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
            continue;
        }
        for (auto s : sets) {
            for (bool m : mrmr_options) {
                for (bool o : ohe_options) out.push_back(ModelConfiguration{a, s, m, o});
            }
        }
    }
    return out;
}

int expanded_configuration_count(const std::vector<FeatureSetId>& sets, const std::vector<bool>& mrmr_options,
                                 const std::vector<bool>& ohe_options) {
    int selection = 0;
    for (bool m : mrmr_options) selection += m ? static_cast<int>(std::size(features::kMrmrFractions)) : 1;
    return static_cast<int>(sets.size()) * selection * static_cast<int>(ohe_options.size());
}

std::string forecast_month_name(const SeasonWindow& season, int k) {
    return month_abbrev((season.start_month() - 1 + k) % 12 + 1);
}

FoldPlan plan_nested_loyo(std::vector<int> years) {
    std::sort(years.begin(), years.end());
    years.erase(std::unique(years.begin(), years.end()), years.end());
    if (years.size() < 3) {
        fail(ErrorCode::TooFewYears, "nested leave-one-year-out needs at least 3 years, got " +
                                         std::to_string(years.size()));
    }
    FoldPlan plan;
    plan.years = years;
    for (int test : years) {
        OuterFold o;
        o.test_year = test;
        for (int y : years) {
            if (y != test) o.train_years.push_back(y);
        }
        for (int val : o.train_years) {
            InnerFold f;
            f.val_year = val;
            for (int y : o.train_years) {
                if (y != val) f.fit_years.push_back(y);
            }
            o.inner.push_back(std::move(f));
        }
        plan.outer.push_back(std::move(o));
    }
    return plan;
}

const std::vector<models::Assignment>& grid_for(AlgorithmId a, const RunOptions& options) {
    const auto it = options.grid_override.find(a);
    if (it != options.grid_override.end()) return it->second;
    static const auto grids = [] {
        std::map<std::pair<AlgorithmId, models::GbrGrid>, std::vector<models::Assignment>> g;
        for (auto alg : models::kMlAlgorithms) {
            for (auto gg : {models::GbrGrid::Explicit, models::GbrGrid::Compact}) {
                g[{alg, gg}] = models::enumerate_grid(alg, gg);
            }
        }
        return g;
    }();
    static const std::vector<models::Assignment> empty;
    const auto g = grids.find({a, options.gbr_grid});
    return g == grids.end() ? empty : g->second;
}

namespace {

std::vector<Index> rows_of_years(const features::FeatureMatrix& fm, const std::vector<int>& years) {
    std::vector<Index> out;
    for (Index i = 0; i < static_cast<Index>(fm.rows.size()); ++i) {
        if (std::binary_search(years.begin(), years.end(), fm.rows[static_cast<std::size_t>(i)].year)) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<int> years_of_rows(const std::vector<features::RowKey>& keys, const std::vector<Index>& rows) {
    std::set<int> ys;
    for (auto i : rows) ys.insert(keys[static_cast<std::size_t>(i)].year);
    return {ys.begin(), ys.end()};
}

void guard(int test_year, const std::vector<int>& years, const std::string& config_id) {
    if (test_year != 0 && std::binary_search(years.begin(), years.end(), test_year)) {
        fail(ErrorCode::LeakageDetected,
             "held-out year " + std::to_string(test_year) + " reached a fit in " + config_id);
    }
}

class Notifier {
public:
    explicit Notifier(const RunOptions& options) : observer_(options.observer) {}

    void operator()(const FitEvent& e) const {
        if (!observer_) return;
        std::lock_guard lock(mutex());
        observer_(e);
    }

private:
    static std::mutex& mutex() {
        static std::mutex m;
        return m;
    }
    const std::function<void(const FitEvent&)>& observer_;
};

// Scaled design for one fit/predict split plus the mRMR ranking of its
// continuous columns.
struct Split {
    Eigen::MatrixXd fit_x;
    Eigen::VectorXd fit_y;
    Eigen::MatrixXd pred_x;
    features::ScalerParams scaler;
    std::vector<Index> ranking;
    Index n_cont = 0;
    Index n_cols = 0;
};

Split prepare(const features::FeatureMatrix& fm, const std::vector<Index>& fit_rows,
              const std::vector<Index>& pred_rows, Scaler scaler, bool mrmr) {
    Split s;
    s.n_cont = fm.n_continuous();
    s.n_cols = fm.x.cols();
    s.fit_x = fm.x(fit_rows, Eigen::all);
    s.fit_y = fm.y(fit_rows);
    s.pred_x = fm.x(pred_rows, Eigen::all);
    s.scaler.mean = Eigen::VectorXd::Zero(s.n_cont);
    s.scaler.sd = Eigen::VectorXd::Ones(s.n_cont);
    if (scaler == Scaler::ZScore) {
        const double n = static_cast<double>(s.fit_x.rows());
        for (Index j = 0; j < s.n_cont; ++j) {
            const double mean = s.fit_x.col(j).sum() / n;
            const double sd = std::sqrt((s.fit_x.col(j).array() - mean).square().sum() / n);
            s.scaler.mean[j] = mean;
            s.scaler.sd[j] = sd >= 1e-12 ? sd : 1.0;
        }
        s.fit_x = features::zscore_apply(s.scaler, s.fit_x);
        s.pred_x = features::zscore_apply(s.scaler, s.pred_x);
    }
    if (mrmr && s.n_cont > 0) s.ranking = features::mrmr_select(s.fit_x.leftCols(s.n_cont), s.fit_y, s.n_cont);
    return s;
}

std::vector<Index> columns_for(const Split& s, std::optional<int> fraction) {
    std::vector<Index> cols;
    if (fraction && s.n_cont > 0) {
        const int k = features::fraction_to_count(*fraction, static_cast<int>(s.n_cont));
        cols.assign(s.ranking.begin(), s.ranking.begin() + k);
    } else {
        for (Index j = 0; j < s.n_cont; ++j) cols.push_back(j);
    }
    for (Index j = s.n_cont; j < s.n_cols; ++j) cols.push_back(j);
    return cols;
}

struct Candidate {
    std::size_t grid_index = 0;
    std::optional<int> fraction;
};

std::vector<Candidate> candidates(std::size_t grid_size, bool mrmr) {
    std::vector<Candidate> out;
    for (std::size_t g = 0; g < grid_size; ++g) {
        if (mrmr) {
            for (int f : features::kMrmrFractions) out.push_back({g, f});
        } else {
            out.push_back({g, std::nullopt});
        }
    }
    return out;
}

std::string candidate_label(const Candidate& c) {
    std::string s = std::to_string(c.grid_index);
    if (c.fraction) s += "/" + std::to_string(*c.fraction) + "%";
    return s;
}

}  // namespace

InnerSelection run_inner_selection(const ModelConfiguration& config, const features::FeatureMatrix& fm,
                                   const std::vector<int>& train_years, std::uint64_t seed,
                                   const RunOptions& options, int outer_test_year) {
    const auto& grid = grid_for(config.algorithm, options);
    if (grid.empty()) fail(ErrorCode::InvalidConfig, "empty grid for " + config.config_id());
    const auto cands = candidates(grid.size(), config.mrmr);
    const auto config_id = config.config_id();
    const Notifier notify(options);

    // Candidates whose fitted model is identical share one fit per fold.
    std::vector<std::size_t> alias(cands.size());
    {
        std::map<std::string, std::size_t> first;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            auto key = models::effective_key(config.algorithm, grid[cands[c].grid_index]);
            if (cands[c].fraction) key += "|" + std::to_string(*cands[c].fraction);
            alias[c] = first.try_emplace(key, c).first->second;
        }
    }

    std::vector<double> sse(cands.size(), 0.0);
    std::vector<std::size_t> count(cands.size(), 0);
    std::vector<std::string> failure(cands.size());
    InnerSelection out;

    std::vector<int> years = train_years;
    std::sort(years.begin(), years.end());
    guard(outer_test_year, years, config_id);
    for (int val : years) {
        std::vector<int> fit_years;
        for (int y : years) {
            if (y != val) fit_years.push_back(y);
        }
        const auto fit_rows = rows_of_years(fm, fit_years);
        const auto val_rows = rows_of_years(fm, {val});
        if (val_rows.empty()) continue;
        const auto fit_seen = years_of_rows(fm.rows, fit_rows);
        const auto val_seen = years_of_rows(fm.rows, val_rows);
        guard(outer_test_year, fit_seen, config_id);
        guard(outer_test_year, val_seen, config_id);

        const auto split = prepare(fm, fit_rows, val_rows, options.scaler, config.mrmr);
        const Eigen::VectorXd val_y = fm.y(val_rows);
        for (std::size_t c = 0; c < cands.size(); ++c) {
            if (!failure[c].empty()) continue;
            ++out.fits;
            if (alias[c] != c) continue;
            const auto cols = columns_for(split, cands[c].fraction);
            const std::uint64_t fit_seed =
                derive_seed(seed, config_id,
                            {static_cast<std::uint64_t>(outer_test_year), static_cast<std::uint64_t>(val), c});
            try {
                const Eigen::MatrixXd fx = split.fit_x(Eigen::all, cols);
                const auto m = models::fit(config.algorithm, grid[cands[c].grid_index], fx, split.fit_y, fit_seed,
                                           options.defaults);
                notify(FitEvent{config_id, FitStage::Inner, outer_test_year, fit_seen, val_seen});
                const Eigen::VectorXd pred = m.predict(split.pred_x(Eigen::all, cols));
                if (!pred.allFinite()) fail(ErrorCode::SingularFit, "non-finite predictions");
                sse[c] += (pred - val_y).squaredNorm();
                count[c] += static_cast<std::size_t>(pred.size());
            } catch (const Error& e) {
                if (e.code() == ErrorCode::LeakageDetected) throw;
                failure[c] = std::string(to_string(e.code())) + " " + e.what();
            }
        }
    }

    for (std::size_t c = 0; c < cands.size(); ++c) {
        sse[c] = sse[alias[c]];
        count[c] = count[alias[c]];
        failure[c] = failure[alias[c]];
    }

    std::optional<std::size_t> best;
    double best_rmse = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < cands.size(); ++c) {
        if (!failure[c].empty()) {
            out.skipped.push_back(candidate_label(cands[c]) + ": " + failure[c]);
            continue;
        }
        if (count[c] == 0) continue;
        const double rmse = std::sqrt(sse[c] / static_cast<double>(count[c]));
        if (rmse < best_rmse) {
            best_rmse = rmse;
            best = c;
        }
    }
    if (!best) fail(ErrorCode::AllGridPointsFailed, "no grid point completed the inner loop of " + config_id);
    out.grid_index = cands[*best].grid_index;
    out.hyperparameters = grid[out.grid_index];
    out.mrmr_fraction = cands[*best].fraction;
    out.rmse = best_rmse;
    return out;
}

namespace {

struct TaskOutput {
    OuterFoldResult fold;
    std::vector<std::pair<Index, double>> predictions;  // row -> prediction
    std::size_t inner_fits = 0;
    std::size_t refits = 0;
    double seconds = 0.0;
};

TaskOutput run_outer_fold(const ModelConfiguration& config, const features::FeatureMatrix& fm,
                          const OuterFold& fold, const RunOptions& options) {
    TaskOutput out;
    const auto config_id = config.config_id();
    const Notifier notify(options);
    const auto sel = run_inner_selection(config, fm, fold.train_years, options.seed, options, fold.test_year);
    out.inner_fits = sel.fits;
    out.fold.test_year = fold.test_year;
    out.fold.hyperparameters = sel.hyperparameters;
    out.fold.mrmr_fraction = sel.mrmr_fraction;
    out.fold.skipped = sel.skipped;

    const auto train_rows = rows_of_years(fm, fold.train_years);
    const auto test_rows = rows_of_years(fm, {fold.test_year});
    const auto fit_seen = years_of_rows(fm.rows, train_rows);
    guard(fold.test_year, fit_seen, config_id);
    const auto split = prepare(fm, train_rows, test_rows, options.scaler, config.mrmr);
    const auto cols = columns_for(split, sel.mrmr_fraction);
    for (auto j : cols) out.fold.selected_features.push_back(fm.columns[static_cast<std::size_t>(j)]);
    const std::uint64_t fit_seed =
        derive_seed(options.seed, config_id + "#refit", {static_cast<std::uint64_t>(fold.test_year)});
    const Eigen::MatrixXd fx = split.fit_x(Eigen::all, cols);
    const auto m = models::fit(config.algorithm, sel.hyperparameters, fx, split.fit_y, fit_seed, options.defaults);
    out.refits = 1;
    out.fold.converged = m.converged;
    notify(FitEvent{config_id, FitStage::Refit, fold.test_year, fit_seen, years_of_rows(fm.rows, test_rows)});
    const Eigen::VectorXd pred = m.predict(split.pred_x(Eigen::all, cols));
    for (std::size_t i = 0; i < test_rows.size(); ++i) {
        out.predictions.emplace_back(test_rows[i], pred[static_cast<Index>(i)]);
    }
    return out;
}

// Simple leave-one-year-out for NULL and PEAK_NDVI.
TaskOutput run_benchmark(const Dataset& ds, int forecast_month, const ModelConfiguration& config,
                         const std::vector<features::RowKey>& rows, const Eigen::VectorXd& y,
                         const FoldPlan& plan, const RunOptions& options) {
    TaskOutput out;
    const auto config_id = config.config_id();
    const Notifier notify(options);
    Eigen::VectorXd peaks;
    if (config.algorithm == AlgorithmId::PeakNdvi) peaks = features::peak_ndvi(ds, rows, forecast_month);

    for (const auto& fold : plan.outer) {
        std::vector<Index> train_rows;
        std::vector<Index> test_rows;
        for (Index i = 0; i < static_cast<Index>(rows.size()); ++i) {
            (rows[static_cast<std::size_t>(i)].year == fold.test_year ? test_rows : train_rows).push_back(i);
        }
        const auto fit_seen = years_of_rows(rows, train_rows);
        guard(fold.test_year, fit_seen, config_id);
        notify(FitEvent{config_id, FitStage::Benchmark, fold.test_year, fit_seen, years_of_rows(rows, test_rows)});
        ++out.refits;

        if (config.algorithm == AlgorithmId::Null) {
            std::vector<std::string> units;
            Eigen::VectorXd ty(static_cast<Index>(train_rows.size()));
            for (std::size_t i = 0; i < train_rows.size(); ++i) {
                units.push_back(rows[static_cast<std::size_t>(train_rows[i])].unit);
                ty[static_cast<Index>(i)] = y[train_rows[i]];
            }
            models::NullModel null_model;
            null_model.fit(units, ty);
            for (auto i : test_rows) out.predictions.emplace_back(i, null_model.predict(rows[static_cast<std::size_t>(i)].unit));
        } else {
            for (auto i : test_rows) {
                const auto& unit = rows[static_cast<std::size_t>(i)].unit;
                std::vector<double> px;
                std::vector<double> py;
                for (auto j : train_rows) {
                    if (rows[static_cast<std::size_t>(j)].unit != unit) continue;
                    px.push_back(peaks[j]);
                    py.push_back(y[j]);
                }
                if (px.empty()) fail(ErrorCode::UnknownUnit, "no training years for unit '" + unit + "'");
                const auto line = models::fit_peak_ndvi(Eigen::Map<Eigen::VectorXd>(px.data(), static_cast<Index>(px.size())),
                                                        Eigen::Map<Eigen::VectorXd>(py.data(), static_cast<Index>(py.size())));
                out.predictions.emplace_back(i, models::predict_peak_ndvi(line, peaks[i]));
            }
        }
    }
    return out;
}

template <class Fn>
void run_pool(std::size_t n_tasks, int workers, Fn&& fn) {
    std::vector<std::exception_ptr> errors(n_tasks);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < n_tasks; t = next++) {
            try {
                fn(t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const auto n_threads = static_cast<std::size_t>(std::max(1, workers));
    if (n_threads == 1 || n_tasks <= 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (std::size_t i = 0; i < std::min(n_threads, n_tasks); ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace

std::vector<RunResult> run_hindcast(const Dataset& ds, int forecast_month,
                                    const std::vector<ModelConfiguration>& configs, const RunOptions& options) {
    ds.require_complete();
    if (forecast_month < 1 || forecast_month > ds.season().n_months()) {
        fail(ErrorCode::InvalidConfig, "forecast month " + std::to_string(forecast_month) + " outside 1.." +
                                           std::to_string(ds.season().n_months()));
    }
    const auto plan = plan_nested_loyo(ds.yields().years());

    std::vector<features::RowKey> rows;
    Eigen::VectorXd y(static_cast<Index>(ds.yields().records.size()));
    for (const auto& r : ds.yields().records) {
        y[static_cast<Index>(rows.size())] = r.yield;
        rows.push_back(features::RowKey{r.unit, r.year});
    }

    std::map<std::pair<FeatureSetId, bool>, features::FeatureMatrix> matrices;
    for (const auto& c : configs) {
        if (models::is_benchmark(c.algorithm)) continue;
        const auto key = std::make_pair(c.feature_set, c.ohe);
        if (!matrices.contains(key)) matrices[key] = features::build_feature_matrix(ds, c.feature_set, forecast_month, c.ohe);
    }

    struct Task {
        std::size_t config = 0;
        std::size_t fold = 0;  // ignored for benchmarks
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < configs.size(); ++c) {
        if (models::is_benchmark(configs[c].algorithm)) {
            tasks.push_back({c, 0});
        } else {
            for (std::size_t f = 0; f < plan.outer.size(); ++f) tasks.push_back({c, f});
        }
    }

    std::vector<TaskOutput> outputs(tasks.size());
    run_pool(tasks.size(), options.workers, [&](std::size_t t) {
        const auto start = std::chrono::steady_clock::now();
        const auto& c = configs[tasks[t].config];
        if (models::is_benchmark(c.algorithm)) {
            outputs[t] = run_benchmark(ds, forecast_month, c, rows, y, plan, options);
        } else {
            outputs[t] = run_outer_fold(c, matrices.at({c.feature_set, c.ohe}), plan.outer[tasks[t].fold], options);
        }
        outputs[t].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });

    std::vector<RunResult> results(configs.size());
    for (std::size_t c = 0; c < configs.size(); ++c) {
        auto& r = results[c];
        r.crop = ds.yields().crop;
        r.forecast_month = forecast_month;
        r.config = configs[c];
        r.config_id = configs[c].config_id();
        r.seed = options.seed;
        r.grid_size = models::is_benchmark(configs[c].algorithm) ? 0 : grid_for(configs[c].algorithm, options).size();
    }
    std::vector<std::vector<double>> preds(configs.size(),
                                           std::vector<double>(rows.size(), std::numeric_limits<double>::quiet_NaN()));
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        auto& r = results[tasks[t].config];
        auto& o = outputs[t];
        r.inner_fits += o.inner_fits;
        r.refits += o.refits;
        r.wall_seconds += o.seconds;
        if (models::is_benchmark(r.config.algorithm)) {
            for (int year : plan.years) {
                OuterFoldResult f;
                f.test_year = year;
                r.folds.push_back(f);
            }
        } else {
            r.folds.push_back(std::move(o.fold));
        }
        for (const auto& [row, v] : o.predictions) preds[tasks[t].config][static_cast<std::size_t>(row)] = v;
    }
    for (std::size_t c = 0; c < configs.size(); ++c) {
        auto& r = results[c];
        for (std::size_t i = 0; i < rows.size(); ++i) {
            r.records.push_back(metrics::PredictionRecord{rows[i].unit, rows[i].year, y[static_cast<Index>(i)], preds[c][i]});
        }
    }
    return results;
}

std::string select_best_configuration(const std::vector<RunResult>& results, double crop_mean,
                                      bool admit_benchmarks) {
    std::string best_id;
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : results) {
        if (!admit_benchmarks && models::is_benchmark(r.config.algorithm)) continue;
        const double v = metrics::provincial_metrics(r.records, crop_mean).rrmse;
        if (v < best || (v == best && r.config_id < best_id) || best_id.empty()) {
            best = v;
            best_id = r.config_id;
        }
    }
    if (best_id.empty()) fail(ErrorCode::InvalidConfig, "no configuration eligible for selection");
    return best_id;
}

FinalModel fit_final(const Dataset& ds, int forecast_month, const ModelConfiguration& config,
                     const RunOptions& options) {
    if (models::is_benchmark(config.algorithm)) {
        fail(ErrorCode::InvalidConfig, "fit-final expects a machine-learning configuration");
    }
    ds.require_complete();
    const auto fm = features::build_feature_matrix(ds, config.feature_set, forecast_month, config.ohe);
    FinalModel out;
    out.config = config;
    out.forecast_month = forecast_month;
    out.years = ds.yields().years();
    if (out.years.size() < 3) fail(ErrorCode::TooFewYears, "fit-final needs at least 3 years");
    const auto sel = run_inner_selection(config, fm, out.years, options.seed, options);
    out.hyperparameters = sel.hyperparameters;
    out.mrmr_fraction = sel.mrmr_fraction;

    std::vector<Index> all(fm.rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Index>(i);
    const auto split = prepare(fm, all, {}, options.scaler, config.mrmr);
    const auto cols = columns_for(split, sel.mrmr_fraction);
    for (auto j : cols) out.selected_features.push_back(fm.columns[static_cast<std::size_t>(j)]);
    out.scaler = split.scaler;
    const Eigen::MatrixXd fx = split.fit_x(Eigen::all, cols);
    out.model = models::fit(config.algorithm, sel.hyperparameters, fx, split.fit_y,
                            derive_seed(options.seed, config.config_id() + "#final"), options.defaults);
    return out;
}

}  // namespace yieldcast::cv
