#include "../support/oracles.hpp"

#include "yieldcast/bayes.hpp"
#include "yieldcast/csv.hpp"
#include "yieldcast/cv_engine.hpp"
#include "yieldcast/error.hpp"
#include "yieldcast/features.hpp"
#include "yieldcast/metrics.hpp"
#include "yieldcast/phenology.hpp"
#include "yieldcast/pipeline.hpp"
#include "yieldcast/reports.hpp"
#include "yieldcast/synthgen.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace yieldcast;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<models::Assignment> pick(models::AlgorithmId a, std::initializer_list<std::size_t> idx) {
    const auto full = models::enumerate_grid(a);
    std::vector<models::Assignment> out;
    for (auto i : idx) out.push_back(full.at(i));
    return out;
}

// SVR grid index = gamma * 56 + epsilon * 8 + C.
std::vector<models::Assignment> svr_lin_reduced() {
    std::vector<std::size_t> idx;
    for (std::size_t e : {3, 4, 5}) {
        for (std::size_t c : {3, 4, 5}) idx.push_back(e * 8 + c);
    }
    const auto full = models::enumerate_grid(models::AlgorithmId::SVR_lin);
    std::vector<models::Assignment> out;
    for (auto i : idx) out.push_back(full.at(i));
    return out;
}

std::vector<cv::ModelConfiguration> parse_all(std::initializer_list<const char*> ids) {
    std::vector<cv::ModelConfiguration> out;
    for (const auto* id : ids) out.push_back(cv::ModelConfiguration::parse(id));
    return out;
}

const cv::RunResult& by_id(const std::vector<cv::RunResult>& rs, const std::string& id) {
    for (const auto& r : rs) {
        if (r.config_id == id) return r;
    }
    fail(ErrorCode::InvalidConfig, "missing result " + id);
}

// ---------------------------------------------------------------------------

Outcome ac1() {
    using models::AlgorithmId;
    const std::vector<std::pair<AlgorithmId, std::size_t>> want = {
        {AlgorithmId::LASSO, 13}, {AlgorithmId::RF, 252}, {AlgorithmId::SVR_lin, 392},
        {AlgorithmId::SVR_rbf, 392}, {AlgorithmId::MLP, 600}, {AlgorithmId::GBR, 162}};
    std::ostringstream got;
    bool ok = true;
    for (const auto& [a, n] : want) {
        const auto size = models::enumerate_grid(a).size();
        ok = ok && size == n;
        got << models::to_string(a) << '=' << size << ' ';
    }
    const auto compact_n = models::enumerate_grid(AlgorithmId::GBR, models::GbrGrid::Compact).size();
    ok = ok && compact_n == 54;
    const int expanded = cv::expanded_configuration_count(
        {std::begin(features::kAllFeatureSets), std::end(features::kAllFeatureSets)}, {false, true}, {false, true});
    ok = ok && expanded == 84;
    std::vector<int> years;
    for (int y = 2002; y <= 2018; ++y) years.push_back(y);
    const auto plan = cv::plan_nested_loyo(years);
    bool inner_ok = plan.outer.size() == 17;
    for (const auto& o : plan.outer) inner_ok = inner_ok && o.inner.size() == 16 && o.train_years.size() == 16;
    ok = ok && inner_ok;
    got << "GBR(compact)=" << compact_n << " expanded=" << expanded << " folds=" << plan.outer.size() << "x"
        << (plan.outer.empty() ? 0 : plan.outer.front().inner.size());
    return {ok, got.str()};
}

Outcome ac2() {
    std::mt19937_64 gen(2024);
    double worst = 0.0;
    int fq_sets = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::uniform_int_distribution<int> nu(2, 9), ny(2, 20);
        const int n_units = nu(gen);
        const int n_years = ny(gen);
        std::uniform_real_distribution<double> yv(0.3, 3.0), err(-0.6, 0.6), wv(0.0, 50000.0), drop(0.0, 1.0);
        std::map<std::string, double> weights;
        for (int u = 0; u < n_units; ++u) weights["U" + std::to_string(u)] = 1.0 + wv(gen);
        std::vector<metrics::PredictionRecord> recs;
        std::vector<oracle::Record> orecs;
        for (int u = 0; u < n_units; ++u) {
            for (int y = 0; y < n_years; ++y) {
                if (u > 0 && drop(gen) < 0.1) continue;  // unit 0 keeps every year present
                const double obs = yv(gen);
                const double pred = std::max(0.0, obs + err(gen));
                recs.push_back({"U" + std::to_string(u), 2000 + y, obs, pred});
                orecs.push_back({"U" + std::to_string(u), 2000 + y, obs, pred});
            }
        }
        double crop_mean = 0.0;
        for (const auto& r : recs) crop_mean += r.y_obs;
        crop_mean /= static_cast<double>(recs.size());
        const auto m = metrics::compute_report(recs, crop_mean, weights);
        const auto o = oracle::metrics(orecs, crop_mean, weights);
        const double a[] = {m.r2p_foldavg, m.rmsep,     m.rrmsep,     m.mep,      m.r2p_temporal, m.r2p_nat,
                            m.rmsep_nat,   m.rrmsep_nat, m.mep_nat,   m.rmsep_fq, m.rrmsep_fq,    m.d_rrmsep_fq};
        const double b[] = {o.r2_foldavg, o.rmse,      o.rrmse,     o.me,      o.r2_temporal, o.r2_nat,
                            o.rmse_nat,   o.rrmse_nat, o.me_nat,    o.rmse_fq, o.rrmse_fq,    o.d_rrmse_fq};
        for (std::size_t i = 0; i < std::size(a); ++i) {
            if (std::isnan(a[i]) != std::isnan(b[i])) return {false, fmt("NaN mismatch in field %zu, trial %d", i, trial)};
            if (!std::isnan(a[i])) worst = std::max(worst, std::fabs(a[i] - b[i]) / std::max(1.0, std::fabs(b[i])));
        }
        fq_sets += std::isnan(m.rmsep_fq) ? 0 : 1;
    }
    return {worst <= 1e-10, fmt("1000 record sets (%d with first-quartile metrics), max deviation %.2e", fq_sets, worst)};
}

Outcome ac3() {
    std::mt19937_64 gen(7);
    int mismatches = 0;
    for (int trial = 0; trial < 200; ++trial) {
        std::uniform_int_distribution<int> nc(2, 10), nr(8, 40);
        const int cols = nc(gen);
        const int rows = nr(gen);
        std::normal_distribution<double> z(0.0, 1.0);
        Eigen::MatrixXd x(rows, cols);
        Eigen::VectorXd y(rows);
        for (int i = 0; i < rows; ++i) {
            for (int j = 0; j < cols; ++j) x(i, j) = z(gen);
        }
        // Correlated columns make redundancy matter.
        for (int j = 1; j < cols; j += 2) x.col(j) = 0.7 * x.col(j - 1) + 0.3 * x.col(j);
        for (int i = 0; i < rows; ++i) y[i] = x(i, 0) - 0.5 * x(i, cols - 1) + 0.5 * z(gen);
        std::uniform_int_distribution<int> nk(1, cols);
        const int k = nk(gen);
        if (features::mrmr_select(x, y, k) != oracle::mrmr(x, y, k)) ++mismatches;
    }
    return {mismatches == 0, fmt("200 instances, %d index-sequence mismatches", mismatches)};
}

Outcome ac4() {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> base(0.05, 0.2), amp(0.3, 0.6), s1(8.0, 12.0), gap(18.0, 24.0),
        slope(0.6, 1.6);
    std::vector<double> t(36);
    for (int i = 0; i < 36; ++i) t[static_cast<std::size_t>(i)] = i;

    // (a) noiseless recovery
    double worst_rel = 0.0;
    double worst_rmse = 0.0;
    int fit_errors = 0;
    for (int trial = 0; trial < 200; ++trial) {
        phenology::DoubleLogisticParams p;
        p.v_base = base(gen);
        p.v_amp = amp(gen);
        p.s1 = s1(gen);
        p.m1 = slope(gen);
        p.s2 = p.s1 + gap(gen);
        p.m2 = slope(gen);
        std::vector<double> v;
        for (double ti : t) v.push_back(oracle::double_logistic(p.v_base, p.v_amp, p.s1, p.m1, p.s2, p.m2, ti));
        try {
            const auto f = phenology::fit_double_logistic(v, t);
            const double want[] = {p.v_base, p.v_amp, p.s1, p.m1, p.s2, p.m2};
            const double got[] = {f.params.v_base, f.params.v_amp, f.params.s1, f.params.m1, f.params.s2, f.params.m2};
            for (int i = 0; i < 6; ++i) worst_rel = std::max(worst_rel, std::fabs(got[i] - want[i]) / std::fabs(want[i]));
            worst_rmse = std::max(worst_rmse, f.rmse);
        } catch (const Error&) {
            ++fit_errors;
        }
    }
    const bool a_ok = fit_errors == 0 && worst_rel < 1e-3 && worst_rmse < 1e-6;

    // (b) closed form vs bisection on the full curve
    double worst_cross = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        phenology::DoubleLogisticParams p;
        p.v_base = base(gen);
        p.v_amp = amp(gen);
        p.s1 = s1(gen);
        p.m1 = slope(gen);
        p.s2 = p.s1 + gap(gen);
        p.m2 = slope(gen);
        const auto [sos, eos] = phenology::extract_sos_eos(p, 0.2);
        const double level = p.v_base + 0.2 * p.v_amp;
        auto f = [&](double ti) {
            return oracle::double_logistic(p.v_base, p.v_amp, p.s1, p.m1, p.s2, p.m2, ti) - level;
        };
        const double mid = 0.5 * (p.s1 + p.s2);
        const double b_sos = oracle::bisect(f, p.s1 - 60.0, mid);
        const double b_eos = oracle::bisect(f, mid, p.s2 + 60.0);
        worst_cross = std::max({worst_cross, std::fabs(sos - b_sos), std::fabs(eos - b_eos)});
    }
    const bool b_ok = worst_cross < 0.01;

    // (c) noisy fits
    int within = 0;
    for (int seed = 0; seed < 100; ++seed) {
        std::mt19937_64 g(1000 + static_cast<std::uint64_t>(seed));
        phenology::DoubleLogisticParams p;
        p.v_base = base(g);
        p.v_amp = amp(g);
        p.s1 = s1(g);
        p.m1 = slope(g);
        p.s2 = p.s1 + gap(g);
        p.m2 = slope(g);
        const auto truth = phenology::extract_sos_eos(p, 0.2);
        std::normal_distribution<double> noise(0.0, 0.02);
        std::vector<double> v;
        for (double ti : t) v.push_back(oracle::double_logistic(p.v_base, p.v_amp, p.s1, p.m1, p.s2, p.m2, ti) + noise(g));
        try {
            const auto f = phenology::fit_double_logistic(v, t);
            const auto est = phenology::extract_sos_eos(f.params, 0.2);
            if (std::fabs(est.first - truth.first) <= 1.0 && std::fabs(est.second - truth.second) <= 1.0) ++within;
        } catch (const Error&) {
        }
    }
    const bool c_ok = within >= 95;
    return {a_ok && b_ok && c_ok,
            fmt("noiseless: max rel err %.2e, max rmse %.1e, %d failed fits; bisection gap %.2e dekad; "
                "noisy: %d/100 within 1 dekad",
                worst_rel, worst_rmse, fit_errors, worst_cross, within)};
}

struct RecoveryRun {
    std::vector<cv::RunResult> results;
    double crop_mean = 0.0;
    std::map<std::string, double> weights;
};

RecoveryRun hindcast(const synth::ScenarioSpec& spec, const std::vector<cv::ModelConfiguration>& configs,
                     cv::RunOptions opts, int k = 8) {
    const auto sc = synth::generate(spec);
    RecoveryRun r;
    r.results = cv::run_hindcast(sc.dataset, k, configs, opts);
    r.crop_mean = sc.dataset.yields().mean_yield();
    r.weights = pipeline::production_weights(sc.dataset);
    return r;
}

cv::RunOptions reduced_options() {
    cv::RunOptions o;
    o.workers = workers();
    o.grid_override[models::AlgorithmId::SVR_lin] = svr_lin_reduced();
    return o;
}

double provincial_rrmse(const cv::RunResult& r, double crop_mean) {
    return metrics::provincial_metrics(r.records, crop_mean).rrmse;
}

RecoveryRun g_first_peak_run;  // reused by AC9

Outcome ac5() {
    const auto configs = parse_all({"LASSO/RS/all/ohe", "LASSO/RS&Met/all/ohe", "SVR_lin/RS/all/ohe",
                                    "SVR_lin/RS&Met/all/ohe", "NULL", "PEAK_NDVI"});
    double bench_rmse = 0.0;
    double bench_rrmse = 0.0;
    double best_rrmse = 0.0;
    int worse = 0;
    const int seeds = 20;
    for (int s = 1; s <= seeds; ++s) {
        synth::ScenarioSpec spec;
        spec.law = synth::Law::PeakLinear;
        spec.seed = static_cast<std::uint64_t>(s);
        auto run = hindcast(spec, configs, reduced_options());
        const auto& peak = by_id(run.results, "PEAK_NDVI");
        const auto pm = metrics::provincial_metrics(peak.records, run.crop_mean);
        bench_rmse += pm.rmse;
        bench_rrmse += pm.rrmse;
        const auto best = cv::select_best_configuration(run.results, run.crop_mean);
        const double b = provincial_rrmse(by_id(run.results, best), run.crop_mean);
        best_rrmse += b;
        if (b > pm.rrmse + 2.0) ++worse;
        if (s == 1) g_first_peak_run = std::move(run);
    }
    bench_rmse /= seeds;
    bench_rrmse /= seeds;
    best_rrmse /= seeds;
    const bool ok = bench_rmse >= 0.04 && bench_rmse <= 0.07 && best_rrmse <= bench_rrmse + 2.0 && worse == 0;
    return {ok, fmt("20 seeds: PEAK_NDVI RMSE_p %.4f t/ha (band [0.04, 0.07]); rRMSE_p best ML %.2f%% vs "
                    "benchmark %.2f%% (+2 allowed); seeds breaking the margin: %d",
                    bench_rmse, best_rrmse, bench_rrmse, worse)};
}

Outcome ac6() {
    const auto configs = parse_all({"LASSO/RS/all/ohe", "LASSO/RS&Met/all/noohe", "SVR_lin/RS&Met/all/ohe"});
    std::mutex mu;
    long events = 0;
    long violations = 0;
    double r2_sum = 0.0;
    const int seeds = 20;
    for (int s = 1; s <= seeds; ++s) {
        synth::ScenarioSpec spec;
        spec.law = synth::Law::PureNoise;
        spec.seed = static_cast<std::uint64_t>(100 + s);
        auto opts = reduced_options();
        opts.observer = [&](const cv::FitEvent& e) {
            std::lock_guard lock(mu);
            ++events;
            const bool in_fit = std::find(e.fit_years.begin(), e.fit_years.end(), e.test_year) != e.fit_years.end();
            const bool in_pred = std::find(e.predict_years.begin(), e.predict_years.end(), e.test_year) !=
                                 e.predict_years.end();
            const bool expect_pred = e.stage != cv::FitStage::Inner;
            if (in_fit || in_pred != expect_pred) ++violations;
        };
        const auto run = hindcast(spec, configs, opts);
        const auto best = cv::select_best_configuration(run.results, run.crop_mean);
        const auto m = metrics::compute_report(by_id(run.results, best).records, run.crop_mean, run.weights);
        r2_sum += m.r2p_nat;
    }
    const double r2 = r2_sum / seeds;
    return {r2 <= 0.15 && violations == 0 && events > 0,
            fmt("20 seeds: mean national R2_p of best ML %.3f (limit 0.15); %ld fits observed, %ld leaking", r2, events,
                violations)};
}

Outcome ac7() {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> loc(-12.0, 12.0), scale(0.5, 8.0), delta(0.5, 10.0);
    std::uniform_int_distribution<int> dof(2, 40);
    double worst_mc = 0.0;
    double worst_sym = 0.0;
    double worst_sum = 0.0;
    for (int i = 0; i < 50; ++i) {
        bayes::Posterior p{loc(gen), scale(gen), dof(gen), false};
        const double d = delta(gen);
        const auto r = bayes::rope_probabilities(p, d);
        const auto [lo, in, hi] = oracle::rope_mc(p.location, p.scale, p.dof, d, 10'000'000, 500 + i);
        worst_mc = std::max({worst_mc, std::fabs(r.p_smaller - lo), std::fabs(r.p_equivalent - in),
                             std::fabs(r.p_larger - hi)});
        bayes::Posterior q = p;
        q.location = -p.location;
        const auto s = bayes::rope_probabilities(q, d);
        worst_sym = std::max({worst_sym, std::fabs(s.p_smaller - r.p_larger), std::fabs(s.p_larger - r.p_smaller),
                              std::fabs(s.p_equivalent - r.p_equivalent)});
        worst_sum = std::max(worst_sum, std::fabs(r.p_smaller + r.p_equivalent + r.p_larger - 1.0));
    }

    // Trivial verdicts: self comparison, a uniformly worse rival, 56 decisions per crop.
    bayes::FoldSeries best{"best", {}};
    bayes::FoldSeries worse{"rival", {}};
    std::mt19937_64 g2(5);
    std::uniform_real_distribution<double> base(8.0, 16.0), jitter(-1e-6, 1e-6);
    for (int y = 2002; y <= 2018; ++y) {
        best.by_year[y] = base(g2);
        worse.by_year[y] = best.by_year[y] + 20.0 + jitter(g2);
    }
    const auto self = bayes::compare(best, best);
    const auto rival = bayes::comparison_matrix(best, {worse}).front();
    const bool verdicts_ok = self.verdict == bayes::Verdict::Equivalent && rival.verdict == bayes::Verdict::Larger &&
                             rival.probabilities.p_larger >= 0.9;

    std::vector<cv::RunResult> results;
    const char* ids[] = {"NULL", "PEAK_NDVI", "LASSO/RS/all/ohe", "RF/RS/all/ohe", "SVR_lin/RS/all/ohe",
                         "SVR_rbf/RS/all/ohe", "GBR/RS/all/ohe", "MLP/RS/all/ohe"};
    std::mt19937_64 g3(6);
    std::uniform_real_distribution<double> e(-0.5, 0.5);
    for (int k = 1; k <= 8; ++k) {
        for (std::size_t c = 0; c < std::size(ids); ++c) {
            cv::RunResult r;
            r.crop = "barley";
            r.forecast_month = k;
            r.config = cv::ModelConfiguration::parse(ids[c]);
            r.config_id = ids[c];
            for (int u = 0; u < 3; ++u) {
                for (int y = 2002; y <= 2018; ++y) {
                    const double obs = 1.0 + 0.1 * u + 0.01 * (y - 2002);
                    r.records.push_back({"U" + std::to_string(u), y, obs, obs + e(g3) * (1.0 + 0.1 * c)});
                }
            }
            results.push_back(std::move(r));
        }
    }
    const auto decisions = pipeline::compare_results(results, 1.2, {});
    const bool count_ok = decisions.size() == 56;

    const bool ok = worst_mc <= 0.001 && worst_sym <= 1e-9 && worst_sum <= 1e-9 && verdicts_ok && count_ok;
    return {ok, fmt("50 tuples x 1e7 draws: max |p - MC| %.2e; antisymmetry %.1e; sum-to-one %.1e; "
                    "self=%s, worse rival=%s (p_larger %.3f); decisions per crop %zu",
                    worst_mc, worst_sym, worst_sum, std::string(bayes::to_string(self.verdict)).c_str(),
                    std::string(bayes::to_string(rival.verdict)).c_str(), rival.probabilities.p_larger,
                    decisions.size())};
}

Outcome ac8() {
    const auto root = std::filesystem::temp_directory_path() / "yieldcast_ac8";
    std::filesystem::remove_all(root);
    synth::ScenarioSpec spec;
    spec.seed = 8;
    const auto sc = synth::generate(spec);
    std::filesystem::create_directories(root);
    csv::write_file((root / "timeseries.csv").string(), sc.csv.timeseries);
    csv::write_file((root / "yields.csv").string(), sc.csv.yields);
    csv::write_file((root / "units.csv").string(), sc.csv.units);

    std::vector<std::string> outputs;
    for (int w : {1, 4, 16}) {
        pipeline::RunConfig rc;
        rc.timeseries_path = (root / "timeseries.csv").string();
        rc.yields_path = (root / "yields.csv").string();
        rc.units_path = (root / "units.csv").string();
        rc.months = {8};
        rc.algorithms = {models::AlgorithmId::LASSO, models::AlgorithmId::RF};
        rc.sets = {features::FeatureSetId::RSMet};
        rc.mrmr = {true};
        rc.ohe = {true};
        rc.options.seed = 42;
        rc.options.workers = w;
        rc.options.grid_override[models::AlgorithmId::LASSO] = pick(models::AlgorithmId::LASSO, {2, 5, 8, 11});
        rc.options.grid_override[models::AlgorithmId::RF] = pick(models::AlgorithmId::RF, {18});
        rc.out_dir = (root / ("w" + std::to_string(w))).string();
        pipeline::cmd_run(rc);
        outputs.push_back(csv::read_file(rc.out_dir + "/predictions.csv"));
    }
    const bool same = outputs[0] == outputs[1] && outputs[1] == outputs[2];
    std::filesystem::remove_all(root);
    return {same && !outputs[0].empty(),
            fmt("predictions.csv (%zu bytes) under workers 1/4/16: %s", outputs[0].size(),
                same ? "byte-identical" : "DIFFERENT")};
}

Outcome ac9() {
    const auto& run = g_first_peak_run;
    if (run.results.empty()) return {false, "no hindcast available (AC5 did not run)"};
    bool ok = true;
    std::string picks;
    for (bool admit : {false, true}) {
        const auto best = cv::select_best_configuration(run.results, run.crop_mean, admit);
        const double b = provincial_rrmse(by_id(run.results, best), run.crop_mean);
        for (const auto& r : run.results) {
            if (!admit && models::is_benchmark(r.config.algorithm)) continue;
            ok = ok && b <= provincial_rrmse(r, run.crop_mean);
        }
        picks += std::string(admit ? " with" : " without") + " benchmarks: " + best + fmt(" (%.3f%%)", b);
    }
    return {ok, "argmin holds;" + picks};
}

Outcome ac10() {
    const auto configs = parse_all({"LASSO/RS&Met/all/ohe", "LASSO/RS&Met/all/noohe", "LASSO/Met/all/ohe",
                                    "LASSO/Met/all/noohe", "LASSO/RS/all/ohe", "LASSO/RS/all/noohe"});
    std::vector<double> deltas;
    for (int s = 1; s <= 20; ++s) {
        synth::ScenarioSpec spec;
        spec.law = synth::Law::MeteoModulated;
        spec.unit_offset_sd = 0.5;
        spec.seed = static_cast<std::uint64_t>(200 + s);
        auto opts = reduced_options();
        opts.grid_override[models::AlgorithmId::LASSO] = pick(models::AlgorithmId::LASSO, {0, 2, 4, 6, 8, 10, 12});
        const auto run = hindcast(spec, configs, opts);
        for (std::size_t i = 0; i + 1 < run.results.size(); i += 2) {
            deltas.push_back(provincial_rrmse(run.results[i + 1], run.crop_mean) -
                             provincial_rrmse(run.results[i], run.crop_mean));
        }
    }
    const auto box = reports::box_summary(deltas);
    return {box.median > 0.0, fmt("%zu OHE pairs over 20 seeds: median rRMSE_p reduction %.2f points "
                                  "(q1 %.2f, q3 %.2f)",
                                  box.n, box.median, box.q1, box.q3)};
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
        {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10}};
    std::set<std::string> only(argv + 1, argv + argc);
    if (only.count("AC9")) only.insert("AC5");
    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        if (!only.empty() && !only.count(name)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("[%s] %s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(), secs);
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    }
    return failed == 0 ? 0 : 1;
}
