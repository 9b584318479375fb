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

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace yieldcast;

namespace {

py::handle g_error_type;

SeasonWindow window(int sos, int eos) {
    SeasonWindow w;
    w.sos = sos;
    w.eos = eos;
    return w;
}

py::dict season_dict(const SeasonWindow& w) {
    py::dict d;
    d["sos"] = w.sos;
    d["eos"] = w.eos;
    d["sos_sd"] = w.sos_sd;
    d["eos_sd"] = w.eos_sd;
    d["n_months"] = w.n_months();
    return d;
}

models::AlgorithmId algorithm(const std::string& name) {
    const auto a = models::parse_algorithm(name);
    if (!a) fail(ErrorCode::InvalidConfig, "unknown algorithm '" + name + "'");
    return *a;
}

features::FeatureSetId feature_set(const std::string& name) {
    const auto s = features::parse_feature_set(name);
    if (!s) fail(ErrorCode::InvalidConfig, "unknown feature set '" + name + "'");
    return *s;
}

std::vector<metrics::PredictionRecord> to_records(const std::vector<std::tuple<std::string, int, double, double>>& rows) {
    std::vector<metrics::PredictionRecord> out;
    for (const auto& [unit, year, obs, pred] : rows) out.push_back({unit, year, obs, pred});
    return out;
}

py::dict report_dict(const metrics::MetricsReport& m) {
    py::dict d;
    d["R2p_foldavg"] = m.r2p_foldavg;
    d["RMSEp"] = m.rmsep;
    d["rRMSEp"] = m.rrmsep;
    d["MEp"] = m.mep;
    d["R2p_temporal"] = m.r2p_temporal;
    d["R2p_nat"] = m.r2p_nat;
    d["RMSEp_nat"] = m.rmsep_nat;
    d["rRMSEp_nat"] = m.rrmsep_nat;
    d["MEp_nat"] = m.mep_nat;
    d["RMSEp_FQ"] = m.rmsep_fq;
    d["rRMSEp_FQ"] = m.rrmsep_fq;
    d["dRMSEp_FQ"] = m.d_rrmsep_fq;
    return d;
}

py::dict decision_dict(const bayes::Decision& d) {
    py::dict out;
    out["model_a"] = d.model_a;
    out["model_b"] = d.model_b;
    out["location"] = d.posterior.location;
    out["scale"] = d.posterior.scale;
    out["dof"] = d.posterior.dof;
    out["p_smaller"] = d.probabilities.p_smaller;
    out["p_equivalent"] = d.probabilities.p_equivalent;
    out["p_larger"] = d.probabilities.p_larger;
    out["verdict"] = std::string(bayes::to_string(d.verdict));
    return out;
}

py::dict result_dict(const cv::RunResult& r) {
    py::dict d;
    d["crop"] = r.crop;
    d["forecast_month"] = r.forecast_month;
    d["config_id"] = r.config_id;
    py::list records;
    for (const auto& p : r.records) records.append(py::make_tuple(p.unit, p.year, p.y_obs, p.y_pred));
    d["records"] = records;
    py::list folds;
    for (const auto& f : r.folds) {
        py::dict fd;
        fd["test_year"] = f.test_year;
        fd["hyperparameters"] = f.hyperparameters.to_string();
        fd["mrmr_fraction"] = f.mrmr_fraction ? py::cast(*f.mrmr_fraction) : py::none();
        fd["selected_features"] = f.selected_features;
        fd["converged"] = f.converged;
        folds.append(fd);
    }
    d["folds"] = folds;
    d["grid_size"] = r.grid_size;
    d["inner_fits"] = r.inner_fits;
    d["refits"] = r.refits;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Crop yield hindcasting core";

    g_error_type = py::exception<Error>(m, "YieldcastError", PyExc_RuntimeError).release();
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::object inst = py::reinterpret_borrow<py::object>(g_error_type)(e.what());
            inst.attr("code") = std::string(to_string(e.code()));
            PyErr_SetObject(g_error_type.ptr(), inst.ptr());
        }
    });

    py::class_<Dataset>(m, "Dataset")
        .def_static(
            "from_csv",
            [](const std::string& ts, const std::string& ys, const std::string& us, const std::string& crop,
               std::optional<std::pair<int, int>> season) {
                const auto w = season ? window(season->first, season->second) : SeasonWindow{};
                return parse_dataset(csv::read_file(ts), csv::read_file(ys), csv::read_file(us), w, crop);
            },
            py::arg("timeseries"), py::arg("yields"), py::arg("units"), py::arg("crop") = "",
            py::arg("season") = py::none(), "Load the three dataset CSV files")
        .def_static(
            "from_text",
            [](const std::string& ts, const std::string& ys, const std::string& us, const std::string& crop,
               std::optional<std::pair<int, int>> season) {
                const auto w = season ? window(season->first, season->second) : SeasonWindow{};
                return parse_dataset(ts, ys, us, w, crop);
            },
            py::arg("timeseries"), py::arg("yields"), py::arg("units"), py::arg("crop") = "",
            py::arg("season") = py::none(), "Parse the three dataset CSV texts")
        .def_property_readonly("season", [](const Dataset& ds) { return season_dict(ds.season()); })
        .def_property_readonly("crop", [](const Dataset& ds) { return ds.yields().crop; })
        .def_property_readonly("units", &Dataset::yield_units)
        .def("with_season", [](const Dataset& ds, int sos, int eos) { return ds.with_season(window(sos, eos)); })
        .def("require_complete", &Dataset::require_complete)
        .def("production_weights", &pipeline::production_weights);

    m.def(
        "detect_season",
        [](const Dataset& ds, double threshold) {
            phenology::DetectOptions opts;
            opts.threshold = threshold;
            const auto res = phenology::detect_season(ds, opts);
            py::dict d = season_dict(res.window);
            py::list recs;
            for (const auto& r : res.records) {
                recs.append(py::make_tuple(r.unit, r.harvest_year, r.sos_dekad, r.eos_dekad, r.ok));
            }
            d["records"] = recs;
            return d;
        },
        py::arg("dataset"), py::arg("threshold") = 0.2);

    m.def(
        "feature_matrix",
        [](const Dataset& ds, const std::string& set, int k, bool ohe) {
            const auto fm = features::build_feature_matrix(ds, feature_set(set), k, ohe);
            py::dict d;
            d["x"] = fm.x;
            d["y"] = fm.y;
            d["columns"] = fm.columns;
            py::list rows;
            for (const auto& r : fm.rows) rows.append(py::make_tuple(r.unit, r.year));
            d["rows"] = rows;
            d["n_continuous"] = fm.n_continuous();
            return d;
        },
        py::arg("dataset"), py::arg("feature_set"), py::arg("forecast_month"), py::arg("ohe") = false);

    m.def("mrmr_select", &features::mrmr_select, py::arg("x"), py::arg("y"), py::arg("k"));

    m.def(
        "grid_size",
        [](const std::string& alg, const std::string& gbr_grid) {
            return models::enumerate_grid(algorithm(alg), gbr_grid == "compact" ? models::GbrGrid::Compact
                                                                                 : models::GbrGrid::Explicit)
                .size();
        },
        py::arg("algorithm"), py::arg("gbr_grid") = "explicit");

    m.def(
        "run_hindcast",
        [](const Dataset& ds, int k, const std::vector<std::string>& config_ids, std::uint64_t seed, int workers,
           const std::map<std::string, std::vector<std::size_t>>& grid_subset) {
            cv::RunOptions opts;
            opts.seed = seed;
            opts.workers = workers;
            for (const auto& [name, idx] : grid_subset) {
                const auto a = algorithm(name);
                const auto full = models::enumerate_grid(a, opts.gbr_grid);
                auto& g = opts.grid_override[a];
                for (auto i : idx) {
                    if (i >= full.size()) fail(ErrorCode::InvalidConfig, "grid index out of range for " + name);
                    g.push_back(full[i]);
                }
            }
            std::vector<cv::ModelConfiguration> configs;
            for (const auto& id : config_ids) configs.push_back(cv::ModelConfiguration::parse(id));
            std::vector<cv::RunResult> results;
            {
                py::gil_scoped_release release;
                results = cv::run_hindcast(ds, k, configs, opts);
            }
            py::list out;
            for (const auto& r : results) out.append(result_dict(r));
            return out;
        },
        py::arg("dataset"), py::arg("forecast_month"), py::arg("config_ids"), py::arg("seed") = 42,
        py::arg("workers") = 1, py::arg("grid_subset") = std::map<std::string, std::vector<std::size_t>>{},
        "Nested leave-one-year-out hindcast; grid_subset keeps the listed grid indices per algorithm");

    m.def(
        "compute_report",
        [](const std::vector<std::tuple<std::string, int, double, double>>& records, double crop_mean,
           const std::map<std::string, double>& weights) {
            const auto recs = to_records(records);
            return report_dict(metrics::compute_report(recs, crop_mean, weights));
        },
        py::arg("records"), py::arg("crop_mean"), py::arg("weights"));

    m.def("percentile", &metrics::percentile, py::arg("values"), py::arg("p"));

    m.def(
        "compare",
        [](const std::map<int, double>& a, const std::map<int, double>& b, double delta, double confidence,
           std::optional<double> rho) {
            bayes::CompareOptions o;
            o.delta = delta;
            o.confidence = confidence;
            o.rho = rho;
            return decision_dict(bayes::compare({"a", a}, {"b", b}, o));
        },
        py::arg("a"), py::arg("b"), py::arg("delta") = 5.0, py::arg("confidence") = 0.9,
        py::arg("rho") = py::none(), "Posterior of mean(a - b) over shared fold years");

    m.def(
        "percentile_rank",
        [](double value, const std::vector<double>& values) { return reports::percentile_rank(value, values); },
        py::arg("value"), py::arg("config_values"));

    m.def(
        "synth",
        [](const std::string& law, int n_units, int first_year, int last_year, double noise_sd, std::uint64_t seed,
           const std::string& crop) {
            synth::ScenarioSpec spec;
            const auto l = synth::parse_law(law);
            if (!l) fail(ErrorCode::InvalidConfig, "unknown law '" + law + "'");
            spec.law = *l;
            spec.n_units = n_units;
            spec.first_year = first_year;
            spec.last_year = last_year;
            spec.noise_sd = noise_sd;
            spec.seed = seed;
            spec.crop = crop;
            const auto sc = synth::generate(spec);
            py::dict d;
            d["timeseries"] = sc.csv.timeseries;
            d["yields"] = sc.csv.yields;
            d["units"] = sc.csv.units;
            d["truth_json"] = sc.truth_json;
            d["dataset"] = sc.dataset;
            return d;
        },
        py::arg("law") = "PEAK_LINEAR", py::arg("n_units") = 5, py::arg("first_year") = 2002,
        py::arg("last_year") = 2018, py::arg("noise_sd") = 0.05, py::arg("seed") = 1, py::arg("crop") = "barley");
}
