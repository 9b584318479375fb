#include "yieldcast/synthgen.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"
#include "yieldcast/phenology.hpp"
#include "yieldcast/rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace yieldcast::synth {

namespace {

constexpr double kSlope = 0.6;  // NDVI logistic steepness, 1/dekad
constexpr int kSpanStart = 25;  // first dekad of the per-season NDVI axis, in harvest_year - 1

std::string unit_id(int u) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "U%02d", u + 1);
    return buf;
}

int harvest_year_of(DekadIndex d) { return d.dekad >= kSpanStart ? d.year + 1 : d.year; }

double season_t(DekadIndex d) {
    return static_cast<double>(d.ordinal() - DekadIndex{harvest_year_of(d) - 1, kSpanStart}.ordinal());
}

double wave(int dekad, int peak_dekad) {
    return std::cos(2.0 * std::numbers::pi * (dekad - peak_dekad) / kDekadsPerYear);
}

double month_sum(const DekadalSeries& s, const SeasonWindow& w, int h, int k_first, int k_last) {
    const auto first = w.month_first_dekad(h, k_first);
    const auto last = DekadIndex::from_ordinal(w.month_first_dekad(h, k_last).ordinal() + 2);
    const auto v = slice_range(s, first, last);
    double sum = 0.0;
    for (double x : v) sum += x;
    return sum;
}

double month_max(const DekadalSeries& s, const SeasonWindow& w, int h, int k_first, int k_last) {
    const auto first = w.month_first_dekad(h, k_first);
    const auto last = DekadIndex::from_ordinal(w.month_first_dekad(h, k_last).ordinal() + 2);
    const auto v = slice_range(s, first, last);
    return *std::max_element(v.begin(), v.end());
}

}  // namespace

std::string_view to_string(Law law) {
    switch (law) {
    case Law::PeakLinear: return "PEAK_LINEAR";
    case Law::MeteoModulated: return "METEO_MODULATED";
    case Law::PureNoise: return "PURE_NOISE";
    }
    return "PEAK_LINEAR";
}

std::optional<Law> parse_law(std::string_view name) {
    std::string upper;
    for (char c : name) upper.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    for (auto l : {Law::PeakLinear, Law::MeteoModulated, Law::PureNoise}) {
        if (upper == to_string(l)) return l;
    }
    return std::nullopt;
}

Scenario generate(const ScenarioSpec& spec) {
    if (spec.n_units < 1 || spec.n_units > 99) fail(ErrorCode::InfeasibleSpec, "n_units must lie in 1..99");
    if (spec.last_year - spec.first_year + 1 < 3) fail(ErrorCode::InfeasibleSpec, "need at least 3 years");
    if (!(spec.noise_sd >= 0.0) || !(spec.unit_offset_sd >= 0.0) || !(spec.ndvi_noise >= 0.0) ||
        spec.ndvi_noise > 0.05) {
        fail(ErrorCode::InfeasibleSpec, "noise parameters out of range");
    }
    if (spec.crop.empty() || spec.crop.find(',') != std::string::npos) {
        fail(ErrorCode::InfeasibleSpec, "crop name must be nonempty without commas");
    }
    const SeasonWindow& w = spec.season;
    if (w.sos < 1 || w.sos > 36 || w.eos < 1 || w.eos > 36 || w.length() < 3) {
        fail(ErrorCode::InfeasibleSpec, "invalid season window");
    }
    const double t_sos =
        static_cast<double>(w.first_dekad(spec.first_year).ordinal() - DekadIndex{spec.first_year - 1, kSpanStart}.ordinal());
    const double t_eos =
        static_cast<double>(w.last_dekad(spec.first_year).ordinal() - DekadIndex{spec.first_year - 1, kSpanStart}.ordinal());
    const double shift = std::log(4.0) / kSlope;
    if (t_sos < 2.0 || t_eos > 33.0 || (t_eos - shift) - (t_sos + shift) < 2.0) {
        fail(ErrorCode::InfeasibleSpec, "season window does not fit the September-to-August NDVI axis");
    }

    const int n_months = w.n_months();
    const int h_first = spec.first_year - 1;
    const int h_last = spec.last_year + 1;
    const DekadIndex d_first{spec.first_year - 1, 1};
    const DekadIndex d_last{spec.last_year, kDekadsPerYear};

    std::vector<AdminUnit> units;
    std::vector<DekadalSeries> series;
    Truth truth;
    truth.law = spec.law;

    Rng unit_rng(derive_seed(spec.seed, "units"));
    for (int u = 0; u < spec.n_units; ++u) {
        AdminUnit a;
        a.id = unit_id(u);
        a.name = "Unit_" + a.id.substr(1);
        a.production_weight = csv::quantize(unit_rng.uniform(5000.0, 60000.0));
        units.push_back(a);
        truth.unit_offsets[a.id] = csv::quantize(spec.unit_offset_sd * unit_rng.normal());
    }

    std::vector<YieldRecord> records;
    for (int u = 0; u < spec.n_units; ++u) {
        const auto& id = units[static_cast<std::size_t>(u)].id;
        std::map<Variable, DekadalSeries> s;
        for (auto v : kAllVariables) s[v] = DekadalSeries{id, v, {}};

        // Per-season NDVI shape and weather regime.
        Rng season_rng(derive_seed(spec.seed, "season", {static_cast<std::uint64_t>(u)}));
        std::map<int, phenology::DoubleLogisticParams> shape;
        std::map<int, double> wetness;
        std::map<int, double> warmth;
        for (int h = h_first; h <= h_last; ++h) {
            phenology::DoubleLogisticParams p;
            p.v_base = 0.12;
            p.v_amp = season_rng.uniform(0.25, 0.6);
            p.m1 = kSlope;
            p.m2 = kSlope;
            p.s1 = t_sos + shift + season_rng.uniform(-0.5, 0.5);
            p.s2 = t_eos - shift + season_rng.uniform(-0.5, 0.5);
            shape[h] = p;
            wetness[h] = std::exp(0.35 * season_rng.normal());
            warmth[h] = season_rng.normal();
        }

        Rng ndvi_rng(derive_seed(spec.seed, "ndvi", {static_cast<std::uint64_t>(u)}));
        Rng met_rng(derive_seed(spec.seed, "meteo", {static_cast<std::uint64_t>(u)}));
        for (long o = d_first.ordinal(); o <= d_last.ordinal(); ++o) {
            const auto d = DekadIndex::from_ordinal(o);
            const int h = harvest_year_of(d);
            const double ndvi = phenology::eval_double_logistic(shape[h], season_t(d)) +
                                ndvi_rng.uniform(-spec.ndvi_noise, spec.ndvi_noise);
            s[Variable::NDVI].samples[d] = csv::quantize(std::clamp(ndvi, -0.2, 1.0));

            const double rain_mean = 12.0 * (1.0 + wave(d.dekad, 2)) + 2.0;
            const double rain = rain_mean * wetness[h] * -std::log(1.0 - met_rng.uniform());
            s[Variable::Rain].samples[d] = csv::quantize(rain);

            const double t = 17.0 - 9.0 * wave(d.dekad, 3) + warmth[h] + met_rng.normal();
            const double tmin = t - 6.0 - std::abs(met_rng.normal());
            const double tmax = t + 7.0 + std::abs(met_rng.normal());
            s[Variable::T].samples[d] = csv::quantize(t);
            s[Variable::Tmin].samples[d] = csv::quantize(tmin);
            s[Variable::Tmax].samples[d] = csv::quantize(tmax);

            const double rad = 17.0 + 8.0 * wave(d.dekad, 18) + 1.5 * met_rng.normal();
            s[Variable::Rad].samples[d] = csv::quantize(std::max(0.0, rad));
        }

        Rng yield_rng(derive_seed(spec.seed, "yield", {static_cast<std::uint64_t>(u)}));
        std::vector<YieldRecord> unit_records;
        for (int year = spec.first_year; year <= spec.last_year; ++year) {
            const double peak = month_max(s[Variable::NDVI], w, year, 1, n_months);
            const int k_lo = std::min(4, n_months);
            const int k_hi = std::min(6, n_months);
            const double spring = month_sum(s[Variable::Rain], w, year, k_lo, k_hi);
            const double offset = truth.unit_offsets[id];
            double signal = 0.0;
            if (spec.law == Law::PeakLinear) {
                signal = spec.slope * peak + spec.intercept + offset;
            } else {
                signal = spec.base + spec.rain_coef * std::log1p(spring / 50.0) + spec.ndvi_coef * peak + offset;
            }
            double y = 0.0;
            int tries = 0;
            do {
                if (++tries > 1000) {
                    fail(ErrorCode::InfeasibleSpec, "no positive yield could be drawn for " + id + " " +
                                                        std::to_string(year));
                }
                y = csv::quantize(signal + spec.noise_sd * yield_rng.normal());
            } while (!(y > 0.0));
            truth.signal[{id, year}] = signal;
            truth.peak_ndvi[{id, year}] = peak;
            truth.spring_rain[{id, year}] = spring;
            unit_records.push_back(YieldRecord{id, year, y});
        }
        if (spec.law == Law::PureNoise) {
            Rng perm(derive_seed(spec.seed, "permute", {static_cast<std::uint64_t>(u)}));
            for (std::size_t i = unit_records.size() - 1; i > 0; --i) {
                std::swap(unit_records[i].yield, unit_records[perm.below(i + 1)].yield);
            }
        }
        records.insert(records.end(), unit_records.begin(), unit_records.end());
        for (auto v : kAllVariables) series.push_back(std::move(s[v]));
    }

    Scenario out;
    out.dataset = Dataset(units, series, YieldTable{spec.crop, records}, w);
    out.csv = serialize_dataset(out.dataset);
    out.truth = truth;

    nlohmann::ordered_json j;
    j["law"] = std::string(to_string(spec.law));
    j["seed"] = spec.seed;
    j["crop"] = spec.crop;
    j["n_units"] = spec.n_units;
    j["years"] = {spec.first_year, spec.last_year};
    j["season"] = {{"sos", w.sos}, {"eos", w.eos}};
    j["noise_sd"] = spec.noise_sd;
    j["unit_offset_sd"] = spec.unit_offset_sd;
    j["ndvi_noise"] = spec.ndvi_noise;
    if (spec.law == Law::PeakLinear) {
        j["formula"] = "yield = slope * peak_ndvi + intercept + unit_offset + e";
        j["coefficients"] = {{"slope", spec.slope}, {"intercept", spec.intercept}};
    } else {
        j["formula"] = "yield = base + rain_coef * ln(1 + spring_rain / 50) + ndvi_coef * peak_ndvi + unit_offset + e";
        j["coefficients"] = {{"base", spec.base}, {"rain_coef", spec.rain_coef}, {"ndvi_coef", spec.ndvi_coef}};
        j["spring_months"] = {std::min(4, n_months), std::min(6, n_months)};
        if (spec.law == Law::PureNoise) j["permuted_across_years"] = true;
    }
    j["peak_months"] = {1, n_months};
    j["unit_offsets"] = truth.unit_offsets;
    j["ndvi_shape"] = {{"v_base", 0.12}, {"v_amp_range", {0.25, 0.6}}, {"slope", kSlope},
                       {"timing_jitter_dekads", 0.5}};
    out.truth_json = j.dump(2) + "\n";
    return out;
}

}  // namespace yieldcast::synth
