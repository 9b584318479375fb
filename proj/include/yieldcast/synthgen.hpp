#pragma once

#include "yieldcast/timeseries.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace yieldcast::synth {

enum class Law { PeakLinear, MeteoModulated, PureNoise };

std::string_view to_string(Law law);
std::optional<Law> parse_law(std::string_view name);  // e.g. "PEAK_LINEAR", "peak_linear"

struct ScenarioSpec {
    int n_units = 5;
    int first_year = 2002;
    int last_year = 2018;
    SeasonWindow season;
    Law law = Law::PeakLinear;
    double noise_sd = 0.05;         // t/ha
    double unit_offset_sd = 0.2;    // t/ha
    double ndvi_noise = 0.005;      // half-width of the uniform NDVI noise
    std::uint64_t seed = 1;
    std::string crop = "barley";

    // PEAK_LINEAR: yield = slope * peak + intercept + offset + e
    double slope = 3.0;
    double intercept = -0.4;

    // METEO_MODULATED: yield = base + rain_coef * ln(1 + spring_rain / 50)
    //                        + ndvi_coef * peak + offset + e
    double base = 0.2;
    double rain_coef = 0.5;
    double ndvi_coef = 1.5;
};

struct Truth {
    Law law = Law::PeakLinear;
    std::map<std::string, double> unit_offsets;
    // Noise-free part of each yield, keyed by (unit, year).
    std::map<std::pair<std::string, int>, double> signal;
    std::map<std::pair<std::string, int>, double> peak_ndvi;
    std::map<std::pair<std::string, int>, double> spring_rain;
};

struct Scenario {
    Dataset dataset;
    DatasetCsv csv;
    Truth truth;
    std::string truth_json;
};

// Deterministic in the seed. Every emitted value is already rounded to the
// written precision, so parsing the CSVs reproduces `dataset`. Throws
// InfeasibleSpec for invalid sizes or when no positive yield can be drawn.
Scenario generate(const ScenarioSpec& spec);

}  // namespace yieldcast::synth
