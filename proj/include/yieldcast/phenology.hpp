#pragma once

#include "yieldcast/timeseries.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace yieldcast::phenology {

// Symmetric-sum double logistic:
//   v(t) = v_base + v_amp * (sig(m1 (t - s1)) + sig(-m2 (t - s2)) - 1)
struct DoubleLogisticParams {
    double v_base = 0.0;
    double v_amp = 1.0;
    double s1 = 0.0;  // ascending inflection (dekads on the fit axis)
    double m1 = 1.0;
    double s2 = 1.0;  // descending inflection
    double m2 = 1.0;

    bool valid() const { return v_amp > 0.0 && s1 < s2 && m1 > 0.0 && m2 > 0.0; }
};

double eval_double_logistic(const DoubleLogisticParams& p, double t);

struct FitOptions {
    double amplitude_floor = 0.05;
    int max_iterations = 500;
    double step_tolerance = 1e-8;
    double amp_min = 0.01;
    double amp_max = 1.2;
    double slope_min = 0.05;
    double slope_max = 10.0;
};

struct FitResult {
    DoubleLogisticParams params;
    double rmse = 0.0;
    int iterations = 0;
};

// Bounded Levenberg-Marquardt least squares. Throws NoSeasonality when the
// raw range is below the amplitude floor (or fewer than 12 samples), and
// NonConvergence when the iteration budget runs out.
FitResult fit_double_logistic(std::span<const double> ndvi, std::span<const double> t_axis,
                              const FitOptions& options = {});

// Threshold crossings of the ascending and descending branches, closed form:
//   sos = s1 + ln(theta / (1 - theta)) / m1,  eos = s2 - ln(theta / (1 - theta)) / m2
// Throws DegenerateSeason when s2 - s1 < 1/m1 + 1/m2.
std::pair<double, double> extract_sos_eos(const DoubleLogisticParams& p, double threshold = 0.2);

// Circular mean on the 36-dekad year, rounded to whole dekads, with the
// circular spread (dekads) as sd.
SeasonWindow average_season(const std::vector<std::pair<double, double>>& windows);

struct PhenologyRecord {
    std::string unit;
    int harvest_year = 0;
    double sos_dekad = 0.0;  // fractional dekad of year
    double eos_dekad = 0.0;
    double fit_rmse = 0.0;
    bool ok = false;
    std::string error;  // set when the fit was skipped
};

struct DetectOptions {
    FitOptions fit;
    double threshold = 0.2;
    // First dekad of the 36-dekad fitting span; the span starts in harvest_year - 1.
    int span_start_dekad = 25;
};

struct DetectResult {
    std::vector<PhenologyRecord> records;
    SeasonWindow window;
};

// Fits every (unit, harvest year) of the yield table and averages the windows.
// Throws NoSeasonality if no fit succeeds.
DetectResult detect_season(const Dataset& ds, const DetectOptions& options = {});

std::string phenology_csv(const std::vector<PhenologyRecord>& records);

}  // namespace yieldcast::phenology
