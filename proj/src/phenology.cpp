#include "yieldcast/phenology.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace yieldcast::phenology {

namespace {

constexpr int kParams = 6;
using Vec6 = Eigen::Matrix<double, kParams, 1>;
using Mat6 = Eigen::Matrix<double, kParams, kParams>;

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

DoubleLogisticParams from_vec(const Vec6& v) {
    return DoubleLogisticParams{v[0], v[1], v[2], v[3], v[4], v[5]};
}

double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const auto hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double sum_squares(std::span<const double> y, std::span<const double> t, const DoubleLogisticParams& p) {
    double ss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = eval_double_logistic(p, t[i]) - y[i];
        ss += r * r;
    }
    return ss;
}

struct Bounds {
    Vec6 lo;
    Vec6 hi;
};

Vec6 project(Vec6 v, const Bounds& b) {
    return v.cwiseMax(b.lo).cwiseMin(b.hi);
}

// Linear-interpolated crossing of `level` between samples i-1 and i.
double crossing(std::span<const double> y, std::span<const double> t, std::size_t i, double level) {
    const double dy = y[i] - y[i - 1];
    if (dy == 0.0) return t[i];
    return t[i - 1] + (level - y[i - 1]) / dy * (t[i] - t[i - 1]);
}

}  // namespace

double eval_double_logistic(const DoubleLogisticParams& p, double t) {
    return p.v_base + p.v_amp * (sigmoid(p.m1 * (t - p.s1)) + sigmoid(-p.m2 * (t - p.s2)) - 1.0);
}

FitResult fit_double_logistic(std::span<const double> ndvi, std::span<const double> t_axis,
                              const FitOptions& options) {
    if (ndvi.size() != t_axis.size()) fail(ErrorCode::SchemaMismatch, "ndvi and time axis lengths differ");
    if (ndvi.size() < 12) fail(ErrorCode::NoSeasonality, "need at least 12 samples");
    for (double v : ndvi) {
        if (!std::isfinite(v)) fail(ErrorCode::NoSeasonality, "non-finite NDVI sample");
    }
    const auto [min_it, max_it] = std::minmax_element(ndvi.begin(), ndvi.end());
    const double range = *max_it - *min_it;
    if (range < options.amplitude_floor) {
        fail(ErrorCode::NoSeasonality, "NDVI range " + csv::format_number(range) + " below floor");
    }

    // Heuristic start: 10th percentile base, full range amplitude, 50% crossings.
    const double level = *min_it + 0.5 * range;
    const auto peak = static_cast<std::size_t>(max_it - ndvi.begin());
    double s1 = t_axis.front();
    double s2 = t_axis.back();
    for (std::size_t i = 1; i <= peak; ++i) {
        if (ndvi[i - 1] < level && ndvi[i] >= level) {
            s1 = crossing(ndvi, t_axis, i, level);
            break;
        }
    }
    for (std::size_t i = ndvi.size() - 1; i > peak; --i) {
        if (ndvi[i - 1] >= level && ndvi[i] < level) {
            s2 = crossing(ndvi, t_axis, i, level);
            break;
        }
    }
    if (!(s1 < s2)) s2 = s1 + 1.0;

    const double span = t_axis.back() - t_axis.front();
    Bounds bounds;
    bounds.lo << -1.0, options.amp_min, t_axis.front() - span, options.slope_min, t_axis.front() - span,
        options.slope_min;
    bounds.hi << 1.0, options.amp_max, t_axis.back() + span, options.slope_max, t_axis.back() + span,
        options.slope_max;

    Vec6 x;
    x << percentile({ndvi.begin(), ndvi.end()}, 0.1), range, s1, 1.0, s2, 1.0;
    x = project(x, bounds);

    const auto n = static_cast<Eigen::Index>(ndvi.size());
    Eigen::Matrix<double, Eigen::Dynamic, kParams> jac(n, kParams);
    Eigen::VectorXd resid(n);
    double cost = sum_squares(ndvi, t_axis, from_vec(x));
    double lambda = 1e-3;
    bool converged = false;
    int iter = 0;
    for (; iter < options.max_iterations; ++iter) {
        const auto p = from_vec(x);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double t = t_axis[static_cast<std::size_t>(i)];
            const double a = sigmoid(p.m1 * (t - p.s1));
            const double d = sigmoid(-p.m2 * (t - p.s2));
            const double da = a * (1.0 - a);
            const double dd = d * (1.0 - d);
            resid[i] = p.v_base + p.v_amp * (a + d - 1.0) - ndvi[static_cast<std::size_t>(i)];
            jac(i, 0) = 1.0;
            jac(i, 1) = a + d - 1.0;
            jac(i, 2) = -p.v_amp * da * p.m1;
            jac(i, 3) = p.v_amp * da * (t - p.s1);
            jac(i, 4) = p.v_amp * dd * p.m2;
            jac(i, 5) = -p.v_amp * dd * (t - p.s2);
        }
        const Mat6 jtj = jac.transpose() * jac;
        const Vec6 grad = jac.transpose() * resid;

        bool accepted = false;
        while (!accepted) {
            Mat6 a = jtj;
            for (int k = 0; k < kParams; ++k) a(k, k) += lambda * std::max(jtj(k, k), 1e-12);
            const Vec6 step = a.ldlt().solve(-grad);
            const Vec6 candidate = project(x + step, bounds);
            const double new_cost = sum_squares(ndvi, t_axis, from_vec(candidate));
            if (std::isfinite(new_cost) && new_cost <= cost) {
                const double moved = (candidate - x).cwiseAbs().maxCoeff();
                x = candidate;
                cost = new_cost;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (moved < options.step_tolerance) converged = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e12) {
                    // No descent direction left: stationary within bounds.
                    converged = true;
                    break;
                }
            }
        }
        if (converged) break;
    }
    if (!converged) {
        fail(ErrorCode::NonConvergence, "double logistic fit exceeded " + std::to_string(options.max_iterations) +
                                            " iterations");
    }
    auto params = from_vec(x);
    if (!(params.s1 < params.s2)) fail(ErrorCode::DegenerateSeason, "fitted inflections out of order");
    return FitResult{params, std::sqrt(cost / static_cast<double>(n)), iter + 1};
}

std::pair<double, double> extract_sos_eos(const DoubleLogisticParams& p, double threshold) {
    if (!(threshold > 0.0 && threshold <= 0.5)) {
        fail(ErrorCode::InvalidConfig, "threshold must be in (0, 0.5]");
    }
    if (p.s2 - p.s1 < 1.0 / p.m1 + 1.0 / p.m2) {
        fail(ErrorCode::DegenerateSeason, "ascending and descending branches overlap");
    }
    const double logit = std::log(threshold / (1.0 - threshold));
    return {p.s1 + logit / p.m1, p.s2 - logit / p.m2};
}

SeasonWindow average_season(const std::vector<std::pair<double, double>>& windows) {
    if (windows.empty()) fail(ErrorCode::NoSeasonality, "no season windows to average");
    constexpr double period = kDekadsPerYear;
    const double w = 2.0 * std::numbers::pi / period;

    auto circular = [&](auto pick) {
        double c = 0.0;
        double s = 0.0;
        for (const auto& win : windows) {
            const double a = w * (pick(win) - 1.0);
            c += std::cos(a);
            s += std::sin(a);
        }
        double mean = std::atan2(s, c) / w;  // (-18, 18]
        if (mean < 0.0) mean += period;
        double ss = 0.0;
        for (const auto& win : windows) {
            double d = std::fmod(pick(win) - 1.0 - mean, period);
            if (d >= period / 2.0) d -= period;
            if (d < -period / 2.0) d += period;
            ss += d * d;
        }
        int dekad = static_cast<int>(std::lround(mean)) % kDekadsPerYear + 1;
        return std::make_pair(dekad, std::sqrt(ss / static_cast<double>(windows.size())));
    };

    const auto [sos, sos_sd] = circular([](const auto& p) { return p.first; });
    const auto [eos, eos_sd] = circular([](const auto& p) { return p.second; });
    return SeasonWindow{sos, eos, sos_sd, eos_sd};
}

DetectResult detect_season(const Dataset& ds, const DetectOptions& options) {
    DetectResult out;
    std::vector<std::pair<double, double>> windows;
    std::vector<double> t_axis(kDekadsPerYear);
    for (int i = 0; i < kDekadsPerYear; ++i) t_axis[static_cast<std::size_t>(i)] = i;

    auto to_doy = [&](double t) {
        double d = std::fmod(options.span_start_dekad - 1 + t, static_cast<double>(kDekadsPerYear));
        if (d < 0.0) d += kDekadsPerYear;
        return d + 1.0;
    };

    for (const auto& r : ds.yields().records) {
        PhenologyRecord rec;
        rec.unit = r.unit;
        rec.harvest_year = r.year;
        try {
            const DekadIndex first{r.year - 1, options.span_start_dekad};
            const auto last = DekadIndex::from_ordinal(first.ordinal() + kDekadsPerYear - 1);
            const auto values = slice_range(ds.series_for(r.unit, Variable::NDVI), first, last);
            const auto fit = fit_double_logistic(values, t_axis, options.fit);
            const auto [sos, eos] = extract_sos_eos(fit.params, options.threshold);
            rec.sos_dekad = to_doy(sos);
            rec.eos_dekad = to_doy(eos);
            rec.fit_rmse = fit.rmse;
            rec.ok = true;
            windows.emplace_back(rec.sos_dekad, rec.eos_dekad);
        } catch (const Error& e) {
            rec.error = std::string(to_string(e.code()));
        }
        out.records.push_back(std::move(rec));
    }
    if (windows.empty()) fail(ErrorCode::NoSeasonality, "no unit-year produced a valid phenology fit");
    out.window = average_season(windows);
    return out;
}

std::string phenology_csv(const std::vector<PhenologyRecord>& records) {
    std::ostringstream os;
    os << "unit_id,harvest_year,sos_dekad,eos_dekad,fit_rmse\n";
    for (const auto& r : records) {
        if (!r.ok) continue;
        os << r.unit << ',' << r.harvest_year << ',' << csv::format_number(r.sos_dekad) << ','
           << csv::format_number(r.eos_dekad) << ',' << csv::format_number(r.fit_rmse) << '\n';
    }
    return os.str();
}

}  // namespace yieldcast::phenology
