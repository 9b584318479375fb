#include "yieldcast/error.hpp"
#include "yieldcast/models.hpp"

namespace yieldcast::models {

void NullModel::fit(const std::vector<std::string>& units, const Eigen::VectorXd& yields) {
    std::map<std::string, std::pair<double, int>> acc;
    for (std::size_t i = 0; i < units.size(); ++i) {
        auto& [sum, n] = acc[units[i]];
        sum += yields[static_cast<Eigen::Index>(i)];
        ++n;
    }
    means_.clear();
    for (const auto& [u, sn] : acc) means_[u] = sn.first / sn.second;
}

double NullModel::predict(const std::string& unit) const {
    const auto it = means_.find(unit);
    if (it == means_.end()) fail(ErrorCode::UnknownUnit, "no training years for unit '" + unit + "'");
    return it->second;
}

PeakLine fit_peak_ndvi(const Eigen::VectorXd& peaks, const Eigen::VectorXd& yields) {
    if (peaks.size() < 1) fail(ErrorCode::UnknownUnit, "no training years for the peak NDVI model");
    const double mp = peaks.mean();
    const double my = yields.mean();
    const Eigen::ArrayXd dp = peaks.array() - mp;
    const double sxx = dp.square().sum();
    PeakLine line;
    if (!(sxx > 1e-24 * std::max(1.0, mp * mp) * static_cast<double>(peaks.size()))) {
        line.degenerate = true;
        line.intercept = my;
        return line;
    }
    line.slope = (dp * (yields.array() - my)).sum() / sxx;
    line.intercept = my - line.slope * mp;
    return line;
}

double predict_peak_ndvi(const PeakLine& line, double peak) {
    return line.slope * peak + line.intercept;
}

}  // namespace yieldcast::models
