#include "yieldcast/bayes.hpp"

#include "yieldcast/error.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>

namespace yieldcast::bayes {

Posterior correlated_t_posterior(std::span<const double> d, double rho) {
    if (d.size() < 2) fail(ErrorCode::InvalidConfig, "need at least 2 paired differences");
    if (!(rho >= 0.0 && rho < 1.0)) fail(ErrorCode::InvalidConfig, "rho must lie in [0, 1)");
    double mean = 0.0;
    for (double v : d) {
        if (!std::isfinite(v)) fail(ErrorCode::InvalidConfig, "non-finite paired difference");
        mean += v;
    }
    const double n = static_cast<double>(d.size());
    mean /= n;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));

    Posterior p;
    p.location = mean;
    p.dof = static_cast<int>(d.size()) - 1;
    p.scale = sd * std::sqrt(1.0 / n + rho / (1.0 - rho));
    p.point_mass = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    if (p.point_mass) p.scale = 0.0;
    return p;
}

RopeProbabilities rope_probabilities(const Posterior& posterior, double delta) {
    if (!(delta > 0.0)) fail(ErrorCode::InvalidConfig, "ROPE half-width must be positive");
    RopeProbabilities r;
    const double m = posterior.location;
    if (posterior.point_mass) {
        if (m <= -delta) {
            r.p_smaller = 1.0;
        } else if (m >= delta) {
            r.p_larger = 1.0;
        } else {
            r.p_equivalent = 1.0;
        }
        return r;
    }
    const boost::math::students_t dist(static_cast<double>(posterior.dof));
    r.p_smaller = boost::math::cdf(dist, (-delta - m) / posterior.scale);
    r.p_larger = boost::math::cdf(dist, (m - delta) / posterior.scale);
    r.p_equivalent = 1.0 - r.p_smaller - r.p_larger;
    if (r.p_equivalent < 0.0) r.p_equivalent = 0.0;
    return r;
}

std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::Larger: return "Larger";
    case Verdict::Equivalent: return "Equivalent";
    case Verdict::Smaller: return "Smaller";
    case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Verdict verdict(const RopeProbabilities& p, double confidence) {
    if (p.p_larger >= confidence) return Verdict::Larger;
    if (p.p_equivalent >= confidence) return Verdict::Equivalent;
    if (p.p_smaller >= confidence) return Verdict::Smaller;
    return Verdict::Inconclusive;
}

Decision compare(const FoldSeries& a, const FoldSeries& b, const CompareOptions& options) {
    if (a.by_year.size() != b.by_year.size()) {
        fail(ErrorCode::MisalignedFolds, "'" + a.model + "' and '" + b.model + "' cover different years");
    }
    std::vector<double> d;
    auto ib = b.by_year.begin();
    for (const auto& [year, va] : a.by_year) {
        if (ib->first != year) {
            fail(ErrorCode::MisalignedFolds, "'" + a.model + "' and '" + b.model + "' cover different years");
        }
        d.push_back(va - ib->second);
        ++ib;
    }
    Decision out;
    out.model_a = a.model;
    out.model_b = b.model;
    const double rho = options.rho.value_or(1.0 / static_cast<double>(d.size()));
    out.posterior = correlated_t_posterior(d, rho);
    out.probabilities = rope_probabilities(out.posterior, options.delta);
    out.verdict = verdict(out.probabilities, options.confidence);
    return out;
}

std::vector<Decision> comparison_matrix(const FoldSeries& best, const std::vector<FoldSeries>& rivals,
                                        const CompareOptions& options) {
    std::vector<Decision> out;
    out.reserve(rivals.size());
    for (const auto& r : rivals) out.push_back(compare(r, best, options));
    return out;
}

}  // namespace yieldcast::bayes
