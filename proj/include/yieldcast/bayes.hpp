#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace yieldcast::bayes {

// Student-t posterior over the mean paired difference.
struct Posterior {
    double location = 0.0;
    double scale = 0.0;
    int dof = 1;
    bool point_mass = false;  // zero-variance differences: all mass at `location`
};

// location = mean(d), dof = n - 1, scale = sd(d) * sqrt(1/n + rho / (1 - rho)),
// sd with the n - 1 denominator. Throws InvalidConfig for n < 2, non-finite
// values or rho outside [0, 1).
Posterior correlated_t_posterior(std::span<const double> d, double rho);

struct RopeProbabilities {
    double p_smaller = 0.0;     // mean difference < -delta
    double p_equivalent = 0.0;  // inside (-delta, delta)
    double p_larger = 0.0;      // mean difference > delta
};

RopeProbabilities rope_probabilities(const Posterior& posterior, double delta);

enum class Verdict { Larger, Equivalent, Smaller, Inconclusive };
std::string_view to_string(Verdict v);

Verdict verdict(const RopeProbabilities& p, double confidence = 0.9);

struct CompareOptions {
    double delta = 5.0;  // rRMSE percentage points
    double confidence = 0.9;
    std::optional<double> rho;  // default: test fraction 1/n
};

// Per-fold rRMSE_p of one model keyed by held-out year.
struct FoldSeries {
    std::string model;
    std::map<int, double> by_year;
};

struct Decision {
    std::string model_a;
    std::string model_b;
    Posterior posterior;
    RopeProbabilities probabilities;
    Verdict verdict = Verdict::Inconclusive;
};

// Differences a - b per year. Throws MisalignedFolds when the year sets differ.
Decision compare(const FoldSeries& a, const FoldSeries& b, const CompareOptions& options = {});

// Each rival against the best model, with model_a = rival and model_b = best,
// so a rival that is worse than the best yields Larger.
std::vector<Decision> comparison_matrix(const FoldSeries& best, const std::vector<FoldSeries>& rivals,
                                        const CompareOptions& options = {});

}  // namespace yieldcast::bayes
