#pragma once

#include "yieldcast/model_defaults.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace yieldcast::models {

enum class AlgorithmId { LASSO, RF, SVR_lin, SVR_rbf, GBR, MLP, Null, PeakNdvi };
inline constexpr AlgorithmId kMlAlgorithms[] = {AlgorithmId::LASSO,   AlgorithmId::RF,  AlgorithmId::SVR_lin,
                                                AlgorithmId::SVR_rbf, AlgorithmId::GBR, AlgorithmId::MLP};

std::string_view to_string(AlgorithmId a);
// Case-insensitive; accepts e.g. "lasso", "svr_lin", "null", "peak_ndvi".
std::optional<AlgorithmId> parse_algorithm(std::string_view name);
bool is_benchmark(AlgorithmId a);

using ParamValue = std::variant<double, long, std::string, std::vector<int>>;

// One point of a hyperparameter grid, in grid order of its names.
struct Assignment {
    std::vector<std::pair<std::string, ParamValue>> values;

    const ParamValue& get(std::string_view name) const;
    double real(std::string_view name) const;
    long integer(std::string_view name) const;
    const std::string& text(std::string_view name) const;
    const std::vector<int>& layers(std::string_view name) const;

    // Stable "name=value;..." rendering used in reports and manifests.
    std::string to_string() const;

    bool operator==(const Assignment&) const = default;
};

enum class GbrGrid { Explicit, Compact };

std::vector<double> logspace(double lo_exp, double hi_exp, int n);

// Full cartesian product in deterministic order (first parameter slowest).
std::vector<Assignment> enumerate_grid(AlgorithmId a, GbrGrid gbr_grid = GbrGrid::Explicit);

// Rendering of the parameters that affect the fitted model; SVR_lin ignores
// gamma, so its grid points collapse onto (C, epsilon) pairs.
std::string effective_key(AlgorithmId a, const Assignment& h);

// Split fractions become row counts: max(floor, round(fraction * n_train)).
int min_split_count(double fraction, long n_train, int floor = 2);

class Regressor {
public:
    virtual ~Regressor() = default;
    virtual Eigen::VectorXd predict(const Eigen::MatrixXd& x) const = 0;
    // Named scalars describing the fitted state (coefficients etc.); may be empty.
    virtual std::vector<std::pair<std::string, double>> summary() const { return {}; }
};

struct TrainedModel {
    AlgorithmId algorithm = AlgorithmId::LASSO;
    Assignment hyperparameters;
    std::uint64_t seed = 0;
    Eigen::Index n_features = 0;
    bool converged = true;
    std::shared_ptr<const Regressor> model;

    // Throws SchemaMismatch when x has a different column count.
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;
};

// Throws SingularFit for fewer than 2 rows or non-finite inputs. Iteration
// caps never throw; they clear `converged`.
TrainedModel fit(AlgorithmId a, const Assignment& h, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 std::uint64_t seed, const ModelDefaults& defaults = builtin_defaults());

// --- individual learners, exposed for tests -------------------------------

struct LassoFit {
    Eigen::VectorXd coef;
    double intercept = 0.0;
    int iterations = 0;
    bool converged = true;
};
LassoFit fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                   const ModelDefaults::Lasso& options);

// --- benchmarks -----------------------------------------------------------

// Per-unit mean of the training yields.
class NullModel {
public:
    void fit(const std::vector<std::string>& units, const Eigen::VectorXd& yields);
    double predict(const std::string& unit) const;  // throws UnknownUnit
    const std::map<std::string, double>& means() const { return means_; }

private:
    std::map<std::string, double> means_;
};

struct PeakLine {
    double slope = 0.0;
    double intercept = 0.0;
    bool degenerate = false;  // all peaks equal: intercept holds the mean yield
};

// Ordinary least squares yield = slope * peak + intercept for one unit.
// Equal peaks fall back to the mean yield with `degenerate` set.
PeakLine fit_peak_ndvi(const Eigen::VectorXd& peaks, const Eigen::VectorXd& yields);
double predict_peak_ndvi(const PeakLine& line, double peak);

}  // namespace yieldcast::models
