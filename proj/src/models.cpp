#include "yieldcast/error.hpp"
#include "yieldcast/mlp.hpp"
#include "yieldcast/models.hpp"
#include "yieldcast/svr.hpp"
#include "yieldcast/trees.hpp"

#include <cmath>

namespace yieldcast::models {

namespace {

class LassoModel final : public Regressor {
public:
    explicit LassoModel(LassoFit fit) : fit_(std::move(fit)) {}

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override {
        return (x * fit_.coef).array() + fit_.intercept;
    }

    std::vector<std::pair<std::string, double>> summary() const override {
        std::vector<std::pair<std::string, double>> out{{"intercept", fit_.intercept}};
        for (Eigen::Index j = 0; j < fit_.coef.size(); ++j) out.emplace_back("w" + std::to_string(j), fit_.coef[j]);
        return out;
    }

private:
    LassoFit fit_;
};

TreeOptions tree_options(const Assignment& h, Eigen::Index n_rows, Eigen::Index n_cols, int min_leaf, int floor) {
    TreeOptions o;
    o.max_depth = static_cast<int>(h.integer("max_depth"));
    o.min_samples_split = min_split_count(h.real("min_samples_split"), static_cast<long>(n_rows), floor);
    o.min_samples_leaf = min_leaf;
    o.max_features = 0;
    for (const auto& [k, v] : h.values) {
        if (k != "max_features") continue;
        if (std::get<std::string>(v) == "sqrt") {
            o.max_features = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n_cols))));
        }
    }
    return o;
}

}  // namespace

Eigen::VectorXd TrainedModel::predict(const Eigen::MatrixXd& x) const {
    if (x.cols() != n_features) {
        fail(ErrorCode::SchemaMismatch, "model trained on " + std::to_string(n_features) + " columns, got " +
                                            std::to_string(x.cols()));
    }
    return model->predict(x);
}

TrainedModel fit(AlgorithmId a, const Assignment& h, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                 std::uint64_t seed, const ModelDefaults& defaults) {
    if (is_benchmark(a)) {
        fail(ErrorCode::InvalidConfig, "benchmarks are fitted per unit, not through the ML fit path");
    }
    if (x.rows() < 2) fail(ErrorCode::SingularFit, "need at least 2 training rows");
    if (x.rows() != y.size()) fail(ErrorCode::SchemaMismatch, "row count differs between X and y");
    if (!x.allFinite() || !y.allFinite()) fail(ErrorCode::SingularFit, "non-finite training data");

    TrainedModel m;
    m.algorithm = a;
    m.hyperparameters = h;
    m.seed = seed;
    m.n_features = x.cols();
    switch (a) {
    case AlgorithmId::LASSO: {
        auto f = fit_lasso(x, y, h.real("alpha"), defaults.lasso);
        m.converged = f.converged;
        m.model = std::make_shared<LassoModel>(std::move(f));
        break;
    }
    case AlgorithmId::SVR_lin:
    case AlgorithmId::SVR_rbf: {
        SvrKernel k;
        k.type = a == AlgorithmId::SVR_lin ? SvrKernel::Linear : SvrKernel::Rbf;
        k.gamma = h.real("gamma");
        bool converged = true;
        m.model = fit_svr(x, y, k, h.real("C"), h.real("epsilon"), defaults.svr, converged);
        m.converged = converged;
        break;
    }
    case AlgorithmId::RF: {
        const auto o = tree_options(h, x.rows(), x.cols(), defaults.rf.min_samples_leaf, defaults.min_split_floor);
        m.model = fit_random_forest(x, y, static_cast<int>(h.integer("n_estimators")), o, defaults.rf.bootstrap, seed);
        break;
    }
    case AlgorithmId::GBR: {
        const auto o = tree_options(h, x.rows(), x.cols(), defaults.gbr.min_samples_leaf, defaults.min_split_floor);
        m.model = fit_gradient_boosting(x, y, static_cast<int>(h.integer("n_estimators")), h.real("learning_rate"), o,
                                        seed);
        break;
    }
    case AlgorithmId::MLP: {
        MlpSettings s;
        s.hidden = h.layers("hidden_layer_sizes");
        s.activation = h.text("activation") == "tanh" ? MlpActivation::Tanh : MlpActivation::Relu;
        s.alpha = h.real("alpha");
        s.adaptive = h.text("learning_rate") == "adaptive";
        MlpTrace trace;
        m.model = fit_mlp(x, y, s, defaults.mlp, seed, &trace);
        m.converged = trace.converged;
        break;
    }
    case AlgorithmId::Null:
    case AlgorithmId::PeakNdvi:
        break;
    }
    return m;
}

}  // namespace yieldcast::models
