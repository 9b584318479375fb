#include "yieldcast/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace yieldcast::models {

void RegressionTree::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const int> rows,
                         const TreeOptions& options, Rng& rng) {
    nodes_.clear();
    std::vector<int> work(rows.begin(), rows.end());
    build(x, y, work, 0, options, rng);
}

int RegressionTree::build(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<int>& rows, int depth,
                          const TreeOptions& options, Rng& rng) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    const auto n = static_cast<int>(rows.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int r : rows) {
        sum += y[r];
        sum_sq += y[r] * y[r];
    }
    const double mean = sum / n;
    nodes_[static_cast<std::size_t>(id)].value = mean;
    const double sse = sum_sq - sum * mean;
    if (depth >= options.max_depth || n < options.min_samples_split || n < 2 * options.min_samples_leaf ||
        sse <= 1e-12 * std::max(1.0, sum_sq)) {
        return id;
    }

    const auto p = static_cast<int>(x.cols());
    std::vector<int> features(static_cast<std::size_t>(p));
    std::iota(features.begin(), features.end(), 0);
    int n_candidates = p;
    if (options.max_features > 0 && options.max_features < p) {
        n_candidates = options.max_features;
        for (int i = 0; i < n_candidates; ++i) {
            const auto j = i + static_cast<int>(rng.below(static_cast<std::size_t>(p - i)));
            std::swap(features[static_cast<std::size_t>(i)], features[static_cast<std::size_t>(j)]);
        }
    }

    double best_gain = -1.0;
    int best_feature = -1;
    double best_threshold = 0.0;
    std::vector<int> order(rows);
    const double parent_term = sum * mean;
    for (int c = 0; c < n_candidates; ++c) {
        const int f = features[static_cast<std::size_t>(c)];
        std::sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
        double left_sum = 0.0;
        for (int i = 0; i < n - 1; ++i) {
            left_sum += y[order[static_cast<std::size_t>(i)]];
            const int n_left = i + 1;
            const int n_right = n - n_left;
            if (n_left < options.min_samples_leaf || n_right < options.min_samples_leaf) continue;
            const double lo = x(order[static_cast<std::size_t>(i)], f);
            const double hi = x(order[static_cast<std::size_t>(i + 1)], f);
            if (!(lo < hi)) continue;
            const double right_sum = sum - left_sum;
            const double gain = left_sum * left_sum / n_left + right_sum * right_sum / n_right - parent_term;
            if (gain > best_gain) {
                best_gain = gain;
                best_feature = f;
                best_threshold = 0.5 * (lo + hi);
                if (best_threshold >= hi) best_threshold = lo;
            }
        }
    }
    if (best_feature < 0) return id;

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    for (int r : rows) (x(r, best_feature) <= best_threshold ? left_rows : right_rows).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int left = build(x, y, left_rows, depth + 1, options, rng);
    const int right = build(x, y, right_rows, depth + 1, options, rng);
    auto& node = nodes_[static_cast<std::size_t>(id)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left;
    node.right = right;
    return id;
}

double RegressionTree::predict_row(const Eigen::MatrixXd& x, Eigen::Index row) const {
    int i = 0;
    while (nodes_[static_cast<std::size_t>(i)].feature >= 0) {
        const auto& n = nodes_[static_cast<std::size_t>(i)];
        i = x(row, n.feature) <= n.threshold ? n.left : n.right;
    }
    return nodes_[static_cast<std::size_t>(i)].value;
}

Eigen::VectorXd RegressionTree::predict(const Eigen::MatrixXd& x) const {
    Eigen::VectorXd out(x.rows());
    for (Eigen::Index r = 0; r < x.rows(); ++r) out[r] = predict_row(x, r);
    return out;
}

int RegressionTree::depth() const {
    std::vector<int> d(nodes_.size(), 0);
    int deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& n = nodes_[i];
        if (n.feature < 0) continue;
        d[static_cast<std::size_t>(n.left)] = d[i] + 1;
        d[static_cast<std::size_t>(n.right)] = d[i] + 1;
        deepest = std::max(deepest, d[i] + 1);
    }
    return deepest;
}

namespace {

class Forest final : public Regressor {
public:
    explicit Forest(std::vector<RegressionTree> trees) : trees_(std::move(trees)) {}

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override {
        Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
        for (const auto& t : trees_) out += t.predict(x);
        return out / static_cast<double>(trees_.size());
    }

private:
    std::vector<RegressionTree> trees_;
};

class Boosting final : public Regressor {
public:
    Boosting(double init, double rate, std::vector<RegressionTree> stages)
        : init_(init), rate_(rate), stages_(std::move(stages)) {}

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override {
        Eigen::VectorXd out = Eigen::VectorXd::Constant(x.rows(), init_);
        for (const auto& t : stages_) out += rate_ * t.predict(x);
        return out;
    }

    std::vector<std::pair<std::string, double>> summary() const override {
        return {{"init", init_}, {"stages", static_cast<double>(stages_.size())}};
    }

private:
    double init_;
    double rate_;
    std::vector<RegressionTree> stages_;
};

}  // namespace

std::shared_ptr<const Regressor> fit_random_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_trees,
                                                   const TreeOptions& options, bool bootstrap, std::uint64_t seed) {
    const auto n = static_cast<int>(x.rows());
    Rng rng(seed);
    std::vector<RegressionTree> trees(static_cast<std::size_t>(n_trees));
    std::vector<int> rows(static_cast<std::size_t>(n));
    for (auto& tree : trees) {
        if (bootstrap) {
            for (auto& r : rows) r = static_cast<int>(rng.below(static_cast<std::size_t>(n)));
        } else {
            std::iota(rows.begin(), rows.end(), 0);
        }
        tree.fit(x, y, rows, options, rng);
    }
    return std::make_shared<Forest>(std::move(trees));
}

std::shared_ptr<const Regressor> fit_gradient_boosting(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                                       int n_stages, double learning_rate, const TreeOptions& options,
                                                       std::uint64_t seed) {
    const auto n = static_cast<int>(x.rows());
    Rng rng(seed);
    const double init = y.mean();
    Eigen::VectorXd f = Eigen::VectorXd::Constant(n, init);
    std::vector<int> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), 0);
    std::vector<RegressionTree> stages(static_cast<std::size_t>(n_stages));
    for (auto& tree : stages) {
        const Eigen::VectorXd residual = y - f;
        tree.fit(x, residual, rows, options, rng);
        f += learning_rate * tree.predict(x);
    }
    return std::make_shared<Boosting>(init, learning_rate, std::move(stages));
}

}  // namespace yieldcast::models
