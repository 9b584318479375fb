#pragma once

#include "yieldcast/models.hpp"
#include "yieldcast/rng.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace yieldcast::models {

struct TreeOptions {
    int max_depth = 10;
    int min_samples_split = 2;
    int min_samples_leaf = 1;
    int max_features = 0;  // 0 = all columns
};

// CART regression tree with squared-error splits.
class RegressionTree {
public:
    // `rows` indexes into x/y and may repeat (bootstrap draws).
    void fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::span<const int> rows, const TreeOptions& options,
             Rng& rng);
    double predict_row(const Eigen::MatrixXd& x, Eigen::Index row) const;
    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const;

    std::size_t node_count() const { return nodes_.size(); }
    int depth() const;

private:
    struct Node {
        int feature = -1;  // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        double value = 0.0;
    };

    int build(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, std::vector<int>& rows, int depth,
              const TreeOptions& options, Rng& rng);

    std::vector<Node> nodes_;
};

std::shared_ptr<const Regressor> fit_random_forest(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, int n_trees,
                                                   const TreeOptions& options, bool bootstrap, std::uint64_t seed);

std::shared_ptr<const Regressor> fit_gradient_boosting(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                                       int n_stages, double learning_rate, const TreeOptions& options,
                                                       std::uint64_t seed);

}  // namespace yieldcast::models
