#pragma once

#include "yieldcast/models.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace yieldcast::models {

enum class MlpActivation { Relu, Tanh };

struct MlpSettings {
    std::vector<int> hidden;
    MlpActivation activation = MlpActivation::Relu;
    double alpha = 1e-4;   // L2 penalty
    bool adaptive = false; // halve the rate on loss plateaus
};

struct MlpTrace {
    std::vector<double> losses;  // per epoch
    int epochs = 0;
    bool converged = false;  // early-stopped before max_epochs
    double final_learning_rate = 0.0;
};

std::shared_ptr<const Regressor> fit_mlp(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                         const MlpSettings& settings, const ModelDefaults::Mlp& options,
                                         std::uint64_t seed, MlpTrace* trace = nullptr);

}  // namespace yieldcast::models
