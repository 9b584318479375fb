#pragma once

#include "yieldcast/models.hpp"

#include <Eigen/Dense>

#include <memory>

namespace yieldcast::models {

struct SvrKernel {
    enum Type { Linear, Rbf } type = Linear;
    double gamma = 1.0;  // RBF only
};

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const SvrKernel& k);

struct SvrSolution {
    Eigen::VectorXd coef;  // alpha_i - alpha_i^*
    double offset = 0.0;
    long iterations = 0;
    bool converged = true;
};

SvrSolution solve_svr(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& target, double c, double epsilon,
                      double tol, long max_iter);

std::shared_ptr<const Regressor> fit_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrKernel& kernel,
                                         double c, double epsilon, const ModelDefaults::Svr& options,
                                         bool& converged);

}  // namespace yieldcast::models
