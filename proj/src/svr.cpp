#include "yieldcast/svr.hpp"

#include <cmath>
#include <limits>

namespace yieldcast::models {

namespace {

constexpr double kTau = 1e-12;

}  // namespace

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, const SvrKernel& k) {
    Eigen::MatrixXd g = a * b.transpose();
    if (k.type == SvrKernel::Linear) return g;
    const Eigen::VectorXd na = a.rowwise().squaredNorm();
    const Eigen::VectorXd nb = b.rowwise().squaredNorm();
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            const double d2 = std::max(0.0, na[i] + nb[j] - 2.0 * g(i, j));
            g(i, j) = std::exp(-k.gamma * d2);
        }
    }
    return g;
}

// Dual of epsilon-SVR over 2l variables (alpha, alpha*) solved by SMO with
// second-order working set selection. Variable t < l carries sign +1 and
// kernel row t; variable t >= l carries sign -1 and kernel row t - l.
SvrSolution solve_svr(const Eigen::MatrixXd& kernel, const Eigen::VectorXd& target, double c, double epsilon,
                      double tol, long max_iter) {
    const Eigen::Index l = target.size();
    Eigen::VectorXd a_pos = Eigen::VectorXd::Zero(l);  // alpha
    Eigen::VectorXd a_neg = Eigen::VectorXd::Zero(l);  // alpha*
    Eigen::VectorXd g_pos = epsilon - target.array();
    Eigen::VectorXd g_neg = epsilon + target.array();
    const Eigen::VectorXd kd = kernel.diagonal();
    constexpr double inf = std::numeric_limits<double>::infinity();

    SvrSolution sol;
    sol.converged = false;
    long iter = 0;
    for (; iter < max_iter; ++iter) {
        // i: maximal violator among the "up" set.
        double gmax = -inf;
        Eigen::Index i_sel = -1;
        int s_i = 0;
        for (Eigen::Index t = 0; t < l; ++t) {
            if (a_pos[t] < c && -g_pos[t] >= gmax) {
                gmax = -g_pos[t];
                i_sel = t;
                s_i = 1;
            }
        }
        for (Eigen::Index t = 0; t < l; ++t) {
            if (a_neg[t] > 0.0 && g_neg[t] >= gmax) {
                gmax = g_neg[t];
                i_sel = t;
                s_i = -1;
            }
        }
        if (i_sel < 0) {
            sol.converged = true;
            break;
        }
        const double* ki = kernel.col(i_sel).data();
        const double kii = kd[i_sel];

        // j: second-order choice among the "low" set.
        double gmax2 = -inf;
        double obj_min = inf;
        Eigen::Index j_sel = -1;
        int s_j = 0;
        for (Eigen::Index t = 0; t < l; ++t) {
            if (a_pos[t] > 0.0) {
                gmax2 = std::max(gmax2, g_pos[t]);
                const double diff = gmax + g_pos[t];
                if (diff > 0.0) {
                    double quad = kii + kd[t] - 2.0 * ki[t];
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= obj_min) {
                        obj_min = obj;
                        j_sel = t;
                        s_j = 1;
                    }
                }
            }
        }
        for (Eigen::Index t = 0; t < l; ++t) {
            if (a_neg[t] < c) {
                gmax2 = std::max(gmax2, -g_neg[t]);
                const double diff = gmax - g_neg[t];
                if (diff > 0.0) {
                    double quad = kii + kd[t] - 2.0 * ki[t];
                    if (quad <= 0.0) quad = kTau;
                    const double obj = -(diff * diff) / quad;
                    if (obj <= obj_min) {
                        obj_min = obj;
                        j_sel = t;
                        s_j = -1;
                    }
                }
            }
        }
        if (gmax + gmax2 < tol || j_sel < 0) {
            sol.converged = true;
            break;
        }

        double& ai = s_i == 1 ? a_pos[i_sel] : a_neg[i_sel];
        double& aj = s_j == 1 ? a_pos[j_sel] : a_neg[j_sel];
        const double gi = s_i == 1 ? g_pos[i_sel] : g_neg[i_sel];
        const double gj = s_j == 1 ? g_pos[j_sel] : g_neg[j_sel];
        const double old_i = ai;
        const double old_j = aj;
        const double qij = s_i * s_j * ki[j_sel];
        const double kjj = kd[j_sel];
        if (s_i != s_j) {
            double quad = kii + kjj + 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-gi - gj) / quad;
            const double diff = ai - aj;
            ai += delta;
            aj += delta;
            if (diff > 0.0) {
                if (aj < 0.0) {
                    aj = 0.0;
                    ai = diff;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = -diff;
            }
            if (diff > 0.0) {
                if (ai > c) {
                    ai = c;
                    aj = c - diff;
                }
            } else if (aj > c) {
                aj = c;
                ai = c + diff;
            }
        } else {
            double quad = kii + kjj - 2.0 * qij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (gi - gj) / quad;
            const double sum = ai + aj;
            ai -= delta;
            aj += delta;
            if (sum > c) {
                if (ai > c) {
                    ai = c;
                    aj = sum - c;
                }
            } else if (aj < 0.0) {
                aj = 0.0;
                ai = sum;
            }
            if (sum > c) {
                if (aj > c) {
                    aj = c;
                    ai = sum - c;
                }
            } else if (ai < 0.0) {
                ai = 0.0;
                aj = sum;
            }
        }
        // Q(i, t) = s_i s_t K(i, t): the +1 half moves by v, the -1 half by -v.
        const double wi = s_i * (ai - old_i);
        const double wj = s_j * (aj - old_j);
        const double* kj = kernel.col(j_sel).data();
        for (Eigen::Index t = 0; t < l; ++t) {
            const double v = wi * ki[t] + wj * kj[t];
            g_pos[t] += v;
            g_neg[t] -= v;
        }
    }
    sol.iterations = iter;

    // Offset from free variables, else the midpoint of the feasible interval.
    double ub = inf;
    double lb = -inf;
    double sum_free = 0.0;
    int n_free = 0;
    auto visit = [&](double a, double yg, int sign) {
        if (a >= c) {
            if (sign == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (a <= 0.0) {
            if (sign == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++n_free;
            sum_free += yg;
        }
    };
    for (Eigen::Index t = 0; t < l; ++t) visit(a_pos[t], g_pos[t], 1);
    for (Eigen::Index t = 0; t < l; ++t) visit(a_neg[t], -g_neg[t], -1);
    const double rho = n_free > 0 ? sum_free / n_free : 0.5 * (ub + lb);
    sol.coef = a_pos - a_neg;
    sol.offset = -rho;
    return sol;
}

namespace {

class SvrModel final : public Regressor {
public:
    SvrModel(Eigen::MatrixXd support, SvrKernel kernel, SvrSolution sol)
        : support_(std::move(support)), kernel_(kernel), sol_(std::move(sol)) {
        if (kernel_.type == SvrKernel::Linear) weights_ = support_.transpose() * sol_.coef;
    }

    Eigen::VectorXd predict(const Eigen::MatrixXd& x) const override {
        if (kernel_.type == SvrKernel::Linear) return (x * weights_).array() + sol_.offset;
        return (kernel_matrix(x, support_, kernel_) * sol_.coef).array() + sol_.offset;
    }

    std::vector<std::pair<std::string, double>> summary() const override {
        std::vector<std::pair<std::string, double>> out{{"intercept", sol_.offset}};
        if (kernel_.type == SvrKernel::Linear) {
            for (Eigen::Index j = 0; j < weights_.size(); ++j) out.emplace_back("w" + std::to_string(j), weights_[j]);
        }
        return out;
    }

private:
    Eigen::MatrixXd support_;
    SvrKernel kernel_;
    SvrSolution sol_;
    Eigen::VectorXd weights_;
};

}  // namespace

std::shared_ptr<const Regressor> fit_svr(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const SvrKernel& kernel,
                                         double c, double epsilon, const ModelDefaults::Svr& options,
                                         bool& converged) {
    const Eigen::MatrixXd k = kernel_matrix(x, x, kernel);
    auto sol = solve_svr(k, y, c, epsilon, options.tol, options.max_iter);
    converged = sol.converged;
    return std::make_shared<SvrModel>(x, kernel, std::move(sol));
}

}  // namespace yieldcast::models
