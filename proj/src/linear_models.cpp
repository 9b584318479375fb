#include "yieldcast/models.hpp"

#include <cmath>

namespace yieldcast::models {

namespace {

double soft_threshold(double z, double gamma) {
    if (z > gamma) return z - gamma;
    if (z < -gamma) return z + gamma;
    return 0.0;
}

// Primal-dual gap of 0.5 ||r||^2 + alpha_n ||w||_1, from Gram quantities:
// X'r = q - h, ||r||^2 = y'y - 2 w'q + w'h, r'y = y'y - w'q.
double duality_gap(const Eigen::VectorXd& q, const Eigen::VectorXd& h, const Eigen::VectorXd& w, double yy,
                   double alpha_n) {
    const double dual_norm = (q - h).cwiseAbs().maxCoeff();
    const double wq = w.dot(q);
    const double r_norm2 = std::max(0.0, yy - 2.0 * wq + w.dot(h));
    double scale = 1.0;
    double gap = r_norm2;
    if (dual_norm > alpha_n) {
        scale = alpha_n / dual_norm;
        gap = 0.5 * (r_norm2 + r_norm2 * scale * scale);
    }
    return gap + alpha_n * w.lpNorm<1>() - scale * (yy - wq);
}

}  // namespace

LassoFit fit_lasso(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, double alpha,
                   const ModelDefaults::Lasso& options) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    const double nd = static_cast<double>(n);
    const Eigen::RowVectorXd x_mean = x.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - x_mean;
    const Eigen::VectorXd yc = y.array() - y_mean;
    const Eigen::MatrixXd gram = xc.transpose() * xc;
    const Eigen::VectorXd q = xc.transpose() * yc;
    const double yy = yc.squaredNorm();
    const double alpha_n = alpha * nd;
    const double gap_tol = options.tol * yy;

    LassoFit out;
    out.coef = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd h = Eigen::VectorXd::Zero(p);  // gram * coef
    out.converged = false;
    if (p == 0 || yy == 0.0) {
        out.converged = true;
    }
    for (int it = 0; it < options.max_iter && !out.converged; ++it) {
        double max_w = 0.0;
        double max_dw = 0.0;
        for (Eigen::Index j = 0; j < p; ++j) {
            const double gjj = gram(j, j);
            if (gjj == 0.0) continue;
            const double w_old = out.coef[j];
            const double rho = q[j] - h[j] + gjj * w_old;
            const double w_new = soft_threshold(rho, alpha_n) / gjj;
            if (w_new != w_old) {
                h.noalias() += (w_new - w_old) * gram.col(j);
                out.coef[j] = w_new;
            }
            max_dw = std::max(max_dw, std::abs(w_new - w_old));
            max_w = std::max(max_w, std::abs(w_new));
        }
        out.iterations = it + 1;
        if (max_w == 0.0 || max_dw / max_w < options.tol || it == options.max_iter - 1) {
            if (duality_gap(q, h, out.coef, yy, alpha_n) < gap_tol) out.converged = true;
        }
    }
    out.intercept = y_mean - x_mean.dot(out.coef);
    return out;
}

}  // namespace yieldcast::models
