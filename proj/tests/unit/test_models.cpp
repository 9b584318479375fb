#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"
#include "yieldcast/mlp.hpp"
#include "yieldcast/model_defaults.hpp"
#include "yieldcast/models.hpp"
#include "yieldcast/svr.hpp"
#include "yieldcast/trees.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace yieldcast;
using namespace yieldcast::models;
using Catch::Approx;

namespace {

struct Data {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
};

Data linear_data(int n, int p, double noise, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> z;
    Data d{Eigen::MatrixXd(n, p), Eigen::VectorXd(n)};
    for (int i = 0; i < n; ++i) {
        double s = 0.7;
        for (int j = 0; j < p; ++j) {
            d.x(i, j) = z(gen);
            s += (j + 1) * 0.5 * d.x(i, j);
        }
        d.y[i] = s + noise * z(gen);
    }
    return d;
}

Assignment grid_point(AlgorithmId a, std::size_t i) { return enumerate_grid(a).at(i); }

}  // namespace

TEST_CASE("grid sizes") {
    CHECK(enumerate_grid(AlgorithmId::LASSO).size() == 13);
    CHECK(enumerate_grid(AlgorithmId::RF).size() == 252);
    CHECK(enumerate_grid(AlgorithmId::SVR_lin).size() == 392);
    CHECK(enumerate_grid(AlgorithmId::SVR_rbf).size() == 392);
    CHECK(enumerate_grid(AlgorithmId::MLP).size() == 600);
    CHECK(enumerate_grid(AlgorithmId::GBR).size() == 162);
    CHECK(enumerate_grid(AlgorithmId::GBR, GbrGrid::Compact).size() == 54);
    CHECK(enumerate_grid(AlgorithmId::Null).size() == 1);

    const auto lasso = enumerate_grid(AlgorithmId::LASSO);
    CHECK(lasso.front().real("alpha") == Approx(1e-5));
    CHECK(lasso.back().real("alpha") == Approx(1.0));
    const auto ls = logspace(-2, 2, 5);
    CHECK(ls[1] == Approx(0.1));
}

TEST_CASE("algorithm names") {
    CHECK(parse_algorithm("svr_lin") == AlgorithmId::SVR_lin);
    CHECK(parse_algorithm("GBR") == AlgorithmId::GBR);
    CHECK(parse_algorithm("peak_ndvi") == AlgorithmId::PeakNdvi);
    CHECK_FALSE(parse_algorithm("xgboost").has_value());
    CHECK(is_benchmark(AlgorithmId::Null));
    CHECK_FALSE(is_benchmark(AlgorithmId::MLP));
}

TEST_CASE("linear SVR ignores gamma in its effective key") {
    const auto g = enumerate_grid(AlgorithmId::SVR_lin);
    CHECK(effective_key(AlgorithmId::SVR_lin, g[0]) == effective_key(AlgorithmId::SVR_lin, g[56]));
    CHECK(effective_key(AlgorithmId::SVR_rbf, g[0]) != effective_key(AlgorithmId::SVR_rbf, g[56]));
}

TEST_CASE("min split counts") {
    CHECK(min_split_count(0.2, 64) == 13);
    CHECK(min_split_count(0.8, 64) == 51);
    CHECK(min_split_count(0.01, 64) == 2);
}

TEST_CASE("LASSO approaches OLS as alpha vanishes") {
    const auto d = linear_data(60, 4, 0.3, 5);
    Eigen::MatrixXd a(60, 5);
    a << d.x, Eigen::VectorXd::Ones(60);
    const Eigen::VectorXd beta = (a.transpose() * a).ldlt().solve(a.transpose() * d.y);
    ModelDefaults::Lasso opts;
    opts.tol = 1e-12;
    opts.max_iter = 100000;
    const auto fit = fit_lasso(d.x, d.y, 1e-9, opts);
    for (int j = 0; j < 4; ++j) CHECK(fit.coef[j] == Approx(beta[j]).margin(1e-6));
    CHECK(fit.intercept == Approx(beta[4]).margin(1e-6));
}

TEST_CASE("LASSO shrinks to the mean for large alpha and satisfies KKT") {
    const auto d = linear_data(50, 6, 0.5, 9);
    const auto zero = fit_lasso(d.x, d.y, 1e3, builtin_defaults().lasso);
    CHECK(zero.coef.cwiseAbs().maxCoeff() == 0.0);
    CHECK(zero.intercept == Approx(d.y.mean()));

    ModelDefaults::Lasso opts;
    opts.tol = 1e-12;
    opts.max_iter = 100000;
    const double alpha = 0.3;
    const auto fit = fit_lasso(d.x, d.y, alpha, opts);
    const Eigen::VectorXd r = d.y - (d.x * fit.coef).array().matrix() - Eigen::VectorXd::Constant(50, fit.intercept);
    const Eigen::VectorXd grad = d.x.transpose() * r / 50.0;
    for (int j = 0; j < 6; ++j) {
        if (fit.coef[j] != 0.0) {
            CHECK(grad[j] == Approx(alpha * (fit.coef[j] > 0 ? 1 : -1)).margin(1e-6));
        } else {
            CHECK(std::abs(grad[j]) <= alpha + 1e-6);
        }
    }
}

TEST_CASE("SVR dual solution is feasible and fits a noiseless line") {
    const auto d = linear_data(40, 2, 0.0, 4);
    const SvrKernel lin{SvrKernel::Linear, 1.0};
    const auto k = kernel_matrix(d.x, d.x, lin);
    const double c = 10.0;
    const auto sol = solve_svr(k, d.y, c, 1e-3, 1e-6, 1000000);
    CHECK(sol.converged);
    CHECK(sol.coef.sum() == Approx(0.0).margin(1e-8));
    CHECK(sol.coef.cwiseAbs().maxCoeff() <= c + 1e-12);
    const Eigen::VectorXd pred = (k * sol.coef).array() + sol.offset;
    CHECK((pred - d.y).cwiseAbs().maxCoeff() <= 1e-3 + 1e-4);

    const SvrKernel rbf{SvrKernel::Rbf, 0.5};
    const auto kr = kernel_matrix(d.x.topRows(3), d.x.topRows(2), rbf);
    const double d01 = (d.x.row(0) - d.x.row(1)).squaredNorm();
    CHECK(kr(0, 1) == Approx(std::exp(-0.5 * d01)));
    CHECK(kr(1, 1) == Approx(1.0));
}

TEST_CASE("every learner is deterministic in its seed") {
    const auto d = linear_data(50, 5, 0.4, 2);
    for (auto a : {AlgorithmId::LASSO, AlgorithmId::RF, AlgorithmId::SVR_lin, AlgorithmId::SVR_rbf,
                   AlgorithmId::GBR, AlgorithmId::MLP}) {
        const auto grid = enumerate_grid(a);
        const auto& h = grid[grid.size() / 2];
        const auto m1 = fit(a, h, d.x, d.y, 17);
        const auto m2 = fit(a, h, d.x, d.y, 17);
        CHECK(m1.predict(d.x) == m2.predict(d.x));
        CHECK(m1.n_features == 5);
        CHECK_THROWS_AS(m1.predict(d.x.leftCols(4)), Error);
    }
    const auto h = grid_point(AlgorithmId::RF, 18);
    CHECK(fit(AlgorithmId::RF, h, d.x, d.y, 1).predict(d.x) != fit(AlgorithmId::RF, h, d.x, d.y, 2).predict(d.x));
}

TEST_CASE("tree ensembles fit signal") {
    const auto d = linear_data(80, 3, 0.1, 6);
    TreeOptions t;
    t.max_depth = 20;
    const auto rf = fit_random_forest(d.x, d.y, 100, t, true, 3);
    const double var = (d.y.array() - d.y.mean()).square().mean();
    CHECK((rf->predict(d.x) - d.y).squaredNorm() / 80.0 < 0.2 * var);
    const auto gb = fit_gradient_boosting(d.x, d.y, 200, 0.1, t, 3);
    CHECK((gb->predict(d.x) - d.y).squaredNorm() / 80.0 < 0.01 * var);

    RegressionTree tree;
    Rng rng(1);
    std::vector<int> rows(80);
    std::iota(rows.begin(), rows.end(), 0);
    t.max_depth = 2;
    tree.fit(d.x, d.y, rows, t, rng);
    CHECK(tree.depth() <= 2);
    CHECK(tree.node_count() <= 7);
}

TEST_CASE("MLP training reduces the loss") {
    const auto d = linear_data(60, 3, 0.1, 8);
    MlpSettings s;
    s.hidden = {10};
    MlpTrace trace;
    const auto m = fit_mlp(d.x, d.y, s, builtin_defaults().mlp, 5, &trace);
    REQUIRE(trace.losses.size() >= 2);
    CHECK(trace.losses.back() < 0.2 * trace.losses.front());
    CHECK(m->predict(d.x).size() == 60);
}

TEST_CASE("fit rejects degenerate inputs") {
    Eigen::MatrixXd x(1, 2);
    x << 1, 2;
    Eigen::VectorXd y(1);
    y << 3;
    try {
        fit(AlgorithmId::LASSO, grid_point(AlgorithmId::LASSO, 0), x, y, 1);
        FAIL("expected SingularFit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularFit);
    }
}

TEST_CASE("benchmarks") {
    NullModel null;
    Eigen::VectorXd y(4);
    y << 1, 3, 2, 6;
    null.fit({"A", "A", "B", "B"}, y);
    CHECK(null.predict("A") == 2.0);
    CHECK(null.predict("B") == 4.0);
    CHECK_THROWS_AS(null.predict("C"), Error);

    Eigen::VectorXd peaks(4), yields(4);
    peaks << 0.5, 0.6, 0.7, 0.8;
    yields << 1.0, 1.3, 1.4, 1.9;
    const auto line = fit_peak_ndvi(peaks, yields);
    const double mx = peaks.mean();
    const double my = yields.mean();
    const double slope = ((peaks.array() - mx) * (yields.array() - my)).sum() / (peaks.array() - mx).square().sum();
    CHECK(line.slope == Approx(slope));
    CHECK(line.intercept == Approx(my - slope * mx));
    CHECK(predict_peak_ndvi(line, 0.65) == Approx(my - slope * mx + slope * 0.65));
    const auto flat = fit_peak_ndvi(Eigen::VectorXd::Constant(4, 0.5), yields);
    CHECK(flat.degenerate);
    CHECK(predict_peak_ndvi(flat, 0.9) == Approx(my));
}

TEST_CASE("shipped defaults file equals the built-in values") {
    const auto file = load_defaults(YIELDCAST_DEFAULTS_FILE);
    const auto& b = builtin_defaults();
    CHECK(file.lasso.max_iter == b.lasso.max_iter);
    CHECK(file.lasso.tol == b.lasso.tol);
    CHECK(file.rf.bootstrap == b.rf.bootstrap);
    CHECK(file.rf.min_samples_leaf == b.rf.min_samples_leaf);
    CHECK(file.svr.tol == b.svr.tol);
    CHECK(file.svr.max_iter == b.svr.max_iter);
    CHECK(file.gbr.min_samples_leaf == b.gbr.min_samples_leaf);
    CHECK(file.mlp.max_epochs == b.mlp.max_epochs);
    CHECK(file.mlp.batch_size == b.mlp.batch_size);
    CHECK(file.mlp.learning_rate_init == b.mlp.learning_rate_init);
    CHECK(file.mlp.beta1 == b.mlp.beta1);
    CHECK(file.mlp.beta2 == b.mlp.beta2);
    CHECK(file.mlp.epsilon == b.mlp.epsilon);
    CHECK(file.mlp.early_stop_tol == b.mlp.early_stop_tol);
    CHECK(file.mlp.early_stop_patience == b.mlp.early_stop_patience);
    CHECK(file.mlp.adaptive_patience == b.mlp.adaptive_patience);
    CHECK(file.mlp.init_scale == b.mlp.init_scale);
    CHECK(file.mlp.shuffle == b.mlp.shuffle);
    CHECK(file.min_split_floor == b.min_split_floor);

    CHECK(parse_defaults("[lasso]\ntol = 1e-3\n").lasso.tol == 1e-3);
    CHECK_THROWS_AS(parse_defaults("[lasso]\nfoo = 1\n"), Error);
    CHECK_THROWS_AS(parse_defaults("[nope]\nx = 1\n"), Error);
}
