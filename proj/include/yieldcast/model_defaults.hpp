#pragma once

#include <string>
#include <string_view>

namespace yieldcast::models {

// Every hyperparameter outside the search grids. The shipped data/defaults.cfg
// mirrors these values; load_defaults() overrides them key by key.
struct ModelDefaults {
    struct Lasso {
        int max_iter = 10000;
        double tol = 1e-4;  // duality gap relative to ||y - mean(y)||^2
    } lasso;

    struct Forest {
        bool bootstrap = true;
        int min_samples_leaf = 1;
    } rf;

    struct Svr {
        double tol = 1e-3;  // maximal violating pair gap
        long max_iter = 100000;
    } svr;

    struct Boosting {
        int min_samples_leaf = 1;
    } gbr;

    struct Mlp {
        int max_epochs = 500;
        int batch_size = 200;  // clamped to the row count
        double learning_rate_init = 1e-3;
        double beta1 = 0.9;
        double beta2 = 0.999;
        double epsilon = 1e-8;
        double early_stop_tol = 1e-6;
        int early_stop_patience = 20;
        int adaptive_patience = 10;
        double init_scale = 3.0;  // weights ~ U(-b, b), b = sqrt(init_scale / fan_in)
        bool shuffle = true;
    } mlp;

    int min_split_floor = 2;
};

const ModelDefaults& builtin_defaults();

// INI-style text: [section] headers, key = value lines, '#' comments.
// Unknown sections or keys throw InvalidConfig.
ModelDefaults parse_defaults(std::string_view text);
ModelDefaults load_defaults(const std::string& path);

}  // namespace yieldcast::models
