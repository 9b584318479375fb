#include "yieldcast/error.hpp"
#include "yieldcast/models.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>

namespace yieldcast::models {

std::string_view to_string(AlgorithmId a) {
    switch (a) {
    case AlgorithmId::LASSO: return "LASSO";
    case AlgorithmId::RF: return "RF";
    case AlgorithmId::SVR_lin: return "SVR_lin";
    case AlgorithmId::SVR_rbf: return "SVR_rbf";
    case AlgorithmId::GBR: return "GBR";
    case AlgorithmId::MLP: return "MLP";
    case AlgorithmId::Null: return "NULL";
    case AlgorithmId::PeakNdvi: return "PEAK_NDVI";
    }
    return "?";
}

std::optional<AlgorithmId> parse_algorithm(std::string_view name) {
    std::string lower(name);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    for (auto a : {AlgorithmId::LASSO, AlgorithmId::RF, AlgorithmId::SVR_lin, AlgorithmId::SVR_rbf, AlgorithmId::GBR,
                   AlgorithmId::MLP, AlgorithmId::Null, AlgorithmId::PeakNdvi}) {
        std::string id(to_string(a));
        std::transform(id.begin(), id.end(), id.begin(), [](unsigned char c) { return std::tolower(c); });
        if (id == lower) return a;
    }
    return std::nullopt;
}

bool is_benchmark(AlgorithmId a) {
    return a == AlgorithmId::Null || a == AlgorithmId::PeakNdvi;
}

const ParamValue& Assignment::get(std::string_view name) const {
    for (const auto& [k, v] : values) {
        if (k == name) return v;
    }
    fail(ErrorCode::InvalidConfig, "hyperparameter '" + std::string(name) + "' not set");
}

double Assignment::real(std::string_view name) const {
    const auto& v = get(name);
    if (const auto* d = std::get_if<double>(&v)) return *d;
    if (const auto* i = std::get_if<long>(&v)) return static_cast<double>(*i);
    fail(ErrorCode::InvalidConfig, "hyperparameter '" + std::string(name) + "' is not numeric");
}

long Assignment::integer(std::string_view name) const {
    const auto& v = get(name);
    if (const auto* i = std::get_if<long>(&v)) return *i;
    fail(ErrorCode::InvalidConfig, "hyperparameter '" + std::string(name) + "' is not an integer");
}

const std::string& Assignment::text(std::string_view name) const {
    const auto& v = get(name);
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    fail(ErrorCode::InvalidConfig, "hyperparameter '" + std::string(name) + "' is not text");
}

const std::vector<int>& Assignment::layers(std::string_view name) const {
    const auto& v = get(name);
    if (const auto* l = std::get_if<std::vector<int>>(&v)) return *l;
    fail(ErrorCode::InvalidConfig, "hyperparameter '" + std::string(name) + "' is not a layer list");
}

std::string Assignment::to_string() const {
    std::string out;
    for (const auto& [k, v] : values) {
        if (!out.empty()) out += ';';
        out += k + '=';
        std::visit(
            [&out](const auto& x) {
                using T = std::decay_t<decltype(x)>;
                if constexpr (std::is_same_v<T, double>) {
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.6g", x);
                    out += buf;
                } else if constexpr (std::is_same_v<T, long>) {
                    out += std::to_string(x);
                } else if constexpr (std::is_same_v<T, std::string>) {
                    out += x;
                } else {
                    for (std::size_t i = 0; i < x.size(); ++i) {
                        if (i) out += '-';
                        out += std::to_string(x[i]);
                    }
                }
            },
            v);
    }
    return out;
}

std::vector<double> logspace(double lo_exp, double hi_exp, int n) {
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double e = n == 1 ? lo_exp : lo_exp + (hi_exp - lo_exp) * i / (n - 1);
        out.push_back(std::pow(10.0, e));
    }
    return out;
}

namespace {

std::vector<ParamValue> reals(const std::vector<double>& v) {
    return {v.begin(), v.end()};
}

std::vector<ParamValue> ints(std::initializer_list<long> v) {
    return {v.begin(), v.end()};
}

std::vector<ParamValue> texts(std::initializer_list<const char*> v) {
    std::vector<ParamValue> out;
    for (const char* s : v) out.emplace_back(std::string(s));
    return out;
}

std::vector<Assignment> product(const std::vector<std::pair<std::string, std::vector<ParamValue>>>& axes) {
    std::vector<Assignment> out{Assignment{}};
    for (const auto& [name, values] : axes) {
        std::vector<Assignment> next;
        next.reserve(out.size() * values.size());
        for (const auto& partial : out) {
            for (const auto& v : values) {
                Assignment a = partial;
                a.values.emplace_back(name, v);
                next.push_back(std::move(a));
            }
        }
        out = std::move(next);
    }
    return out;
}

std::vector<ParamValue> mlp_architectures() {
    std::vector<ParamValue> out;
    const int widths[] = {16, 32, 48, 64};
    for (int a : widths) {
        for (int b : widths) out.emplace_back(std::vector<int>{a, b});
    }
    const std::vector<std::vector<int>> three{{16, 32, 16}, {16, 48, 16}, {32, 48, 32}, {32, 64, 32}, {48, 64, 48},
                                              {32, 32, 32}, {48, 48, 48}, {64, 64, 64}, {16, 16, 16}};
    for (const auto& l : three) out.emplace_back(l);
    return out;
}

}  // namespace

std::vector<Assignment> enumerate_grid(AlgorithmId a, GbrGrid gbr_grid) {
    switch (a) {
    case AlgorithmId::LASSO:
        return product({{"alpha", reals(logspace(-5.0, 0.0, 13))}});
    case AlgorithmId::RF:
        return product({{"max_depth", ints({10, 15, 20, 25, 30, 35, 40})},
                        {"max_features", texts({"all", "sqrt"})},
                        {"n_estimators", ints({100, 250, 500})},
                        {"min_samples_split", reals({0.2, 0.32, 0.44, 0.56, 0.68, 0.8})}});
    case AlgorithmId::SVR_lin:
    case AlgorithmId::SVR_rbf:
        return product({{"gamma", reals(logspace(-2.0, 2.0, 7))},
                        {"epsilon", reals(logspace(-6.0, 0.5, 7))},
                        {"C", reals(logspace(-5.0, 2.0, 8))}});
    case AlgorithmId::GBR: {
        const std::vector<double> split = gbr_grid == GbrGrid::Compact
                                              ? std::vector<double>{0.1, 0.8}
                                              : std::vector<double>{0.1, 0.24, 0.38, 0.52, 0.66, 0.8};
        return product({{"learning_rate", reals({0.01, 0.05, 0.1})},
                        {"max_depth", ints({10, 20, 40})},
                        {"n_estimators", ints({100, 250, 500})},
                        {"min_samples_split", reals(split)}});
    }
    case AlgorithmId::MLP:
        return product({{"alpha", reals(logspace(-5.0, -1.0, 6))},
                        {"activation", texts({"relu", "tanh"})},
                        {"learning_rate", texts({"constant", "adaptive"})},
                        {"hidden_layer_sizes", mlp_architectures()}});
    case AlgorithmId::Null:
    case AlgorithmId::PeakNdvi:
        return {Assignment{}};
    }
    return {};
}

std::string effective_key(AlgorithmId a, const Assignment& h) {
    if (a != AlgorithmId::SVR_lin) return h.to_string();
    Assignment reduced;
    for (const auto& kv : h.values) {
        if (kv.first != "gamma") reduced.values.push_back(kv);
    }
    return reduced.to_string();
}

int min_split_count(double fraction, long n_train, int floor) {
    const long k = std::lround(fraction * static_cast<double>(n_train));
    return static_cast<int>(std::max<long>(floor, k));
}

}  // namespace yieldcast::models
