#include "yieldcast/model_defaults.hpp"

#include "yieldcast/csv.hpp"
#include "yieldcast/error.hpp"

#include <functional>
#include <map>

namespace yieldcast::models {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    fail(ErrorCode::InvalidConfig, "defaults: '" + key + "' expects true/false, got '" + v + "'");
}

double parse_num(const std::string& v, const std::string& key) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidConfig, "defaults: '" + key + "' expects a number, got '" + v + "'");
    }
}

}  // namespace

const ModelDefaults& builtin_defaults() {
    static const ModelDefaults d{};
    return d;
}

ModelDefaults parse_defaults(std::string_view text) {
    ModelDefaults d;
    using Setter = std::function<void(const std::string&, const std::string&)>;
    auto num = [](auto& field) -> Setter {
        return [&field](const std::string& v, const std::string& key) {
            field = static_cast<std::remove_reference_t<decltype(field)>>(parse_num(v, key));
        };
    };
    auto flag = [](bool& field) -> Setter {
        return [&field](const std::string& v, const std::string& key) { field = parse_bool(v, key); };
    };
    const std::map<std::string, Setter> setters{
        {"lasso.max_iter", num(d.lasso.max_iter)},
        {"lasso.tol", num(d.lasso.tol)},
        {"rf.bootstrap", flag(d.rf.bootstrap)},
        {"rf.min_samples_leaf", num(d.rf.min_samples_leaf)},
        {"svr.tol", num(d.svr.tol)},
        {"svr.max_iter", num(d.svr.max_iter)},
        {"gbr.min_samples_leaf", num(d.gbr.min_samples_leaf)},
        {"mlp.max_epochs", num(d.mlp.max_epochs)},
        {"mlp.batch_size", num(d.mlp.batch_size)},
        {"mlp.learning_rate_init", num(d.mlp.learning_rate_init)},
        {"mlp.beta1", num(d.mlp.beta1)},
        {"mlp.beta2", num(d.mlp.beta2)},
        {"mlp.epsilon", num(d.mlp.epsilon)},
        {"mlp.early_stop_tol", num(d.mlp.early_stop_tol)},
        {"mlp.early_stop_patience", num(d.mlp.early_stop_patience)},
        {"mlp.adaptive_patience", num(d.mlp.adaptive_patience)},
        {"mlp.init_scale", num(d.mlp.init_scale)},
        {"mlp.shuffle", flag(d.mlp.shuffle)},
        {"selection.min_split_floor", num(d.min_split_floor)},
    };

    std::string section;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string line = trim(text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos));
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line = trim(line.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(std::string_view(line).substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorCode::InvalidConfig, "defaults line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = section + "." + trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end()) fail(ErrorCode::InvalidConfig, "defaults: unknown key '" + key + "'");
        it->second(value, key);
    }
    return d;
}

ModelDefaults load_defaults(const std::string& path) {
    return parse_defaults(csv::read_file(path));
}

}  // namespace yieldcast::models
